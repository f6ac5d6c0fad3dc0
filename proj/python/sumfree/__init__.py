"""Randomized tri-colored sum-free sets in (Z/q)^n."""

from ._core import (
    SumfreeError,
    build_apfree,
    choose_prime,
    construct,
    count_instance,
    entropy,
    expectation_audit,
    is_prime,
    log_multinomial_bounds,
    multinomial,
    next_prime,
    round_to_lattice,
    size_bounds,
    solve_pi,
    solve_theta,
    theta_objective,
    verify_apfree,
    verify_sum_free,
)

__all__ = [
    "SumfreeError",
    "build_apfree",
    "choose_prime",
    "construct",
    "count_instance",
    "entropy",
    "expectation_audit",
    "is_prime",
    "log_multinomial_bounds",
    "multinomial",
    "next_prime",
    "round_to_lattice",
    "size_bounds",
    "solve_pi",
    "solve_theta",
    "theta_objective",
    "verify_apfree",
    "verify_sum_free",
]
