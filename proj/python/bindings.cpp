#include <algorithm>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sumfree/construction.hpp"
#include "sumfree/primes.hpp"
#include "sumfree/serialization.hpp"

namespace py = pybind11;
using namespace sumfree;

namespace {

py::int_ to_py(const BigInt& x) {
  return py::int_(py::module_::import("builtins").attr("int")(x.str()));
}

py::dict theta_dict(const ThetaSolution& t) {
  py::dict d;
  d["q"] = t.q;
  d["rho"] = t.rho;
  d["theta"] = t.theta;
  d["psi"] = std::vector<double>(t.psi.probs().begin(), t.psi.probs().end());
  return d;
}

py::dict pi_dict(const SymmetricDistribution& pi) {
  py::list orbits;
  for (std::size_t o = 0; o < pi.space.orbits().size(); ++o) {
    py::dict entry;
    entry["rep"] = pi.space.orbits()[o].rep;
    entry["size"] = pi.space.orbits()[o].size;
    entry["weight"] = pi.orbit_weights[o];
    orbits.append(entry);
  }
  py::dict d;
  d["q"] = pi.space.q();
  d["orbits"] = orbits;
  d["marginals"] = std::vector<std::vector<double>>{pi.marginal(0), pi.marginal(1), pi.marginal(2)};
  d["residual"] = pi.residual;
  d["sweeps"] = pi.sweeps;
  return d;
}

py::object parse_json(const std::string& text) {
  return py::module_::import("json").attr("loads")(text);
}

std::string to_json_text(const py::object& data) {
  return py::module_::import("json").attr("dumps")(data).cast<std::string>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tri-colored sum-free sets in (Z/q)^n";

  py::register_exception<Error>(m, "SumfreeError", PyExc_ValueError);

  m.def("solve_theta", [](int q) { return theta_dict(solve_theta(q)); }, py::arg("q"));
  m.def("theta_objective", &theta_objective, py::arg("q"), py::arg("sigma"));
  m.def(
      "entropy", [](std::vector<double> probs) { return entropy(Distribution(std::move(probs))); },
      py::arg("probs"));
  m.def(
      "multinomial", [](std::vector<std::uint64_t> counts) { return to_py(multinomial(CountVector(counts))); },
      py::arg("counts"));
  m.def(
      "log_multinomial_bounds",
      [](std::vector<std::uint64_t> counts) {
        const LogBracket b = log_multinomial_bounds(CountVector(counts));
        return py::make_tuple(b.lower, b.upper);
      },
      py::arg("counts"));
  m.def(
      "size_bounds",
      [](int q, std::uint64_t n) {
        const SizeBounds b = size_bounds(q, n);
        return py::make_tuple(b.log_lower, b.log_upper);
      },
      py::arg("q"), py::arg("n"));

  m.def(
      "solve_pi",
      [](int q, double tol) {
        PiSolverOptions options;
        options.tol = tol;
        return pi_dict(solve_pi(q, options));
      },
      py::arg("q"), py::arg("tol") = 1e-10);
  m.def(
      "round_to_lattice",
      [](int q, std::uint64_t n) {
        const LatticeSymmetricDistribution ld = round_to_lattice(solve_pi(q), n);
        const CountVector marginal = marginal_counts(ld);
        py::dict d;
        d["n"] = ld.n;
        d["orbit_counts"] = ld.orbit_counts;
        d["marginal_counts"] = std::vector<std::uint64_t>(marginal.counts().begin(), marginal.counts().end());
        return d;
      },
      py::arg("q"), py::arg("n"));

  m.def("is_prime", &is_prime, py::arg("n"));
  m.def("next_prime", &next_prime, py::arg("n"));
  m.def(
      "build_apfree", [](std::uint64_t p, std::uint64_t seed) { return build_apfree(p, seed).members(); },
      py::arg("p"), py::arg("seed") = 0);
  m.def(
      "verify_apfree",
      [](std::uint64_t p, std::vector<std::uint64_t> members) -> py::object {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        const auto v = verify_apfree(p, members);
        if (!v) return py::none();
        return py::make_tuple(v->x, v->y, v->z);
      },
      py::arg("p"), py::arg("members"));

  m.def(
      "count_instance",
      [](int q, std::uint64_t n) {
        const InstanceParams params = make_instance(q, n);
        py::dict d;
        d["marginal"] = std::vector<std::uint64_t>(params.marginal.counts().begin(),
                                                   params.marginal.counts().end());
        d["w_count"] = to_py(count_W(params));
        d["v_count"] = to_py(count_V(params));
        return d;
      },
      py::arg("q"), py::arg("n"));
  m.def("choose_prime",
        [](const py::int_& v, const py::int_& w) {
          return choose_prime(BigInt(py::str(v).cast<std::string>()), BigInt(py::str(w).cast<std::string>()));
        },
        py::arg("count_v"), py::arg("count_w"));

  m.def(
      "construct",
      [](int q, std::uint64_t n, std::uint64_t seed, std::uint64_t max_words) {
        PipelineOptions options;
        options.max_words = max_words;
        PipelineResult r;
        {
          py::gil_scoped_release release;
          r = run_pipeline(q, n, seed, options);
        }
        return parse_json(triple_set_to_json(r.vpp, &r.report).dump());
      },
      py::arg("q"), py::arg("n"), py::arg("seed") = 0, py::arg("max_words") = kDefaultMaxW);
  m.def(
      "verify_sum_free",
      [](const py::object& data) -> py::object {
        const TripleSet ts = triple_set_from_json(nlohmann::json::parse(to_json_text(data)));
        const auto v = verify_sum_free(ts);
        if (!v) return py::none();
        return py::make_tuple(v->i, v->j, v->k);
      },
      py::arg("triple_set"));
  m.def(
      "expectation_audit",
      [](int q, std::uint64_t n, std::uint64_t seeds, std::uint64_t base_seed) {
        ExpectationAudit a;
        {
          py::gil_scoped_release release;
          a = expectation_audit(q, n, seeds, base_seed);
        }
        py::dict d;
        d["p"] = a.p;
        d["s_size"] = a.s_size;
        d["w_count"] = to_py(a.w_count);
        d["v_count"] = to_py(a.v_count);
        d["seeds"] = a.seeds;
        d["expected_vp"] = a.expected_vp;
        d["mean_vp"] = a.mean_vp;
        d["stderr_vp"] = a.stderr_vp;
        d["mean_vpp"] = a.mean_vpp;
        d["stderr_vpp"] = a.stderr_vpp;
        d["passed"] = a.passed();
        return d;
      },
      py::arg("q"), py::arg("n"), py::arg("seeds"), py::arg("base_seed") = 0);
}
