#include "sumfree/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "sumfree/apfree.hpp"
#include "sumfree/construction.hpp"
#include "sumfree/core_math.hpp"
#include "sumfree/errors.hpp"
#include "sumfree/pi_solver.hpp"
#include "sumfree/random.hpp"
#include "sumfree/serialization.hpp"

namespace sumfree::cli {

namespace {

// SUMFREE_MAX_W overrides the |W| enumeration cap.
std::uint64_t max_words_from_env() {
  const char* raw = std::getenv("SUMFREE_MAX_W");
  if (raw == nullptr || *raw == '\0') return kDefaultMaxW;
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(raw, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != std::string(raw).size() || value == 0) {
    throw PreconditionError("SUMFREE_MAX_W must be a positive integer");
  }
  return value;
}

Json theta_json(const ThetaSolution& t) {
  Json j;
  j["q"] = t.q;
  j["rho"] = t.rho;
  j["theta"] = t.theta;
  j["log_theta"] = std::log(t.theta);
  j["psi"] = std::vector<double>(t.psi.probs().begin(), t.psi.probs().end());
  j["entropy_psi"] = entropy(t.psi);
  return j;
}

Json pi_json(const SymmetricDistribution& pi) {
  Json orbits = Json::array();
  for (std::size_t o = 0; o < pi.space.orbits().size(); ++o) {
    const Orbit& orbit = pi.space.orbits()[o];
    Json entry;
    entry["rep"] = orbit.rep;
    entry["size"] = orbit.size;
    entry["weight"] = pi.orbit_weights[o];
    orbits.push_back(std::move(entry));
  }
  Json j;
  j["q"] = pi.space.q();
  j["orbits"] = std::move(orbits);
  j["marginal"] = pi.marginal(2);
  j["residual"] = pi.residual;
  j["sweeps"] = pi.sweeps;
  j["entropy"] = entropy(pi.as_distribution());
  return j;
}

Json lattice_json(const LatticeSymmetricDistribution& ld) {
  Json orbits = Json::array();
  for (std::size_t o = 0; o < ld.space.orbits().size(); ++o) {
    Json entry;
    entry["rep"] = ld.space.orbits()[o].rep;
    entry["size"] = ld.space.orbits()[o].size;
    entry["count"] = ld.orbit_counts[o];
    orbits.push_back(std::move(entry));
  }
  const CountVector m = marginal_counts(ld);
  Json j;
  j["n"] = ld.n;
  j["orbits"] = std::move(orbits);
  j["marginal_counts"] = std::vector<std::uint64_t>(m.counts().begin(), m.counts().end());
  return j;
}

Json audit_json(const ExpectationAudit& a) {
  Json j;
  j["p"] = a.p;
  j["s_size"] = a.s_size;
  j["w_count"] = a.w_count.str();
  j["v_count"] = a.v_count.str();
  j["seeds"] = a.seeds;
  j["expected_vp"] = a.expected_vp;
  j["mean_vp"] = a.mean_vp;
  j["stderr_vp"] = a.stderr_vp;
  j["mean_vpp"] = a.mean_vpp;
  j["stderr_vpp"] = a.stderr_vpp;
  j["vpp_lower_bound"] = a.expected_vp / 4.0;
  j["vp_within_tolerance"] = a.vp_within_tolerance;
  j["vpp_above_bound"] = a.vpp_above_bound;
  j["passed"] = a.passed();
  return j;
}

void write_tsv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "\t" : "") << cells[i];
  out << '\n';
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tri-colored sum-free set construction and verification", "sumfree"};
  app.require_subcommand(1);

  int q = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t p = 0;
  std::uint64_t seeds = 0;
  std::uint64_t n_min = 0;
  std::uint64_t n_max = 0;
  double tol = 1e-10;
  std::string out_path;
  std::string in_path;

  auto* theta_cmd = app.add_subcommand("theta", "Solve for rho, theta and psi");
  theta_cmd->add_option("--q", q, "Group order q >= 2")->required()->check(CLI::Range(2, 255));

  auto* pi_cmd = app.add_subcommand("pi", "Symmetric distribution on T and its lattice rounding");
  pi_cmd->add_option("--q", q, "Group order q >= 2")->required()->check(CLI::Range(2, 255));
  auto* pi_n = pi_cmd->add_option("--n", n, "Round to multiples of 1/n (n divisible by 3)");
  pi_cmd->add_option("--tol", tol, "IPF marginal tolerance")->check(CLI::PositiveNumber);

  auto* behrend_cmd = app.add_subcommand("behrend", "AP-free subset of F_p");
  behrend_cmd->add_option("--p", p, "Odd prime")->required();
  behrend_cmd->add_option("--seed", seed, "Seed for the greedy trials");

  auto* construct_cmd = app.add_subcommand("construct", "Run the randomized construction");
  construct_cmd->add_option("--q", q, "Group order q >= 2")->required()->check(CLI::Range(2, 255));
  construct_cmd->add_option("--n", n, "Dimension, divisible by 3")->required();
  construct_cmd->add_option("--seed", seed, "Seed driving all randomness");
  construct_cmd->add_option("--out", out_path, "Write the triple set JSON here");

  auto* verify_cmd = app.add_subcommand("verify", "Check that a triple set JSON file is sum-free");
  verify_cmd->add_option("path", in_path, "Triple set JSON file")->required();

  auto* expect_cmd = app.add_subcommand("expect", "Monte Carlo audit of E|V'| and E|V''|");
  expect_cmd->add_option("--q", q, "Group order q >= 2")->required()->check(CLI::Range(2, 255));
  expect_cmd->add_option("--n", n, "Dimension, divisible by 3")->required();
  expect_cmd->add_option("--seeds", seeds, "Number of functionals (>= 30)")->required();
  expect_cmd->add_option("--base-seed", seed, "First seed");

  auto* table_cmd = app.add_subcommand("table", "Best |V''| per n against the reference bounds (TSV)");
  table_cmd->add_option("--q", q, "Group order q >= 2")->required()->check(CLI::Range(2, 255));
  table_cmd->add_option("--n-min", n_min, "Smallest n")->required();
  table_cmd->add_option("--n-max", n_max, "Largest n")->required();
  table_cmd->add_option("--seeds", seeds, "Seeds per n")->required()->check(CLI::PositiveNumber);

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("sumfree");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    PipelineOptions options;
    options.max_words = max_words_from_env();

    if (theta_cmd->parsed()) {
      out << dump(theta_json(solve_theta(q)));
      return kExitOk;
    }

    if (pi_cmd->parsed()) {
      if (pi_n->count() > 0 && (n == 0 || n % 3 != 0)) {
        err << "error: n must be a positive multiple of 3\n";
        return kExitUsage;
      }
      options.pi.tol = tol;
      const SymmetricDistribution pi = solve_pi(q, options.pi);
      Json j = pi_json(pi);
      if (pi_n->count() > 0) j["lattice"] = lattice_json(round_to_lattice(pi, n));
      out << dump(j);
      return kExitOk;
    }

    if (behrend_cmd->parsed()) {
      const APFreeSet s = build_apfree(p, seed);
      Json j;
      j["p"] = s.p();
      j["seed"] = seed;
      j["size"] = s.size();
      j["members"] = s.members();
      j["verified"] = !verify_apfree(s).has_value();
      out << dump(j);
      return kExitOk;
    }

    if (construct_cmd->parsed()) {
      if (n == 0 || n % 3 != 0) {
        err << "error: n must be a positive multiple of 3\n";
        return kExitUsage;
      }
      const auto start = std::chrono::steady_clock::now();
      const PipelineResult result = run_pipeline(q, n, seed, options);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const std::string body = dump(triple_set_to_json(result.vpp, &result.report));

      Json record = report_to_json(result.report);
      record["wall_seconds"] = seconds;
      if (out_path.empty()) {
        out << body;
        err << record.dump() << '\n';
      } else {
        std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
        if (!file) {
          err << "error: cannot write " << out_path << '\n';
          return kExitUsage;
        }
        file << body;
        out << dump(record);
      }
      return kExitOk;
    }

    if (verify_cmd->parsed()) {
      std::ifstream file(in_path, std::ios::binary);
      if (!file) {
        err << "error: cannot read " << in_path << '\n';
        return kExitUsage;
      }
      TripleSet ts;
      try {
        ts = triple_set_from_json(nlohmann::json::parse(file));
      } catch (const nlohmann::json::exception& e) {
        err << "error: malformed JSON: " << e.what() << '\n';
        return kExitUsage;
      }
      if (auto bad = verify_sum_free(ts)) {
        Json j;
        j["sum_free"] = false;
        j["size"] = ts.size();
        j["witness"] = {bad->i, bad->j, bad->k};
        out << dump(j);
        return kExitVerifyFailed;
      }
      Json j;
      j["sum_free"] = true;
      j["size"] = ts.size();
      out << dump(j);
      return kExitOk;
    }

    if (expect_cmd->parsed()) {
      if (n == 0 || n % 3 != 0) {
        err << "error: n must be a positive multiple of 3\n";
        return kExitUsage;
      }
      const ExpectationAudit audit = expectation_audit(q, n, seeds, seed, options);
      out << dump(audit_json(audit));
      return audit.passed() ? kExitOk : kExitVerifyFailed;
    }

    if (table_cmd->parsed()) {
      std::vector<std::uint64_t> ns;
      for (std::uint64_t m = std::max<std::uint64_t>(n_min, 1); m <= n_max; ++m) {
        if (m % 3 == 0) ns.push_back(m);
      }
      if (ns.empty()) {
        err << "error: no multiple of 3 in [n-min, n-max]\n";
        return kExitUsage;
      }
      write_tsv_row(out, {"n", "seeds", "p", "s_size", "w_count", "v_count", "v_exact", "best_vpp",
                          "log_best_vpp_over_n", "log_theta", "log_lower", "log_upper"});
      for (std::uint64_t m : ns) {
        PreparedInstance instance = prepare_instance(q, m, 0, options);
        std::size_t best = 0;
        PipelineReport report;
        for (std::uint64_t s = 0; s < seeds; ++s) {
          instance.s = build_apfree(instance.p, mix_seed(s, kApFreeStream));
          PipelineResult r = run_pipeline(instance, s);
          if (s == 0 || r.report.vpp_size > best) best = r.report.vpp_size;
          report = std::move(r.report);
        }
        const double ratio = best > 0 ? std::log(static_cast<double>(best)) / static_cast<double>(m)
                                      : -std::numeric_limits<double>::infinity();
        write_tsv_row(out, {std::to_string(m), std::to_string(seeds), std::to_string(instance.p),
                            std::to_string(report.s_size), instance.w_count.str(),
                            instance.v_count.str(), instance.v_exact ? "1" : "0",
                            std::to_string(best), fmt(ratio), fmt(report.log_theta),
                            fmt(report.log_lower), fmt(report.log_upper)});
      }
      return kExitOk;
    }
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sumfree::cli
