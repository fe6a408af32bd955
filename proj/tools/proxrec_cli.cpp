#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <limits>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "proxrec/certificates.hpp"
#include "proxrec/experiments.hpp"
#include "proxrec/io.hpp"

using json = nlohmann::json;
using namespace proxrec;

namespace {

struct SpecFlags {
  std::string family = "soft";
  double lambda = 1.0;
  double p = 0.5;
  double mu = 0.0;
};

void add_spec_flags(CLI::App* cmd, SpecFlags& f) {
  cmd->add_option("--family", f.family, "soft | pshrink | firm | hard")
      ->check(CLI::IsMember({"soft", "pshrink", "firm", "hard"}));
  cmd->add_option("--lambda", f.lambda, "threshold scale, > 0");
  cmd->add_option("--p", f.p, "p-shrinkage exponent, p <= 1");
  cmd->add_option("--mu", f.mu, "firm upper threshold, >= lambda");
}

PenaltySpec make_spec(const SpecFlags& f) {
  PenaltySpec spec;
  spec.family = family_from_name(f.family);
  spec.lambda = f.lambda;
  spec.p = f.p;
  spec.mu = f.mu;
  spec.validate();
  return spec;
}

json spec_to_json(const PenaltySpec& spec) {
  json j = {{"family", family_name(spec.family)}, {"lambda", spec.lambda}};
  if (spec.family == PenaltyFamily::PShrink) j["p"] = spec.p;
  if (spec.family == PenaltyFamily::Firm) j["mu"] = spec.mu;
  return j;
}

PenaltySpec spec_from_json(const json& j) {
  SpecFlags f;
  f.family = j.at("family").get<std::string>();
  f.lambda = j.at("lambda").get<double>();
  if (j.contains("p")) f.p = j["p"].get<double>();
  if (j.contains("mu")) f.mu = j["mu"].get<double>();
  return make_spec(f);
}

/// Problem CSV convention: m x (n + 1) matrix [A | b].
SensingProblem load_problem(const std::string& path, double epsilon) {
  Mat ab = read_matrix_csv(path);
  if (ab.cols() < 3 || ab.rows() >= ab.cols() - 1) {
    throw std::runtime_error("problem CSV must be m x (n+1) = [A | b] with m < n");
  }
  SensingProblem prob;
  prob.A = ab.leftCols(ab.cols() - 1);
  prob.b = ab.col(ab.cols() - 1);
  prob.epsilon = epsilon;
  return prob;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::FixedPoint: return "fixed_point";
    default: return "max_iters";
  }
}

json solver_sidecar(const SolverResult& res) {
  return {{"iterations", res.iterations},
          {"termination", termination_name(res.termination)},
          {"stationarity_residual", res.stationarity_residual},
          {"objective_final",
           res.objective_trace.empty() ? json() : json(res.objective_trace.back())}};
}

/// --config FILE: JSON object of long-option defaults, e.g. {"lambda": 0.1,
/// "lines": [2, 4]}. Expanded into flags ahead of the explicit ones so the
/// command line always wins.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) return args;
  for (std::size_t i = 1; i + 1 < args.size(); ++i) {
    if (args[i] != "--config") continue;
    std::ifstream in(args[i + 1]);
    if (!in) throw std::runtime_error("cannot open config: " + args[i + 1]);
    json cfg = json::parse(in);
    std::vector<std::string> injected;
    for (auto& [key, value] : cfg.items()) {
      std::string flag = "--" + key;
      // explicit command-line flags win over config values
      if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
      auto push_one = [&](const json& v) {
        if (v.is_boolean()) {
          if (v.get<bool>()) injected.push_back(flag);
          return;
        }
        injected.push_back(flag);
        injected.push_back(v.is_string() ? v.get<std::string>() : json(v).dump());
      };
      if (value.is_array()) {
        for (const auto& v : value) push_one(v);
      } else {
        push_one(value);
      }
    }
    args.erase(args.begin() + i, args.begin() + i + 2);
    args.insert(args.begin() + 1, injected.begin(), injected.end());
    break;
  }
  return args;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"sparse recovery via shrinkage penalties"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  std::string out;

  SpecFlags spec_flags;
  std::string in_path, problem_path, penalty_path;
  double epsilon = 0.0, tol = 1e-12, success_tol = 1e-3;
  int max_iters = 100000, k = 1;
  std::int64_t budget = 1'000'000;
  double rho = 1.0;
  bool rescale = false;

  std::string config_path;
  auto add_common = [&](CLI::App* cmd, bool out_required = true) {
    cmd->add_option("--seed", seed, "deterministic seed");
    auto* o = cmd->add_option("--out", out, "output path");
    if (out_required) o->required();
    // consumed by expand_config; declared so it shows in help
    cmd->add_option("--config", config_path, "JSON file of option defaults");
  };

  auto* shrink = app.add_subcommand("shrink", "apply a shrinkage mapping to a vector");
  add_spec_flags(shrink, spec_flags);
  shrink->add_option("--in", in_path, "input vector CSV")->required();
  add_common(shrink);

  auto* peval = app.add_subcommand("penalty-eval", "tabulate (w, g(w), g'(w))");
  add_spec_flags(peval, spec_flags);
  double wmin = 0.0, wmax = 5.0;
  int steps = 101;
  peval->add_option("--wmin", wmin);
  peval->add_option("--wmax", wmax);
  peval->add_option("--steps", steps)->check(CLI::PositiveNumber);
  add_common(peval);

  auto* ips = app.add_subcommand("solve-ips", "forward-backward shrinkage iteration");
  add_spec_flags(ips, spec_flags);
  ips->add_option("--problem", problem_path, "[A | b] CSV")->required();
  ips->add_option("--max-iters", max_iters);
  ips->add_option("--tol", tol, "step tolerance");
  ips->add_flag("--rescale", rescale, "rescale A, b when ||A|| >= 1");
  add_common(ips);

  auto* admm = app.add_subcommand("solve-admm", "equality-constrained ADMM");
  add_spec_flags(admm, spec_flags);
  admm->add_option("--problem", problem_path, "[A | b] CSV")->required();
  admm->add_option("--max-iters", max_iters);
  admm->add_option("--tol", tol, "step tolerance");
  admm->add_option("--rho", rho, "augmented Lagrangian weight");
  add_common(admm);

  auto* certify = app.add_subcommand("certify", "exact-recovery certificate");
  add_spec_flags(certify, spec_flags);
  certify->add_option("--problem", problem_path, "[A | b] CSV")->required();
  certify->add_option("--penalty", penalty_path, "penalty spec JSON (overrides flags)");
  certify->add_option("--k", k, "target sparsity")->check(CLI::PositiveNumber);
  certify->add_option("--epsilon", epsilon, "noise radius")->check(CLI::NonNegativeNumber);
  certify->add_option("--budget", budget, "support enumeration budget");
  add_common(certify, /*out_required=*/false);  // stdout when --out is omitted

  auto* phase = app.add_subcommand("phase-diagram", "recovery success rates over (m, k)");
  PhaseDiagramConfig pd;
  add_spec_flags(phase, spec_flags);
  phase->add_option("--n", pd.n)->check(CLI::PositiveNumber);
  phase->add_option("--m", pd.m_values, "measurement counts")->required();
  phase->add_option("--k", pd.k_values, "sparsity levels")->required();
  phase->add_option("--trials", pd.trials)->check(CLI::PositiveNumber);
  phase->add_option("--success-tol", pd.success_tol);
  phase->add_option("--max-iters", pd.max_iters);
  add_common(phase);

  auto* phantom = app.add_subcommand("phantom", "radial-line phantom reconstruction sweep");
  PhantomSweepConfig ps;
  ps.specs = {PenaltySpec::soft(0.1), PenaltySpec::pshrink(0.1, -0.5),
              PenaltySpec::firm(0.1, 2.5)};
  phantom->add_option("--size", ps.size)->check(CLI::PositiveNumber);
  phantom->add_option("--lines", ps.line_counts, "line counts to try")->required();
  phantom->add_option("--success-tol", ps.success_tol);
  phantom->add_option("--max-iters", ps.max_iters);
  phantom->add_option("--rho-mult", ps.rho_over_lambda, "ADMM rho as a multiple of lambda");
  phantom->add_option("--angle-offset", ps.angle_offset, "mask rotation in radians");
  phantom->add_flag("--stop-early", ps.stop_at_first_success,
                    "skip larger line counts after the first success");
  std::string preview_path;
  phantom->add_option("--preview", preview_path, "write ground-truth phantom PGM here");
  add_common(phantom);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (shrink->parsed()) {
    Vec x = read_vector_csv(in_path);
    write_vector_csv(out, apply_shrinkage(make_spec(spec_flags), x));
    return 0;
  }

  if (peval->parsed()) {
    auto spec = make_spec(spec_flags);
    Mat table(steps, 3);
    for (int i = 0; i < steps; ++i) {
      double w = steps == 1 ? wmin : wmin + (wmax - wmin) * i / (steps - 1);
      table(i, 0) = w;
      table(i, 1) = g_eval(spec, w);
      table(i, 2) = w == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                             : g_deriv(spec, w);
    }
    write_matrix_csv(out, table);
    return 0;
  }

  if (ips->parsed() || admm->parsed()) {
    auto spec = make_spec(spec_flags);
    auto prob = load_problem(problem_path, 0.0);
    SolverConfig cfg;
    cfg.max_iters = max_iters;
    cfg.step_tol = tol;
    cfg.rescale = rescale;
    cfg.admm_rho = rho;
    SolverResult res;
    if (ips->parsed()) {
      res = ips_solve(prob, spec, cfg);
    } else {
      res = admm_equality_solve(orthonormalize_rows(prob), spec, cfg);
    }
    write_vector_csv(out, res.x_final);
    json side = solver_sidecar(res);
    side["penalty"] = spec_to_json(spec);
    side["problem"] = problem_path;
    write_json(out + ".json", side);
    return 0;
  }

  if (certify->parsed()) {
    PenaltySpec spec;
    if (!penalty_path.empty()) {
      std::ifstream pin(penalty_path);
      if (!pin) throw std::runtime_error("cannot open penalty spec: " + penalty_path);
      spec = spec_from_json(json::parse(pin));
    } else {
      spec = make_spec(spec_flags);
    }
    auto prob = load_problem(problem_path, epsilon);
    json j = {{"penalty", spec_to_json(spec)}, {"k", k}, {"m", prob.m()}};
    if (epsilon == 0.0) {
      auto [alpha, beta] = alpha_beta(prob, budget);
      auto cert = exact_recovery_check(spec, alpha, beta, prob.m(), k);
      j["alpha"] = alpha;
      j["beta"] = beta;
      j["lhs"] = cert.lhs;
      j["rhs"] = cert.rhs;
      j["passes"] = cert.passes;
      if (2 * k <= prob.m()) {
        j["firm_mu_bound"] = firm_mu_bound(alpha, beta, prob.m(), k);
        try {
          auto [pp, pl] = find_p_lambda(alpha, beta, prob.m(), k);
          j["found_p"] = pp;
          j["found_lambda"] = pl;
        } catch (const std::runtime_error&) {
          j["found_p"] = nullptr;
          j["found_lambda"] = nullptr;
        }
      }
    } else {
      auto cert = noisy_alpha_beta(prob, budget);
      j["epsilon"] = epsilon;
      j["alpha"] = cert.alpha;
      j["beta"] = cert.beta;
      j["eps_max"] = cert.eps_max;
      j["alpha_S_min"] = cert.alpha_S_min;
      j["beta_S_max"] = cert.beta_S_max;
      auto cc = exact_recovery_check(spec, cert.alpha, cert.beta, prob.m(), k);
      j["lhs"] = cc.lhs;
      j["rhs"] = cc.rhs;
      j["passes"] = cc.passes;
    }
    if (out.empty()) {
      std::cout << j.dump(2) << "\n";
    } else {
      write_json(out, j);
    }
    return 0;
  }

  if (phase->parsed()) {
    pd.seed = seed;
    pd.spec = make_spec(spec_flags);
    auto cells = phase_diagram(pd);
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot open for writing: " + out);
    os << "m,k,success_rate\n" << std::setprecision(17);
    for (const auto& c : cells) os << c.m << "," << c.k << "," << c.success_rate << "\n";
    json side = {{"n", pd.n},      {"trials", pd.trials},
                 {"seed", seed},   {"success_tol", pd.success_tol},
                 {"max_iters", pd.max_iters}, {"penalty", spec_to_json(pd.spec)}};
    write_json(out + ".json", side);
    return 0;
  }

  if (phantom->parsed()) {
    auto result = phantom_sweep(ps);
    if (!preview_path.empty()) write_pgm(preview_path, shepp_logan(ps.size));
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot open for writing: " + out);
    os << "family,lambda,p,mu,lines,rel_error,iterations\n" << std::setprecision(17);
    for (const auto& r : result.runs) {
      const auto& s = ps.specs[r.spec_index];
      os << family_name(s.family) << "," << s.lambda << "," << s.p << "," << s.mu
         << "," << r.lines << "," << r.rel_error << "," << r.iterations << "\n";
    }
    json side = {{"size", ps.size}, {"success_tol", ps.success_tol},
                 {"max_iters", ps.max_iters}, {"seed", seed}, {"min_lines", json::array()}};
    for (std::size_t i = 0; i < ps.specs.size(); ++i) {
      side["min_lines"].push_back(
          {{"penalty", spec_to_json(ps.specs[i])}, {"lines", result.min_lines[i]}});
    }
    write_json(out + ".json", side);
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(expand_config(argc, argv));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
