#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bdcone/certcones/classify.hpp"
#include "bdcone/hierarchy/problems.hpp"
#include "bdcone/hierarchy/relaxation.hpp"
#include "bdcone/recovery/recovery.hpp"
#include "bdcone/toolio/formats.hpp"
#include "bdcone/toolio/parser.hpp"
#include "bdcone/toolio/report.hpp"

using namespace bdcone;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInconclusive = 2;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string problem;
  std::string example;
  std::optional<int> k;
  std::optional<int> r;
  std::string split;
  std::optional<double> M;
  double tol = 1e-8;
  std::size_t max_iter = 200000;
  double time_limit = 0.0;
  unsigned seed = 1;
  std::string format = "text";
  std::string report;
  bool no_timing = false;
  std::string relaxation = "hierarchy";
};

struct Loaded {
  ProblemData data;
  HierarchyConfig cfg;
  ScalingInfo scaling;
};

void add_problem_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("problem", f.problem, "Problem file in the bdcone problem language");
  cmd->add_option("--example", f.example, "Built-in problem: ep1:N (N >= 4), ep2, socp-convex");
  cmd->add_option("--k", f.k, "Krivine product degree");
  cmd->add_option("--r", f.r, "Certificate degree (even)");
  cmd->add_option("--split", f.split, "Variable split n1,n2 (SOS block, SDSOS block)");
  cmd->add_option("--M", f.M, "Scaling constant for g_i / M");
  cmd->add_option("--tol", f.tol, "Solver tolerance")->capture_default_str();
  cmd->add_option("--max-iter", f.max_iter, "Solver iteration limit")->capture_default_str();
  cmd->add_option("--time-limit", f.time_limit, "Solver wall-clock limit per solve in seconds");
  cmd->add_option("--seed", f.seed, "Seed of the scaling check sampler")->capture_default_str();
  cmd->add_option("--report", f.report, "Write the JSON report to this path");
  cmd->add_flag("--no-timing", f.no_timing, "Leave timings out of reports and tables");
}

ProblemData builtin(const std::string& name) {
  if (name == "ep2") return make_ep2();
  if (name == "socp-convex") return make_socp_convex_example();
  if (name.rfind("ep1:", 0) == 0) {
    std::size_t n = 0;
    try {
      n = std::stoul(name.substr(4));
    } catch (const std::exception&) {
      throw UsageError("bad example '" + name + "'");
    }
    if (n < 4) throw UsageError("ep1:N needs N >= 4");
    return make_ep1(n);
  }
  throw UsageError("unknown example '" + name + "'");
}

std::pair<std::size_t, std::size_t> parse_split(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("");
    return {std::stoul(text.substr(0, comma)), std::stoul(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw UsageError("--split expects n1,n2, got '" + text + "'");
  }
}

Loaded load(const CommonFlags& f) {
  if (f.problem.empty() == f.example.empty()) throw UsageError("give exactly one of a problem file or --example");
  Loaded out;
  if (!f.example.empty()) {
    out.data = builtin(f.example);
    const int deg = out.data.f.degree();
    out.cfg = {1, std::max(2, deg + deg % 2), 0, out.data.nvars()};
  } else {
    ProblemSource src;
    try {
      src = parse_problem(load_text(f.problem));
    } catch (const ParseError& e) {
      throw UsageError(f.problem + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw UsageError(e.what());
    }
    out.data = to_problem_data(src);
    out.cfg = config_from_options(src);
  }
  if (f.k) out.cfg.k = *f.k;
  if (f.r) out.cfg.r = *f.r;
  if (!f.split.empty()) std::tie(out.cfg.n1, out.cfg.n2) = parse_split(f.split);
  if (f.M) out.data.M = *f.M;
  try {
    out.data.validate();
    out.cfg.validate(out.data.nvars());
    out.scaling = resolve_scaling(out.data);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  out.data.M = out.scaling.M;
  if (out.data.box && !out.data.g.empty()) {
    for (auto& w : check_scaling(out.data, out.scaling.M, 2000, f.seed)) out.scaling.warnings.push_back(std::move(w));
  }
  if (f.relaxation != "hierarchy" && f.relaxation != "exact") {
    throw UsageError("--relaxation must be hierarchy or exact");
  }
  return out;
}

SolveSettings settings_of(const CommonFlags& f) {
  SolveSettings s;
  s.tol = f.tol;
  s.max_iter = f.max_iter;
  s.time_limit = f.time_limit;
  return s;
}

RelaxationBundle build(const Loaded& in, const CommonFlags& f, bool dual) {
  if (f.relaxation == "exact") {
    return dual ? build_exact_socp_dual(in.data, in.cfg.r) : build_exact_socp(in.data, in.cfg.r);
  }
  return dual ? build_dual(in.data, in.cfg) : build_primal(in.data, in.cfg);
}

bool conclusive(SolveStatus s) { return s != SolveStatus::Inconclusive && s != SolveStatus::MaxIterations; }

std::string value_text(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Json header_json(const Loaded& in, const CommonFlags& f) {
  Json j;
  j["problem"] = problem_json(in.data);
  Json cfg = config_json(in.cfg);
  cfg["relaxation"] = f.relaxation;
  cfg["tol"] = f.tol;
  cfg["max_iter"] = f.max_iter;
  cfg["seed"] = f.seed;
  j["config"] = cfg;
  j["scaling"] = {{"M", json_number(in.scaling.M)},
                  {"source", in.scaling.source},
                  {"assumption_a", in.scaling.assumption_a ? "satisfied (box constraints)" : "not verified"},
                  {"warnings", in.scaling.warnings}};
  return j;
}

void emit(const CommonFlags& f, const std::string& command, Json body) {
  const Json report = make_report(command, std::move(body));
  const std::string text = dump_report(report);
  if (!f.report.empty()) save_text(f.report, text);
  if (f.format == "json") std::cout << text;
}

int run_solve(const CommonFlags& f, const std::string& side) {
  const Loaded in = load(f);
  const SolveSettings s = settings_of(f);
  Json body = header_json(in, f);
  Json levels = Json::array();
  bool ok = true;
  const bool text = f.format == "text";
  if (text) {
    std::printf("M = %s (%s), k = %d, r = %d, split = (%zu, %zu)\n", value_text(in.scaling.M, 6).c_str(),
                in.scaling.source.c_str(), in.cfg.k, in.cfg.r, in.cfg.n1, in.cfg.n2);
    for (const auto& w : in.scaling.warnings) std::printf("warning: %s\n", w.c_str());
  }
  for (bool dual : {false, true}) {
    if ((side == "primal" && dual) || (side == "dual" && !dual)) continue;
    const RelaxationBundle bundle = build(in, f, dual);
    const RelaxationResult res = solve_relaxation(bundle, s);
    ok = ok && conclusive(res.status);
    levels.push_back(level_json(bundle, in.data, res, !f.no_timing));
    if (text) {
      std::printf("%-16s value = %-22s status = %-18s iterations = %zu", to_string(bundle.meta.kind).c_str(),
                  value_text(res.value, 10).c_str(), to_string(res.status).c_str(), res.report.iterations);
      if (!f.no_timing) std::printf("  seconds = %.3f", res.report.seconds);
      std::printf("\n");
    }
  }
  body["levels"] = levels;
  emit(f, "solve", std::move(body));
  return ok ? kExitOk : kExitInconclusive;
}

int run_check(const std::string& test, const std::string& expr, const CommonFlags& f) {
  const std::vector<std::string> vars = expression_variables(expr);
  Polynomial p;
  try {
    p = parse_polynomial(expr, vars);
  } catch (const ParseError& e) {
    throw UsageError(std::string("expression: ") + e.what());
  }
  const SolveSettings s = settings_of(f);
  ClassReport rep;
  if (test == "is-sdsos") {
    rep = is_sdsos(p, s);
  } else if (test == "is-sos") {
    rep = is_sos(p, s);
  } else if (test == "is-socp-convex") {
    rep = is_socp_convex(p, s);
  } else if (test == "is-enc") {
    rep = enc_detect(p);
  } else {
    throw UsageError("unknown check '" + test + "'");
  }
  const char* verdict = rep.answer == Answer::Yes ? "positive" : rep.answer == Answer::No ? "negative" : "inconclusive";
  if (f.format == "text") {
    std::printf("%s %s: %s\n", test.c_str(), format_polynomial(p, vars).c_str(), verdict);
    if (!rep.detail.empty()) std::printf("detail: %s\n", rep.detail.c_str());
  }
  Json body;
  body["test"] = test;
  body["expression"] = format_polynomial(p, vars);
  body["variables"] = vars;
  body["result"] = class_report_json(rep, vars);
  emit(f, "check", std::move(body));
  return rep.answer == Answer::Inconclusive ? kExitInconclusive : kExitOk;
}

int run_recover(const CommonFlags& f) {
  const Loaded in = load(f);
  const RelaxationBundle bundle = build(in, f, true);
  RecoveryOptions opt;
  opt.settings = settings_of(f);
  const RelaxationResult res = solve_relaxation(bundle, opt.settings);
  Json body = header_json(in, f);
  body["levels"] = Json::array({level_json(bundle, in.data, res, !f.no_timing)});
  int code = conclusive(res.status) ? kExitOk : kExitInconclusive;
  if (res.status == SolveStatus::Optimal) {
    const RecoveryReport rec = recover_and_verify(in.data, bundle, res, opt);
    body["recovery"] = recovery_json(rec);
    if (f.format == "text") {
      std::printf("%s value = %s status = %s\n", to_string(bundle.meta.kind).c_str(), value_text(res.value, 10).c_str(),
                  to_string(res.status).c_str());
      std::printf("x* = (");
      for (std::size_t i = 0; i < rec.x_star.size(); ++i) std::printf("%s%.8f", i ? ", " : "", rec.x_star[i]);
      std::printf(")\nf(x*) = %.10f  gap = %.3g  feasibility residual = %.3g\nverdict: %s\n", rec.f_at_x,
                  rec.objective_gap, rec.feasibility_residual, to_string(rec.verdict).c_str());
      for (const auto& n : rec.notes) std::printf("note: %s\n", n.c_str());
    }
  } else if (f.format == "text") {
    std::printf("%s status = %s, nothing to recover\n", to_string(bundle.meta.kind).c_str(),
                to_string(res.status).c_str());
  }
  emit(f, "recover", std::move(body));
  return code;
}

int run_export(const CommonFlags& f, const std::string& side, const std::string& output, bool rewrite) {
  const Loaded in = load(f);
  if (f.format != "cbf" && f.format != "sdpa") throw UsageError("export --format must be cbf or sdpa");
  const RelaxationBundle bundle = build(in, f, side == "dual");
  std::string text;
  try {
    text = f.format == "cbf" ? to_cbf(bundle.conic) : to_sdpa(bundle.conic, {rewrite});
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    save_text(output, text);
  }
  return kExitOk;
}

int run_sweep(const CommonFlags& f, int K, std::optional<double> optimum, std::optional<double> grid, double match_tol,
              int jobs) {
  if (K < 1) throw UsageError("--K must be at least 1");
  if (jobs < 1) throw UsageError("--jobs must be at least 1");
  const Loaded in = load(f);
  Json body = header_json(in, f);
  std::optional<double> reference = optimum;
  if (!reference && grid) {
    if (!in.data.box) throw UsageError("--grid needs box bounds on every variable");
    const GridResult g = grid_minimum(in.data, *grid);
    if (g.found) reference = g.value;
    body["grid"] = {{"step", *grid}, {"found", g.found}, {"value", json_number(g.value)}, {"points", g.points}};
  }
  if (reference) body["reference_value"] = json_number(*reference);

  SolveSettings s = settings_of(f);
  s.parallel = jobs == 1;
  std::vector<RelaxationBundle> bundles;
  std::vector<RelaxationResult> results(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    HierarchyConfig cfg = in.cfg;
    cfg.k = k;
    bundles.push_back(build_primal(in.data, cfg));
  }
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (int k = 0; k < K; ++k) results[static_cast<std::size_t>(k)] = solve_relaxation(bundles[static_cast<std::size_t>(k)], s);

  Json levels = Json::array();
  bool ok = true;
  const bool text = f.format == "text";
  if (text) {
    std::printf("r = %d, split = (%zu, %zu), M = %s", in.cfg.r, in.cfg.n1, in.cfg.n2, value_text(in.scaling.M, 6).c_str());
    if (reference) std::printf(", reference = %s", value_text(*reference, 6).c_str());
    std::printf("\n%-3s %-18s %-26s %-20s %10s", "k", "status", "output value", "optimal value", "iterations");
    if (!f.no_timing) std::printf(" %10s", "seconds");
    std::printf("\n");
  }
  for (int k = 0; k < K; ++k) {
    const auto& res = results[static_cast<std::size_t>(k)];
    ok = ok && conclusive(res.status);
    std::string optimal = "?";
    if (reference && conclusive(res.status)) {
      optimal = std::isfinite(res.value) && std::abs(res.value - *reference) <= match_tol ? "Yes" : "No";
    }
    Json level = level_json(bundles[static_cast<std::size_t>(k)], in.data, res, !f.no_timing);
    level["optimal"] = optimal;
    levels.push_back(std::move(level));
    if (text) {
      std::printf("%-3d %-18s %-26s %-20s %10zu", k + 1, to_string(res.status).c_str(),
                  ("output value=" + value_text(res.value, 4)).c_str(), ("optimal value: " + optimal).c_str(),
                  res.report.iterations);
      if (!f.no_timing) std::printf(" %10.3f", res.report.seconds);
      std::printf("\n");
    }
  }
  body["levels"] = levels;
  emit(f, "sweep", std::move(body));
  return ok ? kExitOk : kExitInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded-degree SDP/SDSOS hierarchy for polynomial optimization"};
  app.require_subcommand(1);
  CommonFlags f;
  auto text_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", f.format, "Standard output: text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
  };

  std::string side = "both";
  auto* solve = app.add_subcommand("solve", "Build and solve the relaxations at one level");
  add_problem_flags(solve, f);
  text_format(solve);
  solve->add_option("--side", side, "primal, dual or both")->check(CLI::IsMember({"primal", "dual", "both"}));
  solve->add_option("--relaxation", f.relaxation, "hierarchy or exact (one-step SDSOS relaxation of degree r)");

  std::string test, expr;
  auto* check = app.add_subcommand("check", "Classify a polynomial");
  check->add_option("test", test, "is-sdsos, is-sos, is-socp-convex or is-enc")
      ->required()
      ->check(CLI::IsMember({"is-sdsos", "is-sos", "is-socp-convex", "is-enc"}));
  check->add_option("expression", expr, "Polynomial expression")->required();
  check->add_option("--tol", f.tol, "Solver tolerance")->capture_default_str();
  check->add_option("--max-iter", f.max_iter, "Solver iteration limit")->capture_default_str();
  check->add_option("--report", f.report, "Write the JSON report to this path");
  text_format(check);

  auto* recover = app.add_subcommand("recover", "Solve the moment side, extract a point and grade it");
  add_problem_flags(recover, f);
  text_format(recover);
  std::string recover_relaxation = "exact";
  recover->add_option("--relaxation", recover_relaxation, "exact (default) or hierarchy");

  std::string export_side = "primal", output;
  bool rewrite = false;
  auto* exp = app.add_subcommand("export", "Write a relaxation as a CBF or SDPA file");
  add_problem_flags(exp, f);
  exp->add_option("--format", f.format, "cbf or sdpa")->required()->check(CLI::IsMember({"cbf", "sdpa"}));
  exp->add_option("--side", export_side, "primal or dual")->check(CLI::IsMember({"primal", "dual"}));
  exp->add_option("--relaxation", f.relaxation, "hierarchy or exact");
  exp->add_option("-o,--output", output, "Output path; standard output when absent");
  exp->add_flag("--rewrite", rewrite, "SDPA: rewrite second-order and free blocks");

  int K = 2, jobs = 1;
  double match_tol = 1e-3;
  std::optional<double> optimum, grid;
  auto* sweep = app.add_subcommand("sweep", "Solve the primal side for k = 1..K");
  add_problem_flags(sweep, f);
  text_format(sweep);
  sweep->add_option("--K", K, "Highest level")->capture_default_str();
  sweep->add_option("--optimum", optimum, "Known optimal value for the optimal-value column");
  sweep->add_option("--grid", grid, "Grid oracle step for the optimal-value column");
  sweep->add_option("--match-tol", match_tol, "Tolerance of the optimal-value column")->capture_default_str();
  sweep->add_option("--jobs", jobs, "Levels solved concurrently")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return run_solve(f, side);
    if (check->parsed()) return run_check(test, expr, f);
    if (recover->parsed()) {
      f.relaxation = recover_relaxation;
      return run_recover(f);
    }
    if (exp->parsed()) return run_export(f, export_side, output, rewrite);
    if (sweep->parsed()) return run_sweep(f, K, optimum, grid, match_tol, jobs);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
