#include "bdcone/toolio/report.hpp"

#include <cmath>
#include <cstdio>
#include <span>

#include "bdcone/toolio/parser.hpp"

namespace bdcone {

using Json = nlohmann::ordered_json;

Json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string hex_fingerprint(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::vector<std::string> names_of(const ProblemData& data) {
  if (data.names.size() == data.nvars()) return data.names;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < data.nvars(); ++i) out.push_back("x" + std::to_string(i + 1));
  return out;
}

Json numbers(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(json_number(x));
  return a;
}

Json residuals_json(const Residuals& r) {
  return Json{{"primal", json_number(r.primal)}, {"dual", json_number(r.dual)}, {"gap", json_number(r.gap)}};
}

}  // namespace

Json problem_json(const ProblemData& data) {
  const auto names = names_of(data);
  Json j;
  j["nvars"] = data.nvars();
  j["variables"] = names;
  j["objective"] = format_polynomial(data.f, names);
  Json g = Json::array();
  for (const auto& gi : data.g) g.push_back(format_polynomial(gi, names));
  j["constraints"] = g;
  if (data.cone) {
    j["cone"] = {{"set", data.cone->set == ConeSet::PSD ? "psd" : "orthant"},
                 {"entries", data.cone->entries.size()}};
  }
  return j;
}

Json config_json(const HierarchyConfig& cfg) {
  return Json{{"k", cfg.k}, {"r", cfg.r}, {"split", {cfg.n1, cfg.n2}}};
}

Json level_json(const RelaxationBundle& bundle, const ProblemData& data, const RelaxationResult& result,
                bool timing) {
  const auto& rep = result.report;
  Json j;
  j["kind"] = to_string(bundle.meta.kind);
  j["k"] = bundle.meta.config.k;
  j["degree"] = bundle.meta.degree;
  j["M"] = json_number(bundle.meta.M);
  j["fingerprint"] = hex_fingerprint(bundle.meta.fingerprint);
  j["size"] = {{"rows", bundle.conic.num_rows()}, {"cols", bundle.conic.num_vars()}};
  j["status"] = to_string(result.status);
  j["value"] = json_number(result.value);
  j["primal_value"] = json_number(rep.primal_value);
  j["dual_value"] = json_number(rep.dual_value);
  j["residuals"] = residuals_json(rep.residuals);
  j["certificate_residual"] = json_number(rep.certificate_residual);
  j["iterations"] = rep.iterations;
  if (timing) j["seconds"] = rep.seconds;

  Json decoded = Json::object();
  if (result.status == SolveStatus::Optimal && rep.z.size() == static_cast<Eigen::Index>(bundle.conic.num_vars())) {
    if (is_dual(bundle.meta.kind)) {
      const MomentVector y = decode_moments(bundle, rep.z);
      Json moments = Json::array();
      for (std::size_t i = 0; i < y.basis.size(); ++i) {
        moments.push_back({y.basis.exponent_at(i).to_string(), json_number(y.y[static_cast<Eigen::Index>(i)])});
      }
      decoded["moments"] = moments;
      decoded["moment_violation"] = json_number(moment_violation(bundle, y));
    } else {
      const Certificate cert = decode_certificate(bundle, data, rep.z);
      decoded["mu"] = json_number(cert.mu);
      decoded["c"] = numbers(cert.c);
      decoded["lambda"] = numbers(std::span<const double>(cert.lambda.data(), static_cast<std::size_t>(cert.lambda.size())));
      decoded["psd_gram_side"] = cert.psd_gram.rows();
      decoded["sdsos_squares"] = cert.sdsos.squares.size();
      decoded["identity_error"] = json_number(cert.identity_error);
    }
  }
  j["decoded"] = decoded;
  return j;
}

Json class_report_json(const ClassReport& report, const std::vector<std::string>& vars) {
  Json j;
  j["answer"] = to_string(report.answer);
  j["class"] = to_string(report.kind);
  j["status"] = to_string(report.status);
  j["residuals"] = residuals_json(report.residuals);
  j["certificate_residual"] = json_number(report.certificate_residual);
  j["reconstruction_error"] = json_number(report.reconstruction_error);
  j["iterations"] = report.iterations;
  j["detail"] = report.detail;
  if (report.witness && report.witness->nvars() == vars.size()) {
    Json squares = Json::array();
    for (const auto& sq : report.witness->squares) {
      squares.push_back({format_polynomial(Polynomial::monomial(report.witness->basis[sq.i], 1.0), vars),
                         format_polynomial(Polynomial::monomial(report.witness->basis[sq.j], 1.0), vars),
                         json_number(sq.beta), json_number(sq.gamma)});
    }
    j["witness"] = {{"alpha", numbers(report.witness->alpha)}, {"binomial_squares", squares}};
  }
  return j;
}

Json recovery_json(const RecoveryReport& report) {
  Json j;
  j["verdict"] = to_string(report.verdict);
  j["x_star"] = numbers(report.x_star);
  j["value"] = json_number(report.value);
  j["f_at_x"] = json_number(report.f_at_x);
  j["objective_gap"] = json_number(report.objective_gap);
  j["feasibility_residual"] = json_number(report.feasibility_residual);
  j["hypotheses"] = report.hypotheses;
  j["notes"] = report.notes;
  return j;
}

Json make_report(const std::string& command, Json body) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = command;
  for (auto& [key, value] : body.items()) j[key] = std::move(value);
  return j;
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace bdcone
