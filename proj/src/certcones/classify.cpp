#include "bdcone/certcones/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bdcone/certcones/systems.hpp"

namespace bdcone {

std::string to_string(ClassKind kind) {
  switch (kind) {
    case ClassKind::SDSOS: return "sdsos";
    case ClassKind::SOS: return "sos";
    case ClassKind::SOCPConvex: return "socp_convex";
    case ClassKind::EssentiallyNonpositive: return "essentially_nonpositive";
    case ClassKind::None: return "none";
  }
  return "?";
}

std::string to_string(Answer answer) {
  switch (answer) {
    case Answer::Yes: return "yes";
    case Answer::No: return "no";
    case Answer::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

constexpr double kWitnessTol = 1e-6;

double max_coeff_error(const Polynomial& a, const Polynomial& b) {
  double err = 0.0;
  const Polynomial diff = a - b;
  for (const auto& [e, c] : diff.terms()) err = std::max(err, std::abs(c));
  return err;
}

std::string term_string(const Exponent& e, double c) {
  return Polynomial::monomial(e, c).to_string();
}

// Shared driver: build the Gram system, solve it, classify the outcome.
ClassReport membership(const Polynomial& f, bool sdsos, const SolveSettings& st) {
  const ClassKind target = sdsos ? ClassKind::SDSOS : ClassKind::SOS;
  ClassReport rep;
  if (f.is_zero()) {
    rep.kind = target;
    rep.answer = Answer::Yes;
    if (sdsos) rep.witness = SdsosWitness{};
    return rep;
  }
  const int d = f.degree();
  if (d % 2 != 0) {
    rep.answer = Answer::No;
    rep.detail = "odd degree";
    return rep;
  }
  const GramSystem sys = sdsos ? sdsos_system(f, d) : sos_system(f, d);
  if (sys.gram.num_columns() == 0) {
    // Nothing survived pruning; f is nonzero, so no certificate exists.
    rep.answer = Answer::No;
    rep.detail = "empty Gram basis after support reduction";
    return rep;
  }
  const SolveReport sol = solve(sys.conic, st);
  rep.status = sol.status;
  rep.residuals = sol.residuals;
  rep.certificate_residual = sol.certificate_residual;
  rep.iterations = sol.iterations;
  if (sol.status == SolveStatus::PrimalInfeasible) {
    rep.answer = Answer::No;
    rep.detail = "infeasibility certificate";
    return rep;
  }
  if (sol.status != SolveStatus::Optimal) {
    rep.detail = "solver status " + to_string(sol.status);
    return rep;
  }
  const std::span<const double> z(sol.z.data(), static_cast<std::size_t>(sol.z.size()));
  Polynomial rebuilt(f.nvars());
  if (sdsos) {
    rep.witness = sdsos_witness(sys.gram, z);
    rebuilt = rep.witness->expand(f.nvars());
  } else {
    rep.gram = psd_gram(sys.gram, z);
    rep.gram_basis = sys.gram.psd_basis;
    rebuilt = gram_polynomial(sys.gram, z, f.nvars());
  }
  rep.reconstruction_error = max_coeff_error(rebuilt, f);
  if (rep.reconstruction_error > kWitnessTol) {
    rep.detail = "certificate does not reproduce f";
    return rep;
  }
  rep.kind = target;
  rep.answer = Answer::Yes;
  return rep;
}

}  // namespace

ClassReport is_sdsos(const Polynomial& f, const SolveSettings& st) {
  return membership(f, true, st);
}

ClassReport is_sos(const Polynomial& f, const SolveSettings& st) {
  return membership(f, false, st);
}

Polynomial jensen_gap(const Polynomial& f) {
  const std::size_t n = f.nvars();
  Polynomial h = lift(f, 2 * n, 0) - lift(f, 2 * n, n);
  const auto grad = gradient(f);
  for (std::size_t i = 0; i < n; ++i) {
    const Polynomial diff = Polynomial::variable(2 * n, i) - Polynomial::variable(2 * n, n + i);
    h -= lift(grad[i], 2 * n, n) * diff;
  }
  return h;
}

ClassReport is_socp_convex(const Polynomial& f, const SolveSettings& st) {
  ClassReport rep = is_sdsos(jensen_gap(f), st);
  if (rep.answer == Answer::Yes) {
    rep.kind = ClassKind::SOCPConvex;
  } else if (rep.answer == Answer::No) {
    rep.detail = "h_f is not SDSOS: " + rep.detail;
  }
  return rep;
}

namespace {

bool in_omega(const Exponent& e, int d) {
  const int mp = e.max_power();
  return mp > 0 && mp < d;
}

}  // namespace

ClassReport enc_detect(const Polynomial& f) {
  ClassReport rep;
  const int d = f.degree();
  for (const auto& [e, c] : f.terms()) {
    if (in_omega(e, d) && c > 0.0) {
      rep.answer = Answer::No;
      rep.detail = "positive coefficient: " + term_string(e, c);
      return rep;
    }
  }
  rep.answer = Answer::Yes;
  rep.kind = ClassKind::EssentiallyNonpositive;
  return rep;
}

Polynomial fhat(const Polynomial& f) {
  const int d = f.degree();
  Polynomial out(f.nvars());
  for (const auto& [e, c] : f.terms()) {
    if (e.is_zero()) continue;
    if (!in_omega(e, d)) {
      out.add_term(e, c);
      continue;
    }
    const auto& p = e.powers();
    const bool all_even = std::all_of(p.begin(), p.end(), [](int v) { return v % 2 == 0; });
    if (c < 0.0 || !all_even) out.add_term(e, -std::abs(c));
  }
  return out;
}

ClassReport enc_sdsos_check(const Polynomial& f, const SolveSettings& st) {
  const ClassReport pre = enc_detect(f);
  if (pre.answer != Answer::Yes) {
    throw std::invalid_argument("enc_sdsos_check: " + pre.detail);
  }
  return is_sdsos(homogenize(f), st);
}

}  // namespace bdcone
