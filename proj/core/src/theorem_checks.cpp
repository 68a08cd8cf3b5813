#include "perclab/theorem_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "perclab/error.hpp"

namespace perclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_profile(const SpectralProfile& profile, CheckMode mode, const char* check) {
  if (profile.kind() != ProfileKind::spectral) {
    throw PreconditionError(std::string(check) + " needs a spectral profile");
  }
  if (mode == CheckMode::assert && !profile.certified_lower_bound()) {
    throw PreconditionError(std::string(check) + ": profile mode '" + to_string(profile.mode()) +
                            "' is not a certified lower bound; use diagnostic mode");
  }
}

void require_ell(int ell) {
  if (ell < 0) throw PreconditionError("l must be nonnegative");
}

std::string profile_tag(const SpectralProfile& profile) {
  return profile.graph_ref() + "|" + to_string(profile.mode()) + "|" + profile.description();
}

}  // namespace

DecayThreshold decay_threshold(const SpectralProfile& profile, int ell, double base) {
  require_ell(ell);
  if (!(base > 0.0)) throw PreconditionError("threshold base must be positive");
  DecayThreshold result;
  double sum = 0.0;
  for (int i = 1; i <= ell; ++i) {
    const double value = profile.at(std::pow(4.0, i + 1) * base);
    result.profile_values.push_back(value);
    if (value <= 0.0) {
      result.finite = false;
    } else {
      sum += 2.0 * std::log(4.0) / value;
    }
  }
  result.k_star = result.finite ? std::ceil(ell + 1 + sum) : kInf;
  return result;
}

int evolution_steps(const DecayThreshold& threshold) {
  if (threshold.k_star > kMaxEvolutionSteps) {
    throw PreconditionError("threshold k* = " + format_double(threshold.k_star) + " exceeds the evolution cap of " +
                            std::to_string(kMaxEvolutionSteps) + " steps");
  }
  return static_cast<int>(threshold.k_star);
}

CheckReport key_lemma_check(const Graph& g, const Domain& domain, const MassVector& phi,
                            const SpectralProfile& profile, double slack) {
  require_profile(profile, CheckMode::assert, "key_lemma_check");
  const double l2 = norm2_pi_sq(g, phi);
  const double l1 = norm1_pi(g, phi);
  CheckReport r;
  r.check = "key_lemma";
  r.lhs = rayleigh_quotient(g, domain, phi);
  const double argument = 4.0 * l1 * l1 / l2;
  r.rhs = 0.5 * profile.at(argument);
  r.slack = slack;
  r.pass = r.lhs >= r.rhs - slack;
  std::string inputs = profile_tag(profile);
  for (Vertex v : domain.members()) inputs += "," + std::to_string(v) + ":" + format_double(phi[v]);
  r.inputs_digest = digest(inputs);
  r.details = {{"profile_argument", argument}, {"domain_size", domain.size()}};
  return r;
}

CheckReport l2_decay_check(const Graph& g, const MassVector& mu, int ell, const SpectralProfile& profile,
                           CheckMode mode, double slack) {
  require_profile(profile, mode, "l2_decay_check");
  if (mu.size() != g.vertex_count()) throw PreconditionError("measure size does not match graph");
  if (!mu.is_nonnegative() || mu.is_zero()) throw PreconditionError("l2_decay_check needs a nonzero measure");
  if (mu.total() > 1.0 + 1e-12) throw PreconditionError("l2_decay_check needs mu(V) <= 1");

  const double norm_sq = norm2_inv_pi_sq(g, mu);
  const auto threshold = decay_threshold(profile, ell, 1.0 / norm_sq);
  CheckReport r;
  r.check = "l2_decay";
  r.slack = slack;
  r.diagnostic = !profile.certified_lower_bound();
  r.conditional = profile.mode() == ProfileMode::analytic;
  r.rhs = std::ldexp(std::sqrt(norm_sq), -ell);
  std::string inputs = profile_tag(profile) + "|l=" + std::to_string(ell);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (mu[v] != 0.0) inputs += "," + std::to_string(v) + ":" + format_double(mu[v]);
  }
  r.inputs_digest = digest(inputs);
  r.details = {{"k_star", threshold.k_star}, {"ell", ell}, {"profile_values", threshold.profile_values}};
  if (!threshold.finite) {
    r.vacuous = true;
    r.pass = true;
    r.lhs = std::sqrt(norm_sq);
    return r;
  }
  const auto evolved = evolve(g, mu, evolution_steps(threshold));
  r.lhs = std::sqrt(norm2_inv_pi_sq(g, evolved));
  r.pass = r.lhs <= r.rhs * (1.0 + slack);
  return r;
}

const char* to_string(EscapeVariant variant) {
  return variant == EscapeVariant::uniform ? "uniform" : "pi";
}

EscapeThreshold escape_threshold(const Graph& g, const Domain& domain, int ell, const SpectralProfile& profile,
                                 EscapeVariant variant) {
  if (domain.empty()) throw PreconditionError("escape threshold needs a nonempty domain");
  require_ell(ell);
  EscapeThreshold result;
  if (variant == EscapeVariant::uniform) {
    double max_pi = 0.0;
    for (Vertex v : domain.members()) max_pi = std::max(max_pi, g.pi(v));
    result.base = max_pi * static_cast<double>(domain.size());
    result.bound = std::sqrt(degree_ratio(g, domain)) * std::ldexp(1.0, -ell);
  } else {
    result.base = pi_mass(g, domain);
    result.bound = std::ldexp(1.0, -ell);
  }
  result.threshold = decay_threshold(profile, ell, result.base);
  return result;
}

CheckReport escape_check(const Graph& g, const Domain& domain, int ell, const SpectralProfile& profile,
                         EscapeVariant variant, CheckMode mode, Validity validity, double slack) {
  require_profile(profile, mode, "escape_check");
  const auto t = escape_threshold(g, domain, ell, profile, variant);
  CheckReport r;
  r.check = std::string("escape_") + to_string(variant);
  r.rhs = t.bound;
  r.slack = slack;
  r.diagnostic = !profile.certified_lower_bound();
  r.conditional = profile.mode() == ProfileMode::analytic;
  std::string inputs = profile_tag(profile) + "|l=" + std::to_string(ell) + "|" + to_string(variant);
  for (Vertex v : domain.members()) inputs += "," + std::to_string(v);
  r.inputs_digest = digest(inputs);
  r.details = {{"k_star", t.threshold.k_star}, {"ell", ell}, {"base", t.base},
               {"profile_values", t.threshold.profile_values}};
  if (!t.threshold.finite) {
    r.vacuous = true;
    r.pass = true;
    r.lhs = 1.0;
    return r;
  }
  const StartMeasure start =
      variant == EscapeVariant::uniform ? StartMeasure::uniform_on_domain : StartMeasure::pi_on_domain;
  r.lhs = escape_probability(g, domain, evolution_steps(t.threshold), start, validity);
  r.pass = r.lhs <= r.rhs * (1.0 + slack);
  return r;
}

double escape_bound_rhs(double domain_size, double k, double alpha, double c1, double degree_ratio) {
  if (domain_size < 1.0 || k < 0.0 || alpha < 0.0 || c1 <= 0.0 || degree_ratio < 1.0) {
    throw PreconditionError("escape_bound_rhs needs |D| >= 1, k >= 0, alpha >= 0, c1 > 0, ratio >= 1");
  }
  double exponent = 0.0;
  if (alpha == 0.0) {
    exponent = k;
  } else {
    const double second = std::pow(k, 1.0 / (1.0 + alpha));
    const double log_d = std::log(domain_size);
    const double first = log_d > 0.0 ? k / std::pow(log_d, alpha) : kInf;
    exponent = std::min(first, second);
  }
  return std::sqrt(degree_ratio) * std::exp(-c1 * exponent);
}

}  // namespace perclab
