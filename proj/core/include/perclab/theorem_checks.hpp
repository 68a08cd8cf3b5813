#pragma once

#include <vector>

#include "perclab/graph.hpp"
#include "perclab/mass_vector.hpp"
#include "perclab/profile.hpp"
#include "perclab/report.hpp"
#include "perclab/walk.hpp"

namespace perclab {

// assert: the profile must be a certified lower bound on Lambda.
// diagnostic: any profile is accepted and the report is flagged non-rigorous.
enum class CheckMode { assert, diagnostic };

struct DecayThreshold {
  // ceil(l + 1 + sum_{i=1}^{l} 2 log 4 / Lambda(4^{i+1} base)); +inf if a term has Lambda = 0.
  double k_star = 0.0;
  std::vector<double> profile_values;
  bool finite = true;
};

DecayThreshold decay_threshold(const SpectralProfile& profile, int ell, double base);

inline constexpr double kMaxEvolutionSteps = 1e8;
// k* as a step count; PreconditionError past kMaxEvolutionSteps.
int evolution_steps(const DecayThreshold& threshold);

// E_A(phi)/||phi||^2_{2,pi} >= Lambda(4 ||phi||^2_{1,pi} / ||phi||^2_{2,pi}) / 2.
CheckReport key_lemma_check(const Graph& g, const Domain& domain, const MassVector& phi,
                            const SpectralProfile& profile, double slack = 1e-9);

// ||mu P^k||_{2,1/pi} <= 2^-l ||mu||_{2,1/pi} at k = k*(l), base = ||mu||_{2,1/pi}^-2.
CheckReport l2_decay_check(const Graph& g, const MassVector& mu, int ell, const SpectralProfile& profile,
                           CheckMode mode = CheckMode::assert, double slack = 1e-12);

enum class EscapeVariant { uniform, pi };
const char* to_string(EscapeVariant variant);

struct EscapeThreshold {
  DecayThreshold threshold;
  double base = 0.0;   // max pi * |D| (uniform) or pi(D) (pi)
  double bound = 0.0;  // ratio^{1/2} 2^-l (uniform) or 2^-l (pi)
};

EscapeThreshold escape_threshold(const Graph& g, const Domain& domain, int ell, const SpectralProfile& profile,
                                 EscapeVariant variant);

// Pr(X_{k*} in D) <= bound under exact evolution. The profile is taken to describe `g`
// itself, so by default no interior-validity restriction applies.
CheckReport escape_check(const Graph& g, const Domain& domain, int ell, const SpectralProfile& profile,
                         EscapeVariant variant, CheckMode mode = CheckMode::assert,
                         Validity validity = Validity::ignore, double slack = 1e-12);

// ratio^{1/2} exp[-c1 min{k / log^alpha |D|, k^{1/(1+alpha)}}]; the first term is +inf
// when |D| = 1 and alpha > 0.
double escape_bound_rhs(double domain_size, double k, double alpha, double c1, double degree_ratio);

}  // namespace perclab
