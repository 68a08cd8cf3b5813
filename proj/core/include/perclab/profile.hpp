#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "perclab/graph.hpp"
#include "perclab/report.hpp"
#include "perclab/spectral.hpp"

namespace perclab {

enum class ProfileMode { exhaustive, ball_family, analytic };
enum class ProfileKind { spectral, isoperimetric };

const char* to_string(ProfileMode mode);
ProfileMode profile_mode_from_string(const std::string& name);

struct ProfilePoint {
  double threshold = 0.0;
  double value = 0.0;
};

// One enumerated set: its stationary mass and its lambda (or boundary ratio).
struct SetValue {
  double mass = 0.0;
  double value = 0.0;
};

// Lambda(L) = inf{lambda(B) : pi(B) <= L} for L >= min pi, and 1 below (same shape for the
// isoperimetric profile Phi*). Exhaustive profiles are exact; ball-family profiles are upper
// bounds; analytic profiles are whatever the supplied model certifies.
class SpectralProfile {
 public:
  static SpectralProfile from_sets(ProfileKind kind, ProfileMode mode, std::vector<SetValue> sets,
                                   double min_pi, std::string graph_ref, bool certified_lower_bound);
  static SpectralProfile from_function(std::function<double(double)> profile, std::string graph_ref,
                                       std::string description, bool certified_lower_bound);

  double at(double threshold) const;
  std::vector<ProfilePoint> evaluate(std::span<const double> thresholds) const;

  ProfileKind kind() const noexcept { return kind_; }
  ProfileMode mode() const noexcept { return mode_; }
  bool certified_lower_bound() const noexcept { return certified_; }
  const std::string& graph_ref() const noexcept { return graph_ref_; }
  const std::string& description() const noexcept { return description_; }
  // Running-minimum breakpoints (mass, value) of a set-based profile.
  std::span<const ProfilePoint> steps() const noexcept { return steps_; }
  std::size_t set_count() const noexcept { return set_count_; }

 private:
  SpectralProfile() = default;

  ProfileKind kind_ = ProfileKind::spectral;
  ProfileMode mode_ = ProfileMode::exhaustive;
  bool certified_ = false;
  double min_pi_ = 0.0;
  std::vector<ProfilePoint> steps_;
  std::size_t set_count_ = 0;
  std::function<double(double)> function_;
  std::string graph_ref_;
  std::string description_;
};

// Lower-bound model Lambda_lb(x) = min(1, c log^{-alpha}(x / max pi)) for x >= 2 max pi, else 1.
struct ProfileModel {
  double alpha = 0.0;
  double c = 1.0;
  double max_pi = 1.0;

  double operator()(double x) const;
};

inline constexpr std::size_t kExhaustiveVertexCap = 14;

struct ProfileOptions {
  // Exhaustive mode: enumerate subsets of this window instead of all of V (at most 14
  // vertices). The profile is certified only when the window is all of V.
  std::vector<Vertex> window;
  // Ball-family mode: also enumerate connected sets up to this size.
  std::size_t max_connected_size = 4;
  LambdaOptions lambda;
};

SpectralProfile spectral_profile(const Graph& g, ProfileMode mode, const ProfileOptions& options = {});
SpectralProfile analytic_profile(const Graph& g, const ProfileModel& model);
// Exact profile of cycle[N]: sin^2(pi / (floor(L/2) + 1)) for 2 <= L < 2N, 0 for L >= 2N.
SpectralProfile exact_cycle_profile(const Graph& g);
// Exhaustive isoperimetric profile Phi*(x) = min{|dB|/pi(B) : pi(B) <= x}.
SpectralProfile iso_profile(const Graph& g, const ProfileOptions& options = {});

// Integer thresholds min pi .. pi(V): every value at which a step profile can change.
std::vector<double> all_thresholds(const Graph& g);

struct CheegerRow {
  double threshold = 0.0;
  double lambda = 0.0;
  double phi = 0.0;
  bool lower_holds = false;          // Phi*^2 / 4 <= Lambda
  bool upper_holds = false;          // Lambda <= Phi*
  bool upper_factor_two_holds = false;  // Lambda <= 2 Phi*
};

struct CheegerReport {
  std::vector<CheegerRow> rows;
  std::size_t lower_violations = 0;
  std::size_t upper_violations = 0;
  std::size_t upper_factor_two_violations = 0;
  CheckReport summary;
};

// Profile-level sandwich Phi*^2/4 <= Lambda <= Phi* at each threshold x >= min pi. Needs
// exhaustive profiles of the same graph.
CheegerReport cheeger_check(const SpectralProfile& spectral, const SpectralProfile& iso,
                            std::span<const double> thresholds, double slack = 1e-9);

struct SetCheegerRow {
  std::vector<Vertex> members;
  double boundary_ratio = 0.0;
  double lambda = 0.0;
};
// Per-set (boundary ratio, lambda) pairs; informational only, the sandwich is not per-set.
std::vector<SetCheegerRow> set_cheeger_data(const Graph& g, std::span<const Domain> subsets);

// CSV with header "L,lambda,mode".
void write_profile_csv(std::ostream& out, const SpectralProfile& profile,
                       std::span<const double> thresholds);

}  // namespace perclab
