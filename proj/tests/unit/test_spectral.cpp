#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "../oracles/dense_spectral.hpp"
#include "perclab/error.hpp"
#include "perclab/profile.hpp"
#include "perclab/rng.hpp"
#include "perclab/spectral.hpp"
#include "perclab/theorem_checks.hpp"

using namespace perclab;

namespace {

Domain path_in_cycle(const Graph& g, int k) {
  std::vector<Vertex> members;
  for (int i = 0; i < k; ++i) members.push_back(static_cast<Vertex>(i));
  return Domain(g.vertex_count(), members);
}

double sin_sq(double x) { return std::sin(x) * std::sin(x); }

}  // namespace

TEST(DirichletForm, Singleton) {
  const auto g = build_torus({4, 4});
  const auto d = Domain::single(16, 5);
  EXPECT_DOUBLE_EQ(dirichlet_form(g, d, MassVector::delta(16, 5)), 4.0);
  EXPECT_DOUBLE_EQ(dirichlet_form(g, d, MassVector(16)), 0.0);
  EXPECT_DOUBLE_EQ(rayleigh_quotient(build_cycle(8), Domain::single(8, 0), MassVector::delta(8, 0)), 1.0);
}

TEST(DirichletForm, ThreePathMatchesDense) {
  const auto g = build_cycle(64);
  const auto a = path_in_cycle(g, 3);
  MassVector phi(64);
  phi[0] = phi[1] = phi[2] = 1.0;
  const auto k = oracle::killed_matrix(g, {0, 1, 2});
  const Eigen::Vector3d ones(1.0, 1.0, 1.0);
  const Eigen::Vector3d r = ones - k * k * ones;
  EXPECT_NEAR(dirichlet_form(g, a, phi), 2.0 * r.dot(ones), 1e-14);
}

TEST(DirichletForm, RejectsOffDomainSupport) {
  const auto g = build_cycle(8);
  EXPECT_THROW(dirichlet_form(g, Domain::single(8, 0), MassVector::delta(8, 1)), PreconditionError);
  EXPECT_THROW(rayleigh_quotient(g, Domain::single(8, 0), MassVector(8)), PreconditionError);
  auto negative = MassVector::delta(8, 0);
  negative[0] = -1.0;
  EXPECT_THROW(rayleigh_quotient(g, Domain::single(8, 0), negative), PreconditionError);
}

TEST(LambdaA, Singleton) { EXPECT_EQ(lambda_a(build_cycle(8), Domain::single(8, 2)).value, 1.0); }

TEST(LambdaA, AdjacentPairInTree) {
  const auto g = build_tree_ball(3, 5);
  EXPECT_NEAR(lambda_a(g, Domain(g.vertex_count(), {0, 1})).value, 8.0 / 9.0, 1e-12);
}

TEST(LambdaA, PathsInCycleClosedForm) {
  const auto g = build_cycle(256);
  EXPECT_NEAR(lambda_a(g, path_in_cycle(g, 3)).value, 0.5, 1e-12);
  for (int k = 1; k <= 50; ++k) {
    const auto a = path_in_cycle(g, k);
    const double closed = sin_sq(std::numbers::pi / (k + 1));
    EXPECT_NEAR(lambda_a(g, a).value, closed, 1e-9) << k;
    std::vector<Vertex> members(a.members().begin(), a.members().end());
    EXPECT_NEAR(oracle::killed_gap(g, members), closed, 1e-12) << k;
  }
}

TEST(LambdaA, RandomSubsetsMatchDense) {
  CounterEngine engine(5);
  for (const auto& g : {build_lamplighter_segment(4), build_tree_ball(3, 4), build_torus({5, 5})}) {
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Vertex> members;
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (engine.uniform() < 0.5) members.push_back(v);
      }
      if (members.empty()) continue;
      const Domain a(g.vertex_count(), members);
      EXPECT_NEAR(lambda_a(g, a).value, oracle::killed_gap(g, members), 1e-9);
    }
  }
}

TEST(LambdaA, WholeFiniteGraphHasZeroGap) {
  const auto g = build_torus({3, 3});
  EXPECT_NEAR(lambda_a(g, Domain::all(9)).value, 0.0, 1e-10);
}

TEST(LambdaA, DomainMonotone) {
  const auto g = build_lamplighter_segment(5);
  const Vertex c = g.representative();
  double previous = 1.0;
  for (int r = 0; r <= 4; ++r) {
    const double value = lambda_a(g, ball(g, c, r)).value;
    EXPECT_LE(value, previous + 1e-12);
    previous = value;
  }
}

TEST(LambdaA, ConvergenceCapReportsBracket) {
  const auto g = build_cycle(256);
  LambdaOptions options;
  options.max_iterations = 3;
  try {
    lambda_a(g, path_in_cycle(g, 40), options);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_LE(e.bracket_low(), e.bracket_high());
    EXPECT_EQ(e.iterations(), 3);
  }
}

TEST(Rayleigh, PrincipalEigenvectorAttainsGap) {
  const auto g = build_cycle(64);
  const int k = 6;
  MassVector phi(64);
  for (int i = 0; i < k; ++i) phi[static_cast<std::size_t>(i)] = std::sin(std::numbers::pi * (i + 1) / (k + 1));
  EXPECT_NEAR(rayleigh_quotient(g, path_in_cycle(g, k), phi), sin_sq(std::numbers::pi / (k + 1)), 1e-9);
}

TEST(Rayleigh, BoundsGapFromAbove) {
  CounterEngine engine(11);
  const auto g = build_torus({3, 4});
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<Vertex> members;
    for (Vertex v = 0; v < 12; ++v) {
      if (engine.uniform() < 0.5) members.push_back(v);
    }
    if (members.empty()) continue;
    const Domain a(12, members);
    MassVector phi(12);
    for (Vertex v : members) phi[v] = engine.uniform() + 1e-3;
    EXPECT_GE(rayleigh_quotient(g, a, phi), oracle::killed_gap(g, members) - 1e-9);
  }
}

TEST(Profile, BelowMinimumMassIsOne) {
  const auto g = build_cycle(8);
  const auto profile = spectral_profile(g, ProfileMode::exhaustive);
  EXPECT_EQ(profile.at(1.9), 1.0);
  EXPECT_EQ(profile.at(-5.0), 1.0);
}

TEST(Profile, CycleEightAtFour) {
  const auto g = build_cycle(8);
  const auto profile = spectral_profile(g, ProfileMode::exhaustive);
  EXPECT_NEAR(profile.at(4.0), 0.75, 1e-12);
  EXPECT_TRUE(profile.certified_lower_bound());
}

TEST(Profile, ExhaustiveMatchesDenseBruteForce) {
  for (const auto& g : {build_cycle(7), build_torus({3, 3}), build_tree_ball(3, 2), build_path(9)}) {
    const auto profile = spectral_profile(g, ProfileMode::exhaustive);
    const auto subsets = oracle::all_subset_gaps(g);
    for (double x : all_thresholds(g)) {
      EXPECT_NEAR(profile.at(x), std::clamp(oracle::profile_at(subsets, x), 0.0, 1.0), 1e-9) << g.describe() << " " << x;
    }
  }
}

TEST(Profile, NonIncreasing) {
  const auto g = build_lamplighter_segment(3);
  ProfileOptions options;
  for (Vertex v = 0; v < 12; ++v) options.window.push_back(v);
  const auto profile = spectral_profile(g, ProfileMode::exhaustive, options);
  EXPECT_FALSE(profile.certified_lower_bound());
  double previous = 1.0;
  for (double x = 0; x <= 40; x += 0.5) {
    EXPECT_LE(profile.at(x), previous);
    previous = profile.at(x);
  }
}

TEST(Profile, BallFamilyIsAnUpperBound) {
  const auto g = build_torus({3, 3});
  const auto exact = spectral_profile(g, ProfileMode::exhaustive);
  const auto balls = spectral_profile(g, ProfileMode::ball_family);
  EXPECT_FALSE(balls.certified_lower_bound());
  for (double x : all_thresholds(g)) EXPECT_GE(balls.at(x), exact.at(x) - 1e-12);
  EXPECT_GE(balls.at(8.0), exact.at(8.0));
}

TEST(Profile, ModeSizeMismatch) {
  EXPECT_THROW(spectral_profile(build_cycle(15), ProfileMode::exhaustive), PreconditionError);
  EXPECT_THROW(spectral_profile(build_cycle(8), ProfileMode::analytic), PreconditionError);
  EXPECT_THROW(profile_mode_from_string("nearest"), ParseError);
}

TEST(Profile, ExactCycleProfileAgreesWithEnumeration) {
  for (int n : {5, 8, 11, 14}) {
    const auto g = build_cycle(n);
    const auto exact = exact_cycle_profile(g);
    const auto enumerated = spectral_profile(g, ProfileMode::exhaustive);
    for (double x = 0.0; x <= 2.0 * n + 3; x += 0.5) EXPECT_NEAR(exact.at(x), enumerated.at(x), 1e-9) << n << " " << x;
  }
}

TEST(Profile, ModelShape) {
  const ProfileModel model{2.0, 0.5, 3.0};
  EXPECT_EQ(model(5.0), 1.0);
  EXPECT_NEAR(model(6.0 * std::exp(1.0) / 2.0 * 2.0), std::min(1.0, 0.5 / std::pow(std::log(2.0 * std::exp(1.0)), 2.0)), 1e-12);
  EXPECT_LE(model(1e6), model(1e3));
}

TEST(Profile, CsvFormat) {
  const auto g = build_cycle(8);
  const auto profile = spectral_profile(g, ProfileMode::exhaustive);
  std::ostringstream out;
  const double xs[] = {4.0};
  write_profile_csv(out, profile, xs);
  EXPECT_EQ(out.str(), "L,lambda,mode\n4,0.75,exhaustive\n");
}

TEST(Cheeger, IsoProfileMatchesBruteForce) {
  const auto g = build_torus({3, 3});
  const auto iso = iso_profile(g);
  const auto subsets = oracle::all_subset_boundaries(g);
  for (double x : all_thresholds(g)) EXPECT_NEAR(iso.at(x), oracle::profile_at(subsets, x), 1e-12);
}

TEST(Cheeger, CycleEightValues) {
  const auto g = build_cycle(8);
  const auto spectral = spectral_profile(g, ProfileMode::exhaustive);
  const auto iso = iso_profile(g);
  EXPECT_NEAR(spectral.at(4.0), 0.75, 1e-12);
  EXPECT_NEAR(iso.at(4.0), 0.5, 1e-12);
  const auto thresholds = all_thresholds(g);
  const auto report = cheeger_check(spectral, iso, thresholds);
  EXPECT_EQ(report.lower_violations, 0U);
  EXPECT_EQ(report.upper_factor_two_violations, 0U);
  // Lambda(4) = 3/4 exceeds Phi*(4) = 1/2.
  EXPECT_GT(report.upper_violations, 0U);
  EXPECT_FALSE(report.summary.pass);
}

TEST(Cheeger, PerSetData) {
  const auto g = build_cycle(64);
  const Domain singles[] = {Domain::single(64, 0), Domain(64, {0, 1, 2})};
  const auto rows = set_cheeger_data(g, singles);
  EXPECT_DOUBLE_EQ(rows[0].boundary_ratio, 1.0);
  EXPECT_DOUBLE_EQ(rows[0].lambda, 1.0);
  EXPECT_NEAR(rows[1].boundary_ratio, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(rows[1].lambda, 0.5, 1e-12);
}

TEST(Cheeger, RejectsNonExhaustive) {
  const auto g = build_torus({3, 3});
  const auto balls = spectral_profile(g, ProfileMode::ball_family);
  const auto thresholds = all_thresholds(g);
  EXPECT_THROW(cheeger_check(balls, iso_profile(g), thresholds), PreconditionError);
}

TEST(KeyLemma, SingletonOnCycle) {
  const auto g = build_cycle(8);
  const auto profile = spectral_profile(g, ProfileMode::exhaustive);
  const auto r = key_lemma_check(g, Domain::single(8, 0), MassVector::delta(8, 0), profile);
  EXPECT_DOUBLE_EQ(r.lhs, 1.0);
  EXPECT_NEAR(r.rhs, 0.5 * profile.at(8.0), 1e-15);
  EXPECT_TRUE(r.pass);
}

TEST(KeyLemma, ScaleInvariant) {
  const auto g = build_cycle(10);
  const auto profile = spectral_profile(g, ProfileMode::exhaustive);
  const Domain a(10, {1, 2, 3, 7});
  MassVector phi(10);
  phi[1] = 0.3;
  phi[2] = 1.1;
  phi[3] = 0.2;
  phi[7] = 0.9;
  const auto base = key_lemma_check(g, a, phi, profile);
  auto scaled = phi;
  scaled *= 37.5;
  const auto other = key_lemma_check(g, a, scaled, profile);
  EXPECT_NEAR(base.lhs, other.lhs, 1e-12);
  EXPECT_NEAR(base.rhs, other.rhs, 1e-12);
}

TEST(KeyLemma, RejectsUncertifiedProfile) {
  const auto g = build_torus({3, 3});
  EXPECT_THROW(key_lemma_check(g, Domain::single(9, 0), MassVector::delta(9, 0),
                               spectral_profile(g, ProfileMode::ball_family)),
               PreconditionError);
}

TEST(DecayThreshold, SpecArithmetic) {
  const auto one = SpectralProfile::from_function([](double) { return 1.0; }, "test", "constant", true);
  EXPECT_EQ(decay_threshold(one, 0, 1.0).k_star, 1.0);
  EXPECT_EQ(decay_threshold(one, 2, 1.0).k_star, 9.0);
  const auto zero = SpectralProfile::from_function([](double) { return 0.0; }, "test", "zero", true);
  EXPECT_FALSE(decay_threshold(zero, 1, 1.0).finite);
}

TEST(L2Decay, ZeroLevelIsContraction) {
  const auto g = build_tree_ball(3, 8);
  const auto profile = spectral_profile(g, ProfileMode::exhaustive, ProfileOptions{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, 4, {}});
  const auto r = l2_decay_check(g, MassVector::delta(g.vertex_count(), 0), 0, profile, CheckMode::diagnostic);
  EXPECT_EQ(r.details["k_star"].get<double>(), 1.0);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.diagnostic);
}

TEST(L2Decay, RejectsUpperBoundProfileInAssertMode) {
  const auto g = build_torus({3, 3});
  const auto balls = spectral_profile(g, ProfileMode::ball_family);
  EXPECT_THROW(l2_decay_check(g, MassVector::delta(9, 0), 1, balls), PreconditionError);
  EXPECT_NO_THROW(l2_decay_check(g, MassVector::delta(9, 0), 1, balls, CheckMode::diagnostic));
}

TEST(L2Decay, CycleWithExactProfile) {
  const auto g = build_cycle(256);
  const auto profile = exact_cycle_profile(g);
  for (int ell = 0; ell <= 2; ++ell) {
    const auto r = l2_decay_check(g, MassVector::delta(256, 0), ell, profile);
    EXPECT_TRUE(r.pass) << ell;
    EXPECT_FALSE(r.vacuous) << ell;
  }
}

TEST(L2Decay, ContractionIsMonotone) {
  const auto g = build_lamplighter_segment(5);
  auto mu = MassVector::delta(g.vertex_count(), 7);
  double previous = norm2_inv_pi_sq(g, mu);
  for (int k = 0; k < 30; ++k) {
    mu = step(g, mu);
    const double now = norm2_inv_pi_sq(g, mu);
    EXPECT_LE(now, previous * (1 + 1e-14));
    previous = now;
  }
}

TEST(EscapeThreshold, RegularGraphRatioIsOne) {
  const auto g = build_cycle(64);
  const auto profile = exact_cycle_profile(g);
  const auto t = escape_threshold(g, Domain(64, {0, 1, 2}), 0, profile, EscapeVariant::uniform);
  EXPECT_EQ(t.bound, 1.0);
  EXPECT_EQ(t.threshold.k_star, 1.0);
}

TEST(EscapeThreshold, TreeBallWithProxyProfile) {
  const auto g = build_tree_ball(3, 10);
  std::vector<Vertex> window;
  for (Vertex v = 0; v < 12; ++v) window.push_back(v);
  const auto proxy = spectral_profile(g, ProfileMode::exhaustive, ProfileOptions{window, 4, {}});
  const auto r = escape_check(g, ball(g, 0, 1), 3, proxy, EscapeVariant::uniform, CheckMode::diagnostic);
  EXPECT_TRUE(r.diagnostic);
  EXPECT_GT(r.details["k_star"].get<double>(), 3.0);
  EXPECT_TRUE(r.pass);
}

TEST(EscapeBound, Arithmetic) {
  EXPECT_DOUBLE_EQ(escape_bound_rhs(10, 0, 1.5, 2.0, 4.0), 2.0);
  EXPECT_NEAR(escape_bound_rhs(7, 3, 0.0, 0.4, 1.0), std::exp(-1.2), 1e-15);
  EXPECT_NEAR(escape_bound_rhs(std::exp(4.0), 64, 2.0, 0.5, 9.0), 3.0 * std::exp(-2.0), 1e-12);
  EXPECT_NEAR(escape_bound_rhs(1, 8, 2.0, 1.0, 1.0), std::exp(-2.0), 1e-12);
  EXPECT_THROW(escape_bound_rhs(0.5, 1, 1, 1, 1), PreconditionError);
  EXPECT_THROW(escape_bound_rhs(2, -1, 1, 1, 1), PreconditionError);
}
