#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "magsq/errors.hpp"
#include "magsq/linear_system.hpp"
#include "oracles.hpp"

using namespace magsq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("drift matrix has the expected coupling layout") {
  LinearOmmParams p;
  const EffectiveCouplings g{2.0, 5.0};
  const Matrix a = linear::drift_matrix(p, g);
  Matrix expected(6, 6);
  const double ka = -p.kappa_a / 2, gb = -p.gamma_b / 2, km = -p.kappa_m / 2, gm = p.g_m;
  // clang-format off
  expected << ka,  0,   0,   -3,  0,   0,
              0,   ka,  7,   0,   0,   0,
              0,   -3,  gb,  0,   0,   gm,
              7,   0,   0,   gb,  -gm, 0,
              0,   0,   0,   gm,  km,  0,
              0,   0,   -gm, 0,   0,   km;
  // clang-format on
  CHECK((a - expected).norm() == 0.0);
}

TEST_CASE("drift matrix agrees with the ladder-operator equations") {
  // δȧ = −κ_a/2 δa + iG₋ δb + iG₊ δb†
  // δḃ = −γ_b/2 δb − i g_m δm + iG₋ δa + iG₊ δa†
  // δṁ = −κ_m/2 δm − i g_m δb
  LinearOmmParams p;
  const EffectiveCouplings g{from_hz(11.4e6), from_hz(15e6)};
  const std::complex<double> i(0.0, 1.0);
  Eigen::MatrixXcd alpha = Eigen::MatrixXcd::Zero(3, 3), beta = Eigen::MatrixXcd::Zero(3, 3);
  alpha(0, 0) = -p.kappa_a / 2;
  alpha(0, 1) = i * g.minus;
  alpha(1, 0) = i * g.minus;
  alpha(1, 1) = -p.gamma_b / 2;
  alpha(1, 2) = -i * p.g_m;
  alpha(2, 1) = -i * p.g_m;
  alpha(2, 2) = -p.kappa_m / 2;
  beta(0, 1) = i * g.plus;
  beta(1, 0) = i * g.plus;
  const Matrix ref = oracle::ladder_to_quadrature(alpha, beta);
  CHECK((linear::drift_matrix(p, g) - ref).norm() < 1e-12 * ref.norm());
}

TEST_CASE("diffusion matrix uses thermal baths and an empty optical bath") {
  LinearOmmParams p;
  p.temperature = 0.5;
  const Matrix d = linear::diffusion_matrix(p);
  const double n = thermal_occupancy(p.omega_b, 0.5);
  CHECK(d(0, 0) == p.kappa_a / 2);
  CHECK_THAT(d(2, 2), WithinRel(p.gamma_b * (n + 0.5), 1e-15));
  CHECK_THAT(d(5, 5), WithinRel(p.kappa_m * (n + 0.5), 1e-15));
  CHECK((d - Matrix(d.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("parameter validation") {
  LinearOmmParams p;
  p.omega_m = from_hz(9e9);
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = LinearOmmParams{};
  p.kappa_a = -1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = LinearOmmParams{};
  p.temperature = -0.1;
  CHECK_THROWS_AS(p.validate(), DomainError);
  CHECK_THROWS_AS(build_model(LinearOmmParams{}.with_ratio(1.0)), StabilityError);
  CHECK_THROWS_AS(build_model(LinearOmmParams{}.with_ratio(1.2)), StabilityError);
}

TEST_CASE("RWA validity warnings") {
  CHECK(build_model(LinearOmmParams{}).warnings.empty());
  LinearOmmParams strong;
  strong.drive = DirectCouplings{from_hz(2e9), 0.5};
  CHECK_FALSE(build_model(strong).warnings.empty());
}

TEST_CASE("steady states are physical across the ratio range") {
  for (const double t : {0.01, 0.5, 1.0}) {
    LinearOmmParams p;
    p.temperature = t;
    for (double ratio = 0.0; ratio < 0.995; ratio += 0.03) {
      const auto r = steady_state(p.with_ratio(ratio));
      const auto report = validate_state(r.state);
      CHECK(report.physical);
      CHECK(report.min_uncertainty_eigenvalue >= -1e-8);
      CHECK(r.margin < 0.0);
      const Matrix a = build_model(p.with_ratio(ratio)).constant_drift();
      CHECK(lyapunov_residual(a, r.state.cov, linear::diffusion_matrix(p)) <
            1e-10 * linear::diffusion_matrix(p).norm());
    }
  }
}

TEST_CASE("without the blue tone the mechanics is not squeezed") {
  const auto r = steady_state(LinearOmmParams{}.with_ratio(0.0));
  CHECK(r.bogoliubov.r == 0.0);
  CHECK(std::abs(r.state.cov(linear::kQ, linear::kQ) - r.state.cov(linear::kP, linear::kP)) <
        1e-8);
  CHECK(r.s_b <= 1e-12);
}

TEST_CASE("long-time integration reproduces the algebraic steady state") {
  const LinearOmmParams p = LinearOmmParams{}.with_ratio(0.76);
  const MomentModel model = build_model(p);
  const Matrix v = solve_lyapunov(model.constant_drift(), model.diffusion());
  const double horizon = 30.0 / std::abs(hurwitz_margin(model.constant_drift()));
  const std::vector<double> t = {0.0, horizon};
  const auto states = integrate_moments(model, GaussianState::vacuum(3), t);
  CHECK((states.back().cov - v).norm() < 1e-6 * v.norm());
}

TEST_CASE("ratio sweep marks unstable points") {
  const std::vector<double> ratios = {0.2, 0.76, 1.0, 1.3};
  const auto trace = squeezing_vs_ratio(LinearOmmParams{}, ratios);
  REQUIRE_NOTHROW(trace.check());
  CHECK(trace.stable == std::vector<bool>{true, true, false, false});
  CHECK(std::isnan(trace.squeezing_of("Y_m")[2]));
  CHECK(std::isnan(trace.extra_of("N_B")[3]));
  CHECK(trace.squeezing_of("Y_m")[1] > trace.squeezing_of("Y_m")[0]);
  const std::vector<double> negative = {-0.1};
  CHECK_THROWS_AS(squeezing_vs_ratio(LinearOmmParams{}, negative), DomainError);
}

TEST_CASE("optimal ratio at 10 mK") {
  const auto best = optimal_ratio(LinearOmmParams{});
  CHECK_THAT(best.ratio, WithinAbs(0.76, 0.03));
  CHECK(best.value > 0.0);
  // The optimum beats its neighbours.
  const auto left = steady_state(LinearOmmParams{}.with_ratio(best.ratio - 0.01)).s_m;
  const auto right = steady_state(LinearOmmParams{}.with_ratio(best.ratio + 0.01)).s_m;
  CHECK(best.value >= left);
  CHECK(best.value >= right);
}

TEST_CASE("pump power for G-/2pi = 15 MHz") {
  const LinearOmmParams p;
  const double omega_minus = p.cavity_frequency() - p.omega_b;
  const double power = power_from_coupling(from_hz(15e6), p.g0, p.kappa_a, p.omega_b, omega_minus);
  CHECK_THAT(power * 1e3, WithinRel(26.41, 0.01));
}
