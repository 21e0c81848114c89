#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "magsq/errors.hpp"
#include "magsq/ode.hpp"

using namespace magsq;

namespace {

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(a + (b - a) * i / (n - 1));
  return g;
}

}  // namespace

TEST_CASE("harmonic oscillator samples match the exact solution") {
  const double w = 3.0;
  DormandPrince solver([&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.resize(2);
    dy << y(1), -w * w * y(0);
  });
  Eigen::VectorXd y0(2);
  y0 << 1.0, 0.0;
  const auto t = grid(0.0, 10.0, 101);
  const auto ys = solver.solve(y0, t);
  REQUIRE(ys.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(std::abs(ys[i](0) - std::cos(w * t[i])) < 1e-7);
    CHECK(std::abs(ys[i](1) + w * std::sin(w * t[i])) < 1e-6);
  }
}

TEST_CASE("dense output between steps is accurate") {
  DormandPrince solver([](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy = -y * (1.0 + std::sin(t));
  });
  Eigen::VectorXd y0(1);
  y0 << 2.0;
  DenseTrajectory dense;
  const std::vector<double> ends = {0.0, 5.0};
  solver.solve(y0, ends, &dense);
  REQUIRE(dense.step_count() > 3);
  // y(t) = 2 exp(−t − 1 + cos t)
  for (double t = 0.0; t <= 5.0; t += 0.0137) {
    const double exact = 2.0 * std::exp(-t - 1.0 + std::cos(t));
    CHECK(std::abs(dense.component(t, 0) - exact) < 1e-8);
  }
  CHECK_THROWS_AS(dense(5.5), DomainError);
  CHECK_THROWS_AS(dense(-0.1), DomainError);
}

TEST_CASE("tighter tolerances reduce the error") {
  const auto run = [](double rtol) {
    OdeOptions opt;
    opt.rtol = rtol;
    opt.atol = rtol * 1e-3;
    DormandPrince solver(
        [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy = y; }, opt);
    Eigen::VectorXd y0(1);
    y0 << 1.0;
    const std::vector<double> t = {0.0, 3.0};
    return std::abs(solver.solve(y0, t).back()(0) - std::exp(3.0));
  };
  CHECK(run(1e-10) < run(1e-5));
  CHECK(run(1e-10) < 1e-7);
}

TEST_CASE("projection hook is applied after each step") {
  DormandPrince solver([](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy = Eigen::VectorXd::Ones(y.size());
  });
  int calls = 0;
  solver.set_projection([&](Eigen::VectorXd& y) {
    ++calls;
    y(1) = 0.0;
  });
  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(2);
  const std::vector<double> t = {0.0, 1.0};
  const auto ys = solver.solve(y0, t);
  CHECK(calls > 0);
  CHECK(ys.back()(1) == 0.0);
  CHECK(std::abs(ys.back()(0) - 1.0) < 1e-12);
}

TEST_CASE("step budget exhaustion raises an integration error") {
  OdeOptions opt;
  opt.max_steps = 5;
  DormandPrince solver(
      [](double t, const Eigen::VectorXd&, Eigen::VectorXd& dy) {
        dy.resize(1);
        dy << std::cos(100.0 * t);
      },
      opt);
  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(1);
  const std::vector<double> t = {0.0, 100.0};
  CHECK_THROWS_AS(solver.solve(y0, t), IntegrationError);
}

TEST_CASE("time grid must increase") {
  DormandPrince solver([](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy = y; });
  Eigen::VectorXd y0 = Eigen::VectorXd::Ones(1);
  const std::vector<double> t = {1.0, 0.5};
  CHECK_THROWS_AS(solver.solve(y0, t), DomainError);
}
