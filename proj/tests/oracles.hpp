#pragma once

// Reference computations written independently of the library code paths.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

using Cd = std::complex<double>;

/// Quadrature drift from ladder coefficients through the explicit change of
/// basis u = T (o, o†) with X = (o + o†)/√2, Y = i(o† − o)/√2.
inline Eigen::MatrixXd ladder_to_quadrature(const Eigen::MatrixXcd& alpha,
                                            const Eigen::MatrixXcd& beta) {
  const Eigen::Index n = alpha.rows();
  Eigen::MatrixXcd m(2 * n, 2 * n);
  m << alpha, beta, beta.conjugate(), alpha.conjugate();
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  const double s = 1.0 / std::sqrt(2.0);
  const Cd i(0.0, 1.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    t(2 * k, k) = s;
    t(2 * k, n + k) = s;
    t(2 * k + 1, k) = -i * s;
    t(2 * k + 1, n + k) = i * s;
  }
  const Eigen::MatrixXcd a = t * m * t.inverse();
  return a.real();
}

/// Fixed-step classical RK4 for dV/dt = A(t)V + VA(t)ᵀ + D.
inline Eigen::MatrixXd rk4_covariance(const std::function<Eigen::MatrixXd(double)>& drift,
                                      const Eigen::MatrixXd& d, Eigen::MatrixXd v,
                                      double t0, double t1, int steps) {
  const auto f = [&](double t, const Eigen::MatrixXd& x) {
    const Eigen::MatrixXd a = drift(t);
    return Eigen::MatrixXd(a * x + x * a.transpose() + d);
  };
  const double h = (t1 - t0) / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    const Eigen::MatrixXd k1 = f(t, v);
    const Eigen::MatrixXd k2 = f(t + h / 2, v + h / 2 * k1);
    const Eigen::MatrixXd k3 = f(t + h / 2, v + h / 2 * k2);
    const Eigen::MatrixXd k4 = f(t + h, v + h * k3);
    v += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return v;
}

/// Smallest eigenvalue of the Hermitian matrix V + (i/2)Ω.
inline double uncertainty_min_eigenvalue(const Eigen::MatrixXd& v) {
  const Eigen::Index n = v.rows() / 2;
  Eigen::MatrixXcd h = v.cast<Cd>();
  for (Eigen::Index k = 0; k < n; ++k) {
    h(2 * k, 2 * k + 1) += Cd(0.0, 0.5);
    h(2 * k + 1, 2 * k) -= Cd(0.0, 0.5);
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h).eigenvalues().minCoeff();
}

/// Trapezoidal integral of a table sampled on uniform axes.
inline double trapezoid_2d(const Eigen::MatrixXd& w, double dq, double dp) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      const double wi = (i == 0 || i == w.rows() - 1) ? 0.5 : 1.0;
      const double wj = (j == 0 || j == w.cols() - 1) ? 0.5 : 1.0;
      sum += wi * wj * w(i, j);
    }
  }
  return sum * dq * dp;
}

}  // namespace oracle
