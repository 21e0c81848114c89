#pragma once

// Gaussian moment dynamics.
//
// Quadratures are ordered (X₁, Y₁, …, Xₙ, Yₙ) with X = (o + o†)/√2 and
// Y = i(o† − o)/√2, so the vacuum covariance matrix is ½·I. Covariance
// entries are symmetrized second moments V_ij = ⟨u_i u_j + u_j u_i⟩/2.

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "magsq/ode.hpp"

namespace magsq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct GaussianState {
  Vector mean;
  Matrix cov;

  GaussianState() = default;
  GaussianState(Vector mean, Matrix cov);

  Eigen::Index modes() const noexcept { return cov.rows() / 2; }

  /// Two-quadrature marginal of mode `mode`.
  GaussianState marginal(Eigen::Index mode) const;

  static GaussianState vacuum(Eigen::Index modes);
  static GaussianState thermal(Eigen::Index modes, double occupancy);
};

/// Linear moment equations  d⟨u⟩/dt = A(t)⟨u⟩ + f(t),  dV/dt = A V + V Aᵀ + D.
class MomentModel {
 public:
  using DriftFunction = std::function<Matrix(double)>;
  using ForcingFunction = std::function<Vector(double)>;

  MomentModel(Matrix drift, Matrix diffusion);
  MomentModel(DriftFunction drift, Eigen::Index dimension, Matrix diffusion,
              ForcingFunction forcing = {});

  Eigen::Index dimension() const noexcept { return diffusion_.rows(); }
  bool time_dependent() const noexcept {
    return std::holds_alternative<DriftFunction>(drift_);
  }

  Matrix drift(double t = 0.0) const;
  const Matrix& constant_drift() const;
  const Matrix& diffusion() const noexcept { return diffusion_; }
  bool has_forcing() const noexcept { return static_cast<bool>(forcing_); }
  Vector forcing(double t) const;

  /// Non-fatal diagnostics recorded by model builders (e.g. RWA validity).
  std::vector<std::string> warnings;

 private:
  std::variant<Matrix, DriftFunction> drift_;
  Matrix diffusion_;
  ForcingFunction forcing_;
};

/// Largest real part of the spectrum of `a`; the drift is stable iff < 0.
double hurwitz_margin(const Matrix& a);

/// Steady-state covariance: solves A V + V Aᵀ = −D by Kronecker vectorization.
/// Throws StabilityError when A is not Hurwitz.
Matrix solve_lyapunov(const Matrix& a, const Matrix& d);

/// ‖A V + V Aᵀ + D‖_F.
double lyapunov_residual(const Matrix& a, const Matrix& v, const Matrix& d);

/// Evolve mean and covariance, returning the state at every point of `t_grid`.
/// The first grid point is the initial time.
std::vector<GaussianState> integrate_moments(const MomentModel& model,
                                             const GaussianState& initial,
                                             std::span<const double> t_grid,
                                             const OdeOptions& options = {});

/// Covariance diagonal entry `index`.
double quadrature_variance(const GaussianState& state, Eigen::Index index);

/// Squeezing in dB relative to the vacuum variance ½; positive means squeezed.
double squeezing_db(double variance);

/// Variance corresponding to `db` of squeezing.
double variance_from_db(double db);

struct BogoliubovParams {
  double r = 0.0;        // squeezing parameter
  double g_tilde = 0.0;  // cavity–Bogoliubov coupling √(G₋² − G₊²)
};

BogoliubovParams bogoliubov_params(double g_plus, double g_minus);

/// Mean occupancy of δB = cosh(r) δb + sinh(r) δb† for a single-mode
/// covariance block of (q, p).
double bogoliubov_occupancy(const Eigen::Matrix2d& block, double r);

/// Wigner density of mode `mode` at each (q, p) point.
std::vector<double> wigner_gaussian(const GaussianState& state,
                                    Eigen::Index mode,
                                    std::span<const Eigen::Vector2d> points);

/// Wigner density on the tensor grid; result(i, j) = W(q_axis[j], p_axis[i]).
Matrix wigner_grid(const GaussianState& state, Eigen::Index mode,
                   std::span<const double> q_axis,
                   std::span<const double> p_axis);

struct StateReport {
  bool symmetric = false;
  bool physical = false;
  double min_symplectic_eigenvalue = 0.0;
  /// Smallest eigenvalue of V + (i/2) Ω.
  double min_uncertainty_eigenvalue = 0.0;
};

/// Checks symmetry and the uncertainty principle V + (i/2)Ω ⪰ 0.
StateReport validate_state(const GaussianState& state);

/// Symplectic form ⊕ₖ [[0, 1], [−1, 0]] on `modes` modes.
Matrix symplectic_form(Eigen::Index modes);

/// Real quadrature drift of the linear ladder equations
///   dōⱼ/dt = Σₖ α_jk oₖ + β_jk oₖ†,
/// in the (X, Y) ordering above.
Matrix quadrature_drift(const Eigen::MatrixXcd& alpha,
                        const Eigen::MatrixXcd& beta);

/// Collects a quantity over a one-dimensional axis (time or a parameter).
struct SqueezingTrace {
  struct Series {
    std::string name;
    std::string unit;
    std::vector<double> values;
  };

  std::string axis_name;
  std::string axis_unit;
  std::vector<double> axis;
  std::vector<std::string> quadratures;
  std::vector<std::vector<double>> variances;    // [quadrature][point]
  std::vector<std::vector<double>> squeezing;    // dB, [quadrature][point]
  std::vector<Series> extra;                     // e.g. N_B
  std::vector<bool> stable;                      // false marks skipped points

  std::size_t size() const noexcept { return axis.size(); }
  const std::vector<double>& squeezing_of(const std::string& quadrature) const;
  const std::vector<double>& variance_of(const std::string& quadrature) const;
  const std::vector<double>& extra_of(const std::string& name) const;
  /// Throws DimensionError if any series length differs from the axis.
  void check() const;
};

}  // namespace magsq
