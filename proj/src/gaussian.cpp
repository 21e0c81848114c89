#include "magsq/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "magsq/errors.hpp"

namespace magsq {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << what << " must be square (got " << m.rows() << "x" << m.cols() << ")";
    throw DimensionError(msg.str());
  }
}

bool is_symmetric(const Matrix& m) {
  const double scale = std::max(1.0, m.norm());
  return (m - m.transpose()).norm() <= 1e-10 * scale;
}

}  // namespace

GaussianState::GaussianState(Vector mean_in, Matrix cov_in)
    : mean(std::move(mean_in)), cov(std::move(cov_in)) {
  require_square(cov, "covariance matrix");
  if (cov.rows() % 2 != 0) {
    throw DimensionError("covariance matrix must have even dimension");
  }
  if (mean.size() != cov.rows()) {
    throw DimensionError("mean vector and covariance matrix sizes differ");
  }
}

GaussianState GaussianState::marginal(Eigen::Index mode) const {
  if (mode < 0 || mode >= modes()) throw DomainError("mode index out of range");
  return {mean.segment<2>(2 * mode), cov.block<2, 2>(2 * mode, 2 * mode)};
}

GaussianState GaussianState::vacuum(Eigen::Index modes) {
  return thermal(modes, 0.0);
}

GaussianState GaussianState::thermal(Eigen::Index modes, double occupancy) {
  if (!(occupancy >= 0.0)) throw DomainError("occupancy must be non-negative");
  return {Vector::Zero(2 * modes),
          (occupancy + 0.5) * Matrix::Identity(2 * modes, 2 * modes)};
}

MomentModel::MomentModel(Matrix drift, Matrix diffusion)
    : drift_(std::move(drift)), diffusion_(std::move(diffusion)) {
  const auto& a = std::get<Matrix>(drift_);
  require_square(a, "drift matrix");
  require_square(diffusion_, "diffusion matrix");
  if (a.rows() != diffusion_.rows()) {
    throw DimensionError("drift and diffusion dimensions differ");
  }
  if (!is_symmetric(diffusion_)) throw DomainError("diffusion must be symmetric");
}

MomentModel::MomentModel(DriftFunction drift, Eigen::Index dimension,
                         Matrix diffusion, ForcingFunction forcing)
    : drift_(std::move(drift)),
      diffusion_(std::move(diffusion)),
      forcing_(std::move(forcing)) {
  require_square(diffusion_, "diffusion matrix");
  if (diffusion_.rows() != dimension) {
    throw DimensionError("diffusion dimension differs from model dimension");
  }
  if (!is_symmetric(diffusion_)) throw DomainError("diffusion must be symmetric");
}

Matrix MomentModel::drift(double t) const {
  if (const auto* a = std::get_if<Matrix>(&drift_)) return *a;
  Matrix a = std::get<DriftFunction>(drift_)(t);
  if (a.rows() != dimension() || a.cols() != dimension()) {
    throw DimensionError("drift evaluator returned a matrix of the wrong size");
  }
  return a;
}

const Matrix& MomentModel::constant_drift() const {
  if (const auto* a = std::get_if<Matrix>(&drift_)) return *a;
  throw DomainError("model drift is time dependent");
}

Vector MomentModel::forcing(double t) const {
  if (!forcing_) return Vector::Zero(dimension());
  return forcing_(t);
}

double hurwitz_margin(const Matrix& a) {
  require_square(a, "drift matrix");
  if (a.size() == 0) throw DimensionError("empty drift matrix");
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw DomainError("eigenvalue computation failed");
  }
  return solver.eigenvalues().real().maxCoeff();
}

Matrix solve_lyapunov(const Matrix& a, const Matrix& d) {
  require_square(a, "drift matrix");
  require_square(d, "diffusion matrix");
  if (a.rows() != d.rows()) {
    throw DimensionError("drift and diffusion dimensions differ");
  }
  const double margin = hurwitz_margin(a);
  if (!(margin < 0.0)) {
    std::ostringstream msg;
    msg << "drift matrix is not Hurwitz (max Re λ = " << margin << ")";
    throw StabilityError(msg.str(), margin);
  }

  const Eigen::Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  // vec(A V) = (I ⊗ A) vec(V),  vec(V Aᵀ) = (A ⊗ I) vec(V)  (column-major vec).
  Matrix k = Matrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      k.block(i * n, j * n, n, n) += id(i, j) * a + a(i, j) * id;
    }
  }
  const Vector rhs = -Eigen::Map<const Vector>(d.data(), n * n);
  const Eigen::PartialPivLU<Matrix> lu(k);
  Vector x = lu.solve(rhs);
  // One round of iterative refinement.
  x += lu.solve(rhs - k * x);

  Matrix v = Eigen::Map<const Matrix>(x.data(), n, n);
  return 0.5 * (v + v.transpose());
}

double lyapunov_residual(const Matrix& a, const Matrix& v, const Matrix& d) {
  return (a * v + v * a.transpose() + d).norm();
}

std::vector<GaussianState> integrate_moments(const MomentModel& model,
                                             const GaussianState& initial,
                                             std::span<const double> t_grid,
                                             const OdeOptions& options) {
  const Eigen::Index n = model.dimension();
  if (initial.cov.rows() != n) {
    throw DimensionError("initial state dimension differs from the model");
  }
  const auto report = validate_state(initial);
  if (!report.physical) {
    throw StateError("initial covariance matrix is not a physical state");
  }

  const bool constant = !model.time_dependent();
  const Matrix constant_a = constant ? model.constant_drift() : Matrix();
  const Matrix& d = model.diffusion();

  OdeRhs rhs = [&, n](double t, const Vector& y, Vector& dy) {
    const Matrix a = constant ? constant_a : model.drift(t);
    const auto mean = y.head(n);
    const Eigen::Map<const Matrix> v(y.data() + n, n, n);
    dy.head(n) = a * mean;
    if (model.has_forcing()) dy.head(n) += model.forcing(t);
    const Matrix av = a * v;
    Eigen::Map<Matrix>(dy.data() + n, n, n) = av + av.transpose() + d;
  };

  DormandPrince solver(rhs, options);
  solver.set_projection([n](Vector& y) {
    Eigen::Map<Matrix> v(y.data() + n, n, n);
    const Matrix sym = 0.5 * (v + v.transpose());
    v = sym;
  });

  Vector y0(n + n * n);
  y0.head(n) = initial.mean;
  Eigen::Map<Matrix>(y0.data() + n, n, n) = initial.cov;

  const auto samples = solver.solve(y0, t_grid);
  std::vector<GaussianState> states;
  states.reserve(samples.size());
  for (const auto& y : samples) {
    states.emplace_back(y.head(n), Eigen::Map<const Matrix>(y.data() + n, n, n));
  }
  return states;
}

double quadrature_variance(const GaussianState& state, Eigen::Index index) {
  if (index < 0 || index >= state.cov.rows()) {
    throw DomainError("quadrature index out of range");
  }
  return state.cov(index, index);
}

double squeezing_db(double variance) {
  if (!(variance > 0.0)) throw DomainError("variance must be positive");
  return -10.0 * std::log10(variance / 0.5);
}

double variance_from_db(double db) { return 0.5 * std::pow(10.0, -db / 10.0); }

BogoliubovParams bogoliubov_params(double g_plus, double g_minus) {
  if (!(g_plus >= 0.0)) throw DomainError("G+ must be non-negative");
  if (!(g_plus < g_minus)) {
    throw StabilityError("Bogoliubov transformation requires G+ < G-",
                         std::numeric_limits<double>::quiet_NaN());
  }
  return {0.5 * std::log((g_minus + g_plus) / (g_minus - g_plus)),
          std::sqrt(g_minus * g_minus - g_plus * g_plus)};
}

double bogoliubov_occupancy(const Eigen::Matrix2d& block, double r) {
  const GaussianState mode(Vector::Zero(2), block);
  if (!validate_state(mode).physical) {
    throw StateError("mechanical block is not a valid single-mode state");
  }
  const double n = (block(0, 0) + block(1, 1) - 1.0) / 2.0;  // ⟨b†b⟩
  const double anomalous = block(0, 0) - block(1, 1);        // ⟨b²⟩ + ⟨b†²⟩
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  return ch * ch * n + sh * sh * (n + 1.0) + ch * sh * anomalous;
}

namespace {

struct WignerKernel {
  Eigen::Vector2d mu;
  Eigen::Matrix2d inverse;
  double norm;

  WignerKernel(const GaussianState& state, Eigen::Index mode) {
    const GaussianState m = state.marginal(mode);
    const double det = m.cov.determinant();
    if (!(det > 1e-300) || !std::isfinite(det)) {
      throw DegeneracyError("marginal covariance matrix is singular");
    }
    mu = m.mean;
    inverse = m.cov.inverse();
    norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(det));
  }

  double operator()(const Eigen::Vector2d& u) const {
    const Eigen::Vector2d d = u - mu;
    return norm * std::exp(-0.5 * d.dot(inverse * d));
  }
};

}  // namespace

std::vector<double> wigner_gaussian(const GaussianState& state,
                                    Eigen::Index mode,
                                    std::span<const Eigen::Vector2d> points) {
  const WignerKernel w(state, mode);
  std::vector<double> values;
  values.reserve(points.size());
  for (const auto& p : points) values.push_back(w(p));
  return values;
}

Matrix wigner_grid(const GaussianState& state, Eigen::Index mode,
                   std::span<const double> q_axis,
                   std::span<const double> p_axis) {
  const WignerKernel w(state, mode);
  Matrix out(p_axis.size(), q_axis.size());
  for (std::size_t i = 0; i < p_axis.size(); ++i) {
    for (std::size_t j = 0; j < q_axis.size(); ++j) {
      out(i, j) = w(Eigen::Vector2d(q_axis[j], p_axis[i]));
    }
  }
  return out;
}

Matrix symplectic_form(Eigen::Index modes) {
  Matrix omega = Matrix::Zero(2 * modes, 2 * modes);
  for (Eigen::Index k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

StateReport validate_state(const GaussianState& state) {
  StateReport report;
  const Matrix& v = state.cov;
  if (v.rows() == 0 || v.rows() != v.cols() || v.rows() % 2 != 0 ||
      !v.allFinite()) {
    return report;
  }
  report.symmetric = is_symmetric(v);
  const Matrix vs = 0.5 * (v + v.transpose());
  const Matrix omega = symplectic_form(state.modes());

  const Eigen::MatrixXcd uncertainty =
      vs.cast<std::complex<double>>() +
      std::complex<double>(0.0, 0.5) * omega.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> herm(uncertainty,
                                                       Eigen::EigenvaluesOnly);
  report.min_uncertainty_eigenvalue = herm.eigenvalues().minCoeff();

  // Symplectic eigenvalues are the moduli of the spectrum of iΩV.
  const Eigen::MatrixXcd iov =
      std::complex<double>(0.0, 1.0) * (omega * vs).cast<std::complex<double>>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(iov, false);
  report.min_symplectic_eigenvalue = ces.eigenvalues().cwiseAbs().minCoeff();

  const bool diagonal_ok = (vs.diagonal().array() >= 0.0).all();
  report.physical = report.symmetric && diagonal_ok &&
                    report.min_uncertainty_eigenvalue >= -1e-8;
  return report;
}

Matrix quadrature_drift(const Eigen::MatrixXcd& alpha,
                        const Eigen::MatrixXcd& beta) {
  if (alpha.rows() != alpha.cols() || beta.rows() != alpha.rows() ||
      beta.cols() != alpha.cols()) {
    throw DimensionError("ladder coefficient matrices must be square and equal");
  }
  const Eigen::Index modes = alpha.rows();
  Matrix a(2 * modes, 2 * modes);
  for (Eigen::Index j = 0; j < modes; ++j) {
    for (Eigen::Index k = 0; k < modes; ++k) {
      const auto sum = alpha(j, k) + beta(j, k);
      const auto diff = alpha(j, k) - beta(j, k);
      a(2 * j, 2 * k) = sum.real();
      a(2 * j, 2 * k + 1) = -diff.imag();
      a(2 * j + 1, 2 * k) = sum.imag();
      a(2 * j + 1, 2 * k + 1) = diff.real();
    }
  }
  return a;
}

namespace {

template <typename T>
const T& find_named(const std::vector<std::string>& names,
                    const std::vector<T>& values, const std::string& key) {
  const auto it = std::find(names.begin(), names.end(), key);
  if (it == names.end()) throw DomainError("unknown trace series: " + key);
  return values.at(static_cast<std::size_t>(it - names.begin()));
}

}  // namespace

const std::vector<double>& SqueezingTrace::squeezing_of(
    const std::string& quadrature) const {
  return find_named(quadratures, squeezing, quadrature);
}

const std::vector<double>& SqueezingTrace::variance_of(
    const std::string& quadrature) const {
  return find_named(quadratures, variances, quadrature);
}

const std::vector<double>& SqueezingTrace::extra_of(const std::string& name) const {
  for (const auto& s : extra) {
    if (s.name == name) return s.values;
  }
  throw DomainError("unknown trace series: " + name);
}

void SqueezingTrace::check() const {
  const auto n = axis.size();
  bool ok = variances.size() == quadratures.size() &&
            squeezing.size() == quadratures.size() && stable.size() == n;
  for (const auto& v : variances) ok = ok && v.size() == n;
  for (const auto& v : squeezing) ok = ok && v.size() == n;
  for (const auto& s : extra) ok = ok && s.values.size() == n;
  if (!ok) throw DimensionError("trace series lengths differ from the axis");
}

}  // namespace magsq
