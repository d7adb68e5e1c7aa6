#include "thinfilm/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace thinfilm {

void validate(const Equilibrium& eq) {
  if (!(eq.f_star > 0.0) || !(eq.g_star > 0.0)) throw DomainError("equilibrium heights must be positive");
  if (!(eq.gamma_star >= 0.0)) throw DomainError("equilibrium surfactant concentration must be >= 0");
}

namespace {

BInputs<double> gravity_inputs(const Equilibrium& eq, const PhysParams& params, const SurfactantLaw& law) {
  validate(eq);
  validate(params);
  const Coefficients c = coefficients(params, ModelKind::Gravity);
  return {eq.f_star, eq.g_star, eq.gamma_star, params.mu, c.r, c.s, params.d_surf, law.dsigma(eq.gamma_star)};
}

Eigen::Matrix3d to_eigen(const Sym3<double>& b) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = b[i][j];
  return m;
}

Certificate certify(const BInputs<double>& in) {
  Certificate cert;
  for (double z : z_grid()) {
    const auto b = b_matrix_entries(in, z);
    const auto m = leading_minors(b);
    cert.b = to_eigen(b);
    cert.minors = Eigen::Vector3d(m[0], m[1], m[2]);
    if (m[0] > 0.0 && m[1] > 0.0 && m[2] > 0.0) {
      cert.z = z;
      break;
    }
  }
  return cert;
}

}  // namespace

Eigen::Matrix3d build_b_matrix(const Equilibrium& eq, const PhysParams& params, const SurfactantLaw& law, double z) {
  if (!(z > 0.0)) throw DomainError("build_b_matrix: z must be positive");
  return to_eigen(b_matrix_entries(gravity_inputs(eq, params, law), z));
}

std::vector<double> z_grid() {
  std::vector<double> z(kZGridPoints);
  const double lo = std::log10(kZGridMin);
  const double span = std::log10(kZGridMax) - lo;
  for (std::size_t i = 0; i < kZGridPoints; ++i) {
    z[i] = std::pow(10.0, lo + span * static_cast<double>(i) / static_cast<double>(kZGridPoints - 1));
  }
  return z;
}

Certificate certify_positive_definite(const Equilibrium& eq, const PhysParams& params, const SurfactantLaw& law) {
  return certify(gravity_inputs(eq, params, law));
}

double gamma_threshold(double f_star, double g_star, const PhysParams& params, const SurfactantLaw& law,
                       double gamma_hi) {
  if (!(gamma_hi > 0.0)) throw DomainError("gamma_threshold: upper bound must be positive");
  auto certified = [&](double gamma) {
    return certify_positive_definite({f_star, g_star, gamma}, params, law).z.has_value();
  };
  if (!certified(0.0)) {
    throw AssumptionViolation("no positive-definite certificate at Gamma* = 0; check the gravity assumptions");
  }
  if (certified(gamma_hi)) return gamma_hi;
  double lo = 0.0, hi = gamma_hi;
  for (int it = 0; it < kThresholdBisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    (certified(mid) ? lo : hi) = mid;
  }
  return lo;
}

Eigen::MatrixXd dense_linearization(const Equilibrium& eq, const Grid& grid, const Model& model) {
  validate(eq);
  const FilmState flat = FilmState::flat(grid.size(), eq.f_star, eq.g_star, eq.gamma_star);
  const BandedMatrix m = FrozenOperator(flat, grid, model).assemble();
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::size_t jlo = i > m.lower() ? i - m.lower() : 0;
    const std::size_t jhi = std::min(m.size() - 1, i + m.upper());
    for (std::size_t j = jlo; j <= jhi; ++j) {
      dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    }
  }
  return dense;
}

namespace {

// Orthonormal basis of the mean-zero subspace of each field, lifted to the
// interleaved unknowns (3N x 3(N-1)).
Eigen::MatrixXd mean_zero_basis(std::size_t cells) {
  const auto n = static_cast<Eigen::Index>(cells);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd(Eigen::VectorXd::Ones(n)));
  const Eigen::MatrixXd qfull = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd q = qfull.rightCols(n - 1);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(3 * n, 3 * (n - 1));
  for (Eigen::Index c = 0; c < 3; ++c)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < n - 1; ++k) p(3 * i + c, c * (n - 1) + k) = q(i, k);
  return p;
}

Eigen::EigenSolver<Eigen::MatrixXd> restricted_spectrum(const Equilibrium& eq, const Grid& grid, const Model& model,
                                                        const Eigen::MatrixXd& p, bool vectors) {
  const Eigen::MatrixXd m = dense_linearization(eq, grid, model);
  const Eigen::MatrixXd restricted = -(p.transpose() * m * p);
  Eigen::EigenSolver<Eigen::MatrixXd> es(restricted, vectors);
  if (es.info() != Eigen::Success) {
    throw NumericalFailure("spectral_abscissa: eigenvalue iteration did not converge (size " +
                           std::to_string(restricted.rows()) + ")");
  }
  return es;
}

}  // namespace

double spectral_abscissa(const Equilibrium& eq, const Grid& grid, const Model& model) {
  const Eigen::MatrixXd p = mean_zero_basis(grid.size());
  return restricted_spectrum(eq, grid, model, p, false).eigenvalues().real().maxCoeff();
}

double excited_decay_rate(const Equilibrium& eq, const Grid& grid, const Model& model,
                          std::span<const double> perturbation, double rel_tol) {
  const auto n3 = static_cast<Eigen::Index>(3 * grid.size());
  if (static_cast<Eigen::Index>(perturbation.size()) != n3) {
    throw DomainError("excited_decay_rate: perturbation must hold 3N packed values");
  }
  const Eigen::MatrixXd p = mean_zero_basis(grid.size());
  const auto es = restricted_spectrum(eq, grid, model, p, true);
  const Eigen::VectorXd w = p.transpose() * Eigen::Map<const Eigen::VectorXd>(perturbation.data(), n3);
  const double wn = w.norm();
  if (!(wn > 0.0)) throw DomainError("excited_decay_rate: perturbation has no mean-zero part");

  const Eigen::MatrixXcd v = es.eigenvectors();
  const Eigen::VectorXcd c = v.partialPivLu().solve(w.cast<Complex>());
  double rate = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    if (std::abs(c(k)) * v.col(k).norm() > rel_tol * wn) rate = std::min(rate, -es.eigenvalues()(k).real());
  }
  return rate;
}

double spectral_abscissa(const Equilibrium& eq, const Grid& grid, const PhysParams& params, const SurfactantLaw& law,
                         ModelKind kind) {
  return spectral_abscissa(eq, grid, Model(params, law, kind));
}

EquilibriumReport analyze_equilibrium(const Equilibrium& eq, const Grid& grid, const Model& model) {
  if (model.kind() != ModelKind::Gravity) {
    throw DomainError("analyze_equilibrium: the certificate applies to the gravity model only");
  }
  EquilibriumReport rep;
  rep.eq = eq;
  const Certificate cert = certify_positive_definite(eq, model.params(), model.law());
  rep.z_admissible = cert.z;
  rep.b_matrix = cert.b;
  rep.minors = cert.minors;
  rep.gamma_threshold = gamma_threshold(eq.f_star, eq.g_star, model.params(), model.law());
  rep.spectral_abscissa = spectral_abscissa(eq, grid, model);
  rep.omega0 = -rep.spectral_abscissa;
  return rep;
}

Eigen::Matrix2d capillary_symbol(double f_star, double g_star, const PhysParams& params) {
  if (!(f_star > 0.0) || !(g_star > 0.0)) throw DomainError("ls_check: heights must be positive");
  validate(params);
  const Coefficients c = coefficients(params, ModelKind::Capillary);
  const Mobility a = mobility({f_star, g_star, 0.0}, params.mu, c.r, c.s, params.d_surf, 0.0);
  return a.topLeftCorner<2, 2>();
}

namespace {

struct RootSet {
  std::array<Complex, 8> roots;
  int n_decaying = 0;
  int n_growing = 0;
  double det_mag = 0.0;
  double det_scaled = 0.0;
};

// Fourth roots of lambda E for both E; growing roots go into the odd-power matrix.
RootSet roots_for(Complex lambda, Complex e_plus, Complex e_minus) {
  RootSet rs;
  const Complex i(0.0, 1.0);
  std::vector<Complex> growing;
  int slot = 0;
  for (Complex e : {e_plus, e_minus}) {
    const Complex q = std::pow(lambda * e, 0.25);
    for (Complex r : {q, -q, -i * q, i * q}) {
      rs.roots[static_cast<std::size_t>(slot++)] = r;
      const double margin = 1e-12 * std::abs(r);
      if (r.real() < -margin) {
        ++rs.n_decaying;
      } else if (r.real() > margin) {
        ++rs.n_growing;
        growing.push_back(r);
      }
    }
  }
  if (growing.size() != 4) return rs;

  Eigen::Matrix4cd v;
  double scale = 1.0;
  for (int r = 0; r < 4; ++r) {
    const Complex l = growing[static_cast<std::size_t>(r)];
    const Complex l2 = l * l;
    v(r, 0) = l;
    v(r, 1) = l * l2;
    v(r, 2) = l * l2 * l2;
    v(r, 3) = l * l2 * l2 * l2;
    scale *= std::abs(l);
    for (int s = r + 1; s < 4; ++s) scale *= std::norm(l) + std::norm(growing[static_cast<std::size_t>(s)]);
  }
  rs.det_mag = std::abs(v.determinant());
  rs.det_scaled = scale > 0.0 ? rs.det_mag / scale : 0.0;
  return rs;
}

}  // namespace

LSReport ls_check_symbol(const Eigen::Matrix2d& neg_a_tilde, const LSOptions& opts) {
  if (!neg_a_tilde.allFinite()) throw DegenerateSymbol("ls_check: symbol has non-finite entries");
  const double det = neg_a_tilde.determinant();
  const double size = neg_a_tilde.cwiseAbs().maxCoeff();
  if (!(std::abs(det) > 1e-14 * size * size)) {
    throw DegenerateSymbol("ls_check: -a_tilde is singular (det = " + std::to_string(det) + ")");
  }

  LSReport rep;
  rep.a_tilde = -neg_a_tilde;
  rep.a_inv = neg_a_tilde.inverse();
  const double a11 = rep.a_inv(0, 0), a12 = rep.a_inv(0, 1), a21 = rep.a_inv(1, 0), a22 = rep.a_inv(1, 1);
  const double tr = a11 + a22;
  const double dt = a11 * a22 - a12 * a21;
  const double disc = (a11 - a22) * (a11 - a22) + 4.0 * a12 * a21;
  rep.complex_e = disc < 0.0;

  // E = 1/2 (-tr -+ sqrt(disc)); take the larger-magnitude root directly and
  // recover the other from E+ E- = det to avoid cancellation.
  const Complex sq = std::sqrt(Complex(disc, 0.0));
  if (tr >= 0.0) {
    rep.e_minus = 0.5 * (-tr - sq);
    rep.e_plus = Complex(dt, 0.0) / rep.e_minus;
  } else {
    rep.e_plus = 0.5 * (-tr + sq);
    rep.e_minus = Complex(dt, 0.0) / rep.e_plus;
  }
  const double emax = std::max(std::abs(rep.e_plus), std::abs(rep.e_minus));
  rep.distinct = std::abs(rep.e_plus - rep.e_minus) > 1e-12 * emax;

  const RootSet base = roots_for(Complex(1.0, 0.0), rep.e_plus, rep.e_minus);
  rep.roots = base.roots;
  rep.n_decaying = base.n_decaying;
  rep.det_mag = base.det_mag;
  rep.det_scaled = base.det_scaled;
  bool ok = base.n_decaying == 4 && base.n_growing == 4 && base.det_scaled > opts.det_tol;
  rep.worst_det_scaled = base.det_scaled;

  if (opts.sample_lambda) {
    // 16 points on the closed right half of the unit circle.
    constexpr int kSamples = 16;
    for (int k = 0; k < kSamples; ++k) {
      const double phi = -std::numbers::pi / 2 + std::numbers::pi * k / (kSamples - 1);
      const RootSet rs = roots_for(std::polar(1.0, phi), rep.e_plus, rep.e_minus);
      ok = ok && rs.n_decaying == 4 && rs.n_growing == 4 && rs.det_scaled > opts.det_tol;
      rep.worst_det_scaled = std::min(rep.worst_det_scaled, rs.det_scaled);
    }
    rep.lambda_samples = 1 + kSamples;
  }
  rep.pass = ok && rep.distinct;
  return rep;
}

LSReport ls_check(double f_star, double g_star, const PhysParams& params, const LSOptions& opts) {
  return ls_check_symbol(-capillary_symbol(f_star, g_star, params), opts);
}

}  // namespace thinfilm
