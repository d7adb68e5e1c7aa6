#include "thinfilm/discretization.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

namespace thinfilm {

namespace {

// Cell index after even reflection about the walls; valid for -2 <= m <= N+1.
std::size_t reflect(long m, std::size_t n) {
  const long nn = static_cast<long>(n);
  if (m < 0) return static_cast<std::size_t>(-m - 1);
  if (m >= nn) return static_cast<std::size_t>(2 * nn - 1 - m);
  return static_cast<std::size_t>(m);
}

struct StencilTap {
  std::size_t cell;
  double weight;
};

// Taps of dx^order at interior face j (1 <= j <= N-1), reflection already folded in.
std::vector<StencilTap> face_stencil(std::size_t j, std::size_t n, double h, int order) {
  const long jj = static_cast<long>(j);
  if (order == 1) {
    const double c = 1.0 / h;
    return {{reflect(jj - 1, n), -c}, {reflect(jj, n), c}};
  }
  const double c = 1.0 / (h * h * h);
  return {{reflect(jj - 2, n), -c}, {reflect(jj - 1, n), 3.0 * c}, {reflect(jj, n), -3.0 * c},
          {reflect(jj + 1, n), c}};
}

double face_derivative(std::span<const double> w, std::size_t j, double h, int order) {
  const std::size_t n = w.size();
  const long jj = static_cast<long>(j);
  if (order == 1) return (w[j] - w[j - 1]) / h;
  // grouped so that constants give exactly zero
  return ((w[reflect(jj + 1, n)] - w[reflect(jj - 2, n)]) - 3.0 * (w[reflect(jj, n)] - w[reflect(jj - 1, n)])) /
         (h * h * h);
}

}  // namespace

Grid::Grid(std::size_t n_cells, double length) : n_(n_cells), length_(length), h_(0.0) {
  if (n_cells < kMinCells) {
    throw GridTooSmall("grid needs at least " + std::to_string(kMinCells) + " cells, got " +
                       std::to_string(n_cells));
  }
  if (!(length > 0.0)) throw DomainError("grid length must be positive");
  h_ = length / static_cast<double>(n_cells);
}

std::vector<double> Grid::centers() const {
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = center(i);
  return x;
}

FilmState::FilmState(double time, std::vector<double> f_, std::vector<double> g_, std::vector<double> gamma_)
    : t(time), f(std::move(f_)), g(std::move(g_)), gamma(std::move(gamma_)) {}

FilmState FilmState::flat(std::size_t n, double f_star, double g_star, double gamma_star, double time) {
  return FilmState(time, std::vector<double>(n, f_star), std::vector<double>(n, g_star),
                   std::vector<double>(n, gamma_star));
}

const std::vector<double>& FilmState::field(Field which) const {
  switch (which) {
    case Field::F: return f;
    case Field::G: return g;
    case Field::Gamma: return gamma;
  }
  return f;
}

std::vector<double>& FilmState::field(Field which) {
  return const_cast<std::vector<double>&>(std::as_const(*this).field(which));
}

std::vector<double> FilmState::pack() const {
  std::vector<double> out(3 * size());
  for (std::size_t i = 0; i < size(); ++i) {
    out[3 * i] = f[i];
    out[3 * i + 1] = g[i];
    out[3 * i + 2] = gamma[i];
  }
  return out;
}

FilmState FilmState::unpack(std::span<const double> packed, double time) {
  const std::size_t n = packed.size() / 3;
  FilmState s(time, std::vector<double>(n), std::vector<double>(n), std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    s.f[i] = packed[3 * i];
    s.g[i] = packed[3 * i + 1];
    s.gamma[i] = packed[3 * i + 2];
  }
  return s;
}

void check_state(const FilmState& state, const Grid& grid) {
  const std::size_t n = grid.size();
  if (state.f.size() != n || state.g.size() != n || state.gamma.size() != n) {
    throw DomainError("state arrays do not match the grid size " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto u = state.at(i);
    if (!std::isfinite(u.f) || !std::isfinite(u.g) || !std::isfinite(u.gamma)) {
      throw DomainError("non-finite state value in cell " + std::to_string(i));
    }
    if (u.f < 0.0 || u.g < 0.0 || u.gamma < 0.0) {
      throw DomainError("negative state value in cell " + std::to_string(i));
    }
  }
}

std::vector<double> ghost_extend(std::span<const double> w) {
  const std::size_t n = w.size();
  std::vector<double> out(n + 4);
  for (long m = -2; m < static_cast<long>(n) + 2; ++m) out[static_cast<std::size_t>(m + 2)] = w[reflect(m, n)];
  return out;
}

FaceGradients face_gradients(const FilmState& state, const Grid& grid, ModelKind kind) {
  const std::size_t n = grid.size();
  if (n < kMinCells) throw GridTooSmall("face_gradients: grid too small");
  if (state.size() != n) throw DomainError("face_gradients: state does not match grid");
  const int k = derivative_order(kind);
  const double h = grid.h();
  FaceGradients out{std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0),
                    std::vector<double>(n + 1, 0.0)};
  for (std::size_t j = 1; j < n; ++j) {
    out.dkf[j] = face_derivative(state.f, j, h, k);
    out.dkg[j] = face_derivative(state.g, j, h, k);
    out.dgamma[j] = face_derivative(state.gamma, j, h, 1);
  }
  return out;
}

std::vector<PointState> face_states(const FilmState& state) {
  const std::size_t n = state.size();
  std::vector<PointState> out(n + 1);
  out[0] = state.at(0);
  out[n] = state.at(n - 1);
  for (std::size_t j = 1; j < n; ++j) {
    out[j] = {0.5 * (state.f[j - 1] + state.f[j]), 0.5 * (state.g[j - 1] + state.g[j]),
              0.5 * (state.gamma[j - 1] + state.gamma[j])};
  }
  return out;
}

std::vector<Flux> face_fluxes(const FilmState& state, const Grid& grid, const Model& model) {
  check_state(state, grid);
  const std::size_t n = grid.size();
  const auto grads = face_gradients(state, grid, model.kind());
  const auto faces = face_states(state);
  std::vector<Flux> flux(n + 1, Flux::Zero());
  for (std::size_t j = 1; j < n; ++j) {
    flux[j] = pointwise_flux(faces[j], {grads.dkf[j], grads.dkg[j], grads.dgamma[j]}, model);
  }
  return flux;
}

Rates divergence_of_flux(const FilmState& state, const Grid& grid, const Model& model) {
  const std::size_t n = grid.size();
  const auto flux = face_fluxes(state, grid, model);
  const double h = grid.h();
  Rates r{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const Flux d = (flux[i + 1] - flux[i]) / h;
    r.df_dt[i] = d[0];
    r.dg_dt[i] = d[1];
    r.dgamma_dt[i] = d[2];
  }
  return r;
}

FrozenOperator::FrozenOperator(const FilmState& state, const Grid& grid, const Model& model)
    : n_(grid.size()), h_(grid.h()), order_(model.order()), mob_(grid.size() + 1, Mobility::Zero()) {
  check_state(state, grid);
  const auto faces = face_states(state);
  for (std::size_t j = 1; j < n_; ++j) mob_[j] = mobility(faces[j], model);
}

std::vector<double> FrozenOperator::apply(std::span<const double> w) const {
  if (w.size() != 3 * n_) throw DomainError("FrozenOperator::apply: wrong vector length");
  const FilmState ws = FilmState::unpack(w, 0.0);
  std::vector<Flux> flux(n_ + 1, Flux::Zero());
  for (std::size_t j = 1; j < n_; ++j) {
    const Eigen::Vector3d d(face_derivative(ws.f, j, h_, order_), face_derivative(ws.g, j, h_, order_),
                            face_derivative(ws.gamma, j, h_, 1));
    flux[j] = mob_[j] * d;
  }
  std::vector<double> out(3 * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const Flux d = -(flux[i + 1] - flux[i]) / h_;
    for (int c = 0; c < 3; ++c) out[3 * i + static_cast<std::size_t>(c)] = d[c];
  }
  return out;
}

BandedMatrix FrozenOperator::assemble() const {
  const std::size_t blocks = order_ == 1 ? 1 : 2;
  const std::size_t band = 3 * blocks + 2;
  BandedMatrix m(3 * n_, band, band);
  for (std::size_t j = 1; j < n_; ++j) {
    const auto high = face_stencil(j, n_, h_, order_);
    const auto low = face_stencil(j, n_, h_, 1);
    const Mobility& a = mob_[j];
    // Face j adds -F_j / h to cell j-1 and +F_j / h to cell j.
    for (std::size_t row_cell : {j - 1, j}) {
      const double sign = row_cell == j ? 1.0 : -1.0;
      for (int c = 0; c < 3; ++c) {
        const std::size_t row = 3 * row_cell + static_cast<std::size_t>(c);
        for (int cc = 0; cc < 3; ++cc) {
          const auto& taps = cc == 2 ? low : high;
          for (const auto& tap : taps) {
            m.at(row, 3 * tap.cell + static_cast<std::size_t>(cc)) += sign * a(c, cc) * tap.weight / h_;
          }
        }
      }
    }
  }
  return m;
}

SpatialOperator assemble_linearized(const FilmState& state, const Grid& grid, const Model& model) {
  return FrozenOperator(state, grid, model).assemble();
}

}  // namespace thinfilm
