#pragma once

// Cell-centred finite-volume discretisation on (0, L) with no-flux boundaries.
//
// Cells i = 0..N-1 have centres x_i = (i + 1/2) h. Face j = 0..N sits at x = j h;
// face j separates cells j-1 and j. Faces 0 and N are the walls, where every
// derivative and therefore every flux vanishes. Interior faces use
//
//   dx w   ~ (w_j - w_{j-1}) / h
//   dx^3 w ~ (w_{j+1} - 3 w_j + 3 w_{j-1} - w_{j-2}) / h^3
//
// with two ghost cells per side filled by even reflection, which enforces
// dx w = dx^3 w = 0 at the walls.

#include <cstddef>
#include <span>
#include <vector>

#include "thinfilm/banded.hpp"
#include "thinfilm/model.hpp"

namespace thinfilm {

inline constexpr std::size_t kMinCells = 8;

class Grid {
 public:
  /// Throws GridTooSmall for n_cells < 8 and DomainError for length <= 0.
  Grid(std::size_t n_cells, double length);

  std::size_t size() const { return n_; }
  double length() const { return length_; }
  double h() const { return h_; }
  double center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * h_; }
  double face(std::size_t j) const { return static_cast<double>(j) * h_; }
  std::vector<double> centers() const;

 private:
  std::size_t n_;
  double length_;
  double h_;
};

enum class Field { F = 0, G = 1, Gamma = 2 };

struct FilmState {
  double t = 0.0;
  std::vector<double> f, g, gamma;

  FilmState() = default;
  FilmState(double time, std::vector<double> f_, std::vector<double> g_, std::vector<double> gamma_);

  /// Flat state (f*, g*, G*) on n cells.
  static FilmState flat(std::size_t n, double f_star, double g_star, double gamma_star, double time = 0.0);

  std::size_t size() const { return f.size(); }
  const std::vector<double>& field(Field which) const;
  std::vector<double>& field(Field which);
  PointState at(std::size_t i) const { return {f[i], g[i], gamma[i]}; }

  /// Interleaved (f_0, g_0, G_0, f_1, ...), the unknown ordering of SpatialOperator.
  std::vector<double> pack() const;
  static FilmState unpack(std::span<const double> packed, double time);
};

/// Throws DomainError on mismatched lengths or negative or non-finite values.
void check_state(const FilmState& state, const Grid& grid);

/// Two ghost cells on each side by even reflection: [w1, w0 | w0 .. w_{N-1} | w_{N-1}, w_{N-2}].
std::vector<double> ghost_extend(std::span<const double> w);

/// Derivatives at the N+1 faces; entries 0 and N are exactly zero.
struct FaceGradients {
  std::vector<double> dkf, dkg, dgamma;
};

FaceGradients face_gradients(const FilmState& state, const Grid& grid, ModelKind kind);

/// Cell-averaged states at the N+1 faces (arithmetic mean; walls copy the adjacent cell).
std::vector<PointState> face_states(const FilmState& state);

/// Face fluxes F_{j} for j = 0..N; F_0 = F_N = 0.
std::vector<Flux> face_fluxes(const FilmState& state, const Grid& grid, const Model& model);

struct Rates {
  std::vector<double> df_dt, dg_dt, dgamma_dt;
};

/// (F_{i+1} - F_i) / h per cell: the right-hand side of the evolution system.
Rates divergence_of_flux(const FilmState& state, const Grid& grid, const Model& model);

/// Mobility frozen at the faces of a reference state. Applying it to a
/// perturbation w gives the linear operator w -> -d/dx( a(u) (dx^k w_1, dx^k w_2, dx w_3) ).
class FrozenOperator {
 public:
  FrozenOperator(const FilmState& state, const Grid& grid, const Model& model);

  std::size_t cells() const { return n_; }
  int order() const { return order_; }
  const std::vector<Mobility>& face_mobility() const { return mob_; }

  /// M w for a packed perturbation w (length 3N).
  std::vector<double> apply(std::span<const double> w) const;

  /// Banded form of M; block bandwidth 1 (k = 1) or 2 (k = 3), unknowns interleaved.
  BandedMatrix assemble() const;

 private:
  std::size_t n_;
  double h_;
  int order_;
  std::vector<Mobility> mob_;  // faces 1..N-1 used
};

using SpatialOperator = BandedMatrix;

SpatialOperator assemble_linearized(const FilmState& state, const Grid& grid, const Model& model);

}  // namespace thinfilm
