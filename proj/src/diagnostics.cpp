#include "thinfilm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace thinfilm {

double mass(std::span<const double> w, const Grid& grid) {
  return grid.h() * std::accumulate(w.begin(), w.end(), 0.0);
}

double energy(const FilmState& state, const Grid& grid, const Model& model) {
  check_state(state, grid);
  const double mu = model.params().mu;
  const double r = model.r();
  const double s = model.s();
  const double h = grid.h();
  const std::size_t n = grid.size();
  const auto& law = model.law();

  double surf = 0.0;
  for (std::size_t i = 0; i < n; ++i) surf += mu * law.phi(state.gamma[i]);

  double film = 0.0;
  if (model.kind() == ModelKind::Gravity) {
    for (std::size_t i = 0; i < n; ++i) {
      const double f = state.f[i];
      const double fg = f + state.g[i];
      film += 0.5 * (r * f * f + s * mu * fg * fg);
    }
  } else {
    for (std::size_t j = 1; j < n; ++j) {
      const double df = (state.f[j] - state.f[j - 1]) / h;
      const double dfg = (state.f[j] + state.g[j] - state.f[j - 1] - state.g[j - 1]) / h;
      film += -0.5 * (r * df * df + s * mu * dfg * dfg);
    }
  }
  return h * (film + surf);
}

double dissipation_density(const PointState& u, const PointGradients& d, const Model& model) {
  const double mu = model.params().mu;
  const double r = model.r();
  const double s = model.s();
  const double sqrt3 = std::sqrt(3.0);
  const double f = u.f;
  const double g = u.g;
  const double sx = model.law().dsigma(u.gamma) * d.dgamma;
  const double dsum = d.dkf + d.dkg;

  const double b1 = f * ((r + s * mu) * d.dkf + s * mu * d.dkg) / sqrt3 + 0.5 * sqrt3 * mu * (s * g * dsum - sx);
  const double b2 = s * g * dsum - sx;
  const double b3 = s * g * dsum / sqrt3 - 0.5 * sqrt3 * sx;
  double density = f * b1 * b1 + 0.25 * mu * mu * f * b2 * b2 + g * mu * b3 * b3 + 0.25 * g * mu * sx * sx;
  if (d.dgamma != 0.0) {
    density += mu * model.law().d2phi(u.gamma) * model.params().d_surf * d.dgamma * d.dgamma;
  }
  return density;
}

double dissipation(const FilmState& state, const Grid& grid, const Model& model) {
  check_state(state, grid);
  const auto grads = face_gradients(state, grid, model.kind());
  const auto faces = face_states(state);
  double acc = 0.0;
  for (std::size_t j = 1; j < grid.size(); ++j) {
    acc += dissipation_density(faces[j], {grads.dkf[j], grads.dkg[j], grads.dgamma[j]}, model);
  }
  return grid.h() * acc;
}

SeriesRecord make_record(const FilmState& state, const Grid& grid, const Model& model, const PointState& reference) {
  SeriesRecord rec;
  rec.t = state.t;
  rec.mass_f = mass(state.f, grid);
  rec.mass_g = mass(state.g, grid);
  rec.mass_gamma = mass(state.gamma, grid);
  rec.energy = energy(state, grid, model);
  rec.dissipation = dissipation(state, grid, model);
  auto sup_dev = [](const std::vector<double>& w, double ref) {
    double m = 0.0;
    for (double v : w) m = std::max(m, std::abs(v - ref));
    return m;
  };
  rec.dev_f = sup_dev(state.f, reference.f);
  rec.dev_g = sup_dev(state.g, reference.g);
  rec.dev_gamma = sup_dev(state.gamma, reference.gamma);
  return rec;
}

DecayFit fit_decay(std::span<const double> t, std::span<const double> y, double discard_fraction) {
  if (t.size() != y.size()) throw FitWindowError("fit_decay: t and y differ in length");
  if (t.size() < 10) throw FitWindowError("fit_decay: need at least 10 records, got " + std::to_string(t.size()));
  if (!(discard_fraction >= 0.0 && discard_fraction < 1.0)) {
    throw FitWindowError("fit_decay: discard fraction must lie in [0, 1)");
  }
  const auto first = static_cast<std::size_t>(discard_fraction * static_cast<double>(t.size()));
  const std::size_t m = t.size() - first;
  if (m < 2) throw FitWindowError("fit_decay: window holds fewer than two samples");

  double st = 0.0, sl = 0.0;
  for (std::size_t i = first; i < t.size(); ++i) {
    if (!(y[i] > 0.0) || !std::isfinite(y[i])) {
      throw FitWindowError("fit_decay: non-positive deviation " + std::to_string(y[i]) + " at t = " +
                           std::to_string(t[i]));
    }
    st += t[i];
    sl += std::log(y[i]);
  }
  const double tm = st / static_cast<double>(m);
  const double lm = sl / static_cast<double>(m);
  double stt = 0.0, stl = 0.0;
  for (std::size_t i = first; i < t.size(); ++i) {
    stt += (t[i] - tm) * (t[i] - tm);
    stl += (t[i] - tm) * (std::log(y[i]) - lm);
  }
  if (!(stt > 0.0)) throw FitWindowError("fit_decay: window spans zero time");
  const double slope = stl / stt;
  const double intercept = lm - slope * tm;

  double ss = 0.0;
  for (std::size_t i = first; i < t.size(); ++i) {
    const double e = std::log(y[i]) - (intercept + slope * t[i]);
    ss += e * e;
  }
  DecayFit fit;
  fit.omega = -slope;
  fit.amplitude = std::exp(intercept);
  fit.residual = std::sqrt(ss / static_cast<double>(m));
  fit.t_begin = t[first];
  fit.t_end = t.back();
  fit.samples = m;
  return fit;
}

DecayFit fit_decay(std::span<const SeriesRecord> series, Field field, double discard_fraction) {
  std::vector<double> t, y;
  t.reserve(series.size());
  y.reserve(series.size());
  for (const auto& rec : series) {
    t.push_back(rec.t);
    y.push_back(field == Field::F ? rec.dev_f : field == Field::G ? rec.dev_g : rec.dev_gamma);
  }
  return fit_decay(t, y, discard_fraction);
}

double ColumnKinematics::lower_forcing() const {
  const auto& p = params;
  return p.g1 * fx + p.g2 * p.mu * gx - p.sigma2c * p.mu * (fxxx + gxxx) - p.sigma1c * fxxx;
}

double ColumnKinematics::upper_forcing() const {
  return params.g2 * (fx + gx) - params.sigma2c * (fxxx + gxxx);
}

double ColumnKinematics::u1(double z) const {
  const double shear_top = -upper_forcing() * g + sigma_x;  // dz u2 at z = f
  return -lower_forcing() * (f * z - 0.5 * z * z) + params.mu * shear_top * z;
}

double ColumnKinematics::u2(double z) const {
  const double q = upper_forcing();
  const double mu = params.mu;
  return -q * ((f + g) * z - 0.5 * z * z - 0.5 * f * f - f * g) + sigma_x * (z - f) -
         lower_forcing() * 0.5 * f * f - mu * q * f * g + mu * sigma_x * f;
}

double ColumnKinematics::p2(double z) const {
  return params.g2 * (f + g - z) - params.sigma2c * (fxx + gxx);
}

double ColumnKinematics::p1(double z) const {
  return params.g1 * (f - z) + params.mu * p2(f) - params.sigma1c * fxx;
}

double ColumnKinematics::lower_volume_flux() const {
  const double shear_top = -upper_forcing() * g + sigma_x;
  return -lower_forcing() * f * f * f / 3.0 + params.mu * shear_top * f * f / 2.0;
}

ColumnKinematics column_at(const FilmState& state, const Grid& grid, const Model& model, std::size_t i) {
  const double h = grid.h();
  const auto fe = ghost_extend(state.f);
  const auto ge = ghost_extend(state.g);
  const auto ce = ghost_extend(state.gamma);
  const std::size_t c = i + 2;
  auto d1 = [&](const std::vector<double>& w) { return (w[c + 1] - w[c - 1]) / (2.0 * h); };
  auto d2 = [&](const std::vector<double>& w) { return (w[c + 1] - 2.0 * w[c] + w[c - 1]) / (h * h); };
  auto d3 = [&](const std::vector<double>& w) {
    return (w[c + 2] - 2.0 * w[c + 1] + 2.0 * w[c - 1] - w[c - 2]) / (2.0 * h * h * h);
  };
  ColumnKinematics col{};
  col.f = state.f[i];
  col.g = state.g[i];
  col.fx = d1(fe);
  col.gx = d1(ge);
  col.fxx = d2(fe);
  col.gxx = d2(ge);
  col.fxxx = d3(fe);
  col.gxxx = d3(ge);
  col.sigma_x = model.law().dsigma(state.gamma[i]) * d1(ce);
  col.params = model.params();
  return col;
}

VelocityField reconstruct_velocity(const FilmState& state, const Grid& grid, const Model& model,
                                   std::span<const double> z_samples) {
  check_state(state, grid);
  const std::size_t n = grid.size();
  VelocityField out;
  out.x = grid.centers();
  out.z.assign(z_samples.begin(), z_samples.end());
  out.u.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(z_samples.size()));
  out.p.resizeLike(out.u);
  for (std::size_t i = 0; i < n; ++i) {
    const ColumnKinematics col = column_at(state, grid, model, i);
    for (std::size_t k = 0; k < z_samples.size(); ++k) {
      const double z = z_samples[k];
      if (z < 0.0 || z > col.f + col.g) {
        throw DomainError("reconstruct_velocity: z = " + std::to_string(z) + " outside [0, f+g] in cell " +
                          std::to_string(i));
      }
      const auto ii = static_cast<Eigen::Index>(i);
      const auto kk = static_cast<Eigen::Index>(k);
      const bool lower = z <= col.f;
      out.u(ii, kk) = lower ? col.u1(z) : col.u2(z);
      out.p(ii, kk) = lower ? col.p1(z) : col.p2(z);
    }
  }
  return out;
}

}  // namespace thinfilm
