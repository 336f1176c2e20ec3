#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "hypermoment/assembly.hpp"
#include "hypermoment/spectral.hpp"

namespace hypermoment {

enum class BoundaryKind { copy, periodic };
enum class SchemeKind { regularized, grad };

inline const char* to_string(BoundaryKind b) {
  return b == BoundaryKind::copy ? "copy" : "periodic";
}

inline const char* to_string(SchemeKind k) {
  return k == SchemeKind::regularized ? "regularized" : "grad";
}

template <typename Scalar>
struct SimConfig {
  int D = 2;
  int M = 3;
  int cells = 100;
  Scalar x_lo = Scalar(0);
  Scalar x_hi = Scalar(1);
  Scalar cfl = Scalar(0.5);
  Scalar t_end = Scalar(0.1);
  BoundaryKind boundary = BoundaryKind::copy;
  SchemeKind kind = SchemeKind::regularized;
  int snapshot_interval = 0;  // 0: record only the first and last frame
  std::vector<MomentState<Scalar>> initial;
};

template <typename Scalar>
Scalar cell_width(const SimConfig<Scalar>& config) {
  return (config.x_hi - config.x_lo) / Scalar(config.cells);
}

template <typename Scalar>
Scalar cell_center(const SimConfig<Scalar>& config, int i) {
  return config.x_lo + (Scalar(i) + Scalar(0.5)) * cell_width(config);
}

template <typename Scalar>
void set_riemann_data(SimConfig<Scalar>& config, const MomentState<Scalar>& left,
                      const MomentState<Scalar>& right) {
  Scalar mid = (config.x_lo + config.x_hi) / Scalar(2);
  config.initial.clear();
  config.initial.reserve(config.cells);
  for (int i = 0; i < config.cells; ++i)
    config.initial.push_back(cell_center(config, i) < mid ? left : right);
}

template <typename Scalar>
void validate_config(const SimConfig<Scalar>& config) {
  if (config.cells < 4) throw ValidationError("need at least four cells");
  if (!(config.cfl > Scalar(0)) || config.cfl > Scalar(1))
    throw ValidationError("CFL number must lie in (0, 1]");
  if (!(config.x_hi > config.x_lo))
    throw ValidationError("domain must have positive length");
  if (!(config.t_end >= Scalar(0)))
    throw ValidationError("end time must be nonnegative");
  if (static_cast<int>(config.initial.size()) != config.cells)
    throw ValidationError("initial data must provide one state per cell");
  for (const auto& s : config.initial) {
    if (s.D != config.D || s.M != config.M)
      throw ValidationError("initial states must share the configured D and M");
    detail::validate_admissible(s.D, s.M, s.rho, s.theta);
  }
}

template <typename Scalar>
struct SnapshotSeries {
  std::vector<Scalar> times;
  std::vector<std::vector<MomentState<Scalar>>> frames;
  // One row per recorded time: cell-width weighted sums of F_alpha, |alpha| < M.
  std::vector<DenseVector<Scalar>> conserved_totals;
  int steps = 0;
};

template <typename Scalar>
Scalar max_signal_speed(const std::vector<MomentState<Scalar>>& cells) {
  if (cells.empty()) throw ValidationError("no cells");
  Scalar cmax = hermite_roots<Scalar>(cells[0].M + 1).back();
  Scalar speed = Scalar(0);
  for (const auto& s : cells) {
    detail::validate_admissible(s.D, s.M, s.rho, s.theta);
    speed = std::max(speed, std::abs(s.u(0)) + cmax * std::sqrt(s.theta));
  }
  return speed;
}

template <typename Scalar>
Scalar stable_dt(const std::vector<MomentState<Scalar>>& cells, Scalar dx,
                 Scalar cfl) {
  return cfl * dx / max_signal_speed(cells);
}

namespace detail {

template <typename Scalar>
DenseVector<Scalar> conserved_totals_of(
    const std::vector<MomentState<Scalar>>& cells, Scalar dx, int low) {
  DenseVector<Scalar> total = DenseVector<Scalar>::Zero(low);
  for (const auto& s : cells)
    total += dx * to_fluid_moments(s).head(low);
  return total;
}

template <typename Scalar>
[[noreturn]] void abort_simulation(int cell, Scalar time, const std::string& why) {
  std::ostringstream msg;
  msg << "simulation aborted at t = " << time << ", cell " << cell << ": "
      << why;
  throw NumericError(msg.str());
}

}  // namespace detail

// First-order hybrid update: the conservative block |alpha| < M advances in
// the raw moments F with an HLL two-wave flux (telescoping, hence exactly
// conservative), the top-order coefficients advance in quasi-linear form
// with central gradients and Rusanov dissipation, and the cell states are
// rebuilt from the mixed representation after every step.
template <typename Scalar>
SnapshotSeries<Scalar> simulate(const SimConfig<Scalar>& config) {
  validate_config(config);
  const int D = config.D, M = config.M, nc = config.cells;
  const auto& table = index_table(D, M);
  const int n = static_cast<int>(table.size());
  const int low = static_cast<int>(binomial(M - 1 + D, D));
  const Scalar dx = cell_width(config);
  const Scalar cmax = hermite_roots<Scalar>(M + 1).back();
  const bool grad_mode = config.kind == SchemeKind::grad;

  // Flux positions: slot of alpha + e1 and the factor alpha_1 + 1 per
  // conservative slot.
  std::vector<int> up(low);
  std::vector<Scalar> fac(low);
  for (int pos = 0; pos < low; ++pos) {
    const MultiIndex& a = table.index(pos);
    up[pos] = static_cast<int>(table.position(shifted(a, 0, 1)));
    fac[pos] = Scalar(a[0] + 1);
  }

  std::vector<MomentState<Scalar>> cells = config.initial;
  SnapshotSeries<Scalar> out;
  auto record = [&](Scalar time) {
    out.times.push_back(time);
    out.frames.push_back(cells);
    out.conserved_totals.push_back(detail::conserved_totals_of(cells, dx, low));
  };
  record(Scalar(0));

  auto wrap = [&](int i) {
    if (config.boundary == BoundaryKind::periodic)
      return (i % nc + nc) % nc;
    return std::min(std::max(i, 0), nc - 1);
  };

  Scalar time = Scalar(0);
  int step = 0;
  while (time < config.t_end) {
    // Per-cell signal bounds; grad mode takes them from the numeric
    // spectrum and aborts on complex speeds.
    std::vector<Scalar> lo(nc), hi(nc);
    std::vector<DenseMatrix<Scalar>> jac(nc);
    for (int i = 0; i < nc; ++i) {
      const auto& s = cells[i];
      jac[i] = flux_jacobian(s, 1, !grad_mode);
      if (grad_mode) {
        auto report = hyperbolicity_report(jac[i]);
        if (!report.hyperbolic) {
          std::ostringstream why;
          why << "complex characteristic speed in grad closure";
          if (!report.offending.empty())
            why << ": " << report.offending.front().real() << " + "
                << report.offending.front().imag() << "i";
          detail::abort_simulation(i, time, why.str());
        }
        Eigen::EigenSolver<DenseMatrix<Scalar>> es(jac[i], false);
        lo[i] = es.eigenvalues().real().minCoeff();
        hi[i] = es.eigenvalues().real().maxCoeff();
      } else {
        Scalar span = cmax * std::sqrt(s.theta);
        lo[i] = s.u(0) - span;
        hi[i] = s.u(0) + span;
      }
    }
    Scalar speed = Scalar(0);
    for (int i = 0; i < nc; ++i)
      speed = std::max({speed, std::abs(lo[i]), std::abs(hi[i])});
    if (!(speed > Scalar(0))) speed = Scalar(1e-300);
    Scalar dt = config.cfl * dx / speed;
    bool last = time + dt >= config.t_end;
    if (last) dt = config.t_end - time;
    if (!(dt > Scalar(0))) break;

    std::vector<DenseVector<Scalar>> F(nc), w(nc);
    for (int i = 0; i < nc; ++i) {
      F[i] = to_fluid_moments(cells[i]);
      w[i] = to_w_vector(cells[i]);
    }

    // HLL interface fluxes for the conservative block.
    auto phi = [&](const DenseVector<Scalar>& Fi, int pos) {
      return fac[pos] * Fi(up[pos]);
    };
    std::vector<DenseVector<Scalar>> flux(nc + 1, DenseVector<Scalar>(low));
    for (int j = 0; j <= nc; ++j) {
      int il = wrap(j - 1), ir = wrap(j);
      Scalar SL = std::min(lo[il], lo[ir]);
      Scalar SR = std::max(hi[il], hi[ir]);
      for (int pos = 0; pos < low; ++pos) {
        Scalar fl = phi(F[il], pos), fr = phi(F[ir], pos);
        if (SL >= Scalar(0))
          flux[j](pos) = fl;
        else if (SR <= Scalar(0))
          flux[j](pos) = fr;
        else
          flux[j](pos) = (SR * fl - SL * fr +
                          SL * SR * (F[ir](pos) - F[il](pos))) /
                         (SR - SL);
      }
    }

    Scalar dtdx = dt / dx;
    for (int i = 0; i < nc; ++i) {
      DenseVector<Scalar> Fnew = F[i];
      Fnew.head(low) -= dtdx * (flux[i + 1] - flux[i]).eval();

      // Quasi-linear Rusanov update for the top-order coefficients.
      const DenseVector<Scalar>& wl = w[wrap(i - 1)];
      const DenseVector<Scalar>& wr = w[wrap(i + 1)];
      Scalar damp = std::max({std::abs(lo[i]), std::abs(hi[i]),
                              std::abs(lo[wrap(i - 1)]), std::abs(hi[wrap(i - 1)]),
                              std::abs(lo[wrap(i + 1)]), std::abs(hi[wrap(i + 1)])});
      DenseVector<Scalar> ftop(n - low);
      for (int pos = low; pos < n; ++pos) {
        Scalar advect = jac[i].row(pos).dot(wr - wl) / (Scalar(2) * dx);
        Scalar diffuse = damp *
                         (wr(pos) - Scalar(2) * w[i](pos) + wl(pos)) /
                         (Scalar(2) * dx);
        ftop(pos - low) = w[i](pos) + dt * (diffuse - advect);
      }

      bool unchanged = (Fnew.array() == F[i].array()).all();
      for (int pos = low; unchanged && pos < n; ++pos)
        unchanged = ftop(pos - low) == w[i](pos);
      if (unchanged) continue;

      try {
        cells[i] = from_fluid_moments(D, M, Fnew);
      } catch (const ValidationError& err) {
        detail::abort_simulation(i, time + dt, err.what());
      }
      for (int pos = low; pos < n; ++pos)
        cells[i].f(pos - D - 1) = ftop(pos - low);
    }

    time = last ? config.t_end : time + dt;
    ++step;
    bool snap = config.snapshot_interval > 0 &&
                step % config.snapshot_interval == 0;
    if (snap && !last) record(time);
    if (last || time >= config.t_end) {
      record(time);
      break;
    }
  }
  out.steps = step;
  return out;
}

}  // namespace hypermoment
