#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "hypermoment/common.hpp"
#include "hypermoment/hermite.hpp"
#include "hypermoment/multi_index.hpp"

namespace hypermoment {

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Truncated moment state: density, bulk velocity, temperature, and Hermite
// coefficients f_alpha for 2 <= |alpha| <= M stored in ordinal order.
template <typename Scalar>
struct MomentState {
  int D = 0;
  int M = 0;
  Scalar rho = Scalar(0);
  Scalar theta = Scalar(0);
  DenseVector<Scalar> u;
  DenseVector<Scalar> f;  // position(alpha) - (D + 1) for |alpha| >= 2
};

inline int state_size(int D, int M) {
  return static_cast<int>(binomial(M + D, D));
}

// Hermite coefficient of the Grad expansion read at any multi-index:
// rho at grade 0, zero at grade 1, zero outside the table.
template <typename Scalar>
Scalar coeff(const MomentState<Scalar>& s, const MultiIndex& a) {
  int g = 0;
  for (int ai : a) {
    if (ai < 0) return Scalar(0);
    g += ai;
  }
  if (g > s.M) return Scalar(0);
  if (g == 0) return s.rho;
  if (g == 1) return Scalar(0);
  return s.f[ordinal(a) - s.D - 2];
}

// Dimensionless coefficient g_alpha = f_alpha / (rho theta^{|alpha|/2}).
template <typename Scalar>
Scalar scaled_coeff(const MomentState<Scalar>& s, const MultiIndex& a) {
  int g = 0;
  for (int ai : a) {
    if (ai < 0) return Scalar(0);
    g += ai;
  }
  if (g > s.M) return Scalar(0);
  if (g == 0) return Scalar(1);
  if (g == 1) return Scalar(0);
  return s.f[ordinal(a) - s.D - 2] /
         (s.rho * std::pow(s.theta, Scalar(g) / Scalar(2)));
}

template <typename Scalar>
Scalar pressure(const MomentState<Scalar>& s) {
  return s.rho * s.theta;
}

// Pressure tensor entry p_{e_i + e_j}, 0-based directions.
template <typename Scalar>
Scalar pressure_component(const MomentState<Scalar>& s, int i, int j) {
  MultiIndex a(s.D, 0);
  ++a[i];
  ++a[j];
  Scalar fij = s.f[ordinal(a) - s.D - 2];
  if (i == j) return s.rho * s.theta + Scalar(2) * fij;
  return fij;
}

// Heat flux q_j = 3 f_{3e_j} + sum_{d != j} f_{e_j + 2e_d}, 0-based j.
template <typename Scalar>
Scalar heat_flux(const MomentState<Scalar>& s, int j) {
  MultiIndex a(s.D, 0);
  a[j] = 3;
  Scalar q = Scalar(3) * coeff(s, a);
  for (int d = 0; d < s.D; ++d) {
    if (d == j) continue;
    MultiIndex b(s.D, 0);
    b[j] = 1;
    b[d] = 2;
    q += coeff(s, b);
  }
  return q;
}

namespace detail {

template <typename Scalar>
void validate_admissible(int D, int M, Scalar rho, Scalar theta) {
  if (D < 1) throw ValidationError("dimension must be at least 1");
  if (M < 3) throw ValidationError("moment order must be at least 3");
  if (!(rho > Scalar(0))) throw ValidationError("inadmissible: rho must be positive");
  if (!(theta > Scalar(0))) throw ValidationError("inadmissible: theta must be positive");
}

}  // namespace detail

template <typename Scalar>
MomentState<Scalar> make_state(int D, int M, Scalar rho,
                               const DenseVector<Scalar>& u, Scalar theta,
                               const std::map<MultiIndex, Scalar>& f = {}) {
  detail::validate_admissible(D, M, rho, theta);
  if (u.size() != D) throw ValidationError("velocity length must equal D");
  MomentState<Scalar> s;
  s.D = D;
  s.M = M;
  s.rho = rho;
  s.theta = theta;
  s.u = u;
  s.f = DenseVector<Scalar>::Zero(state_size(D, M) - D - 1);
  for (const auto& [a, v] : f) {
    if (static_cast<int>(a.size()) != D)
      throw ValidationError("coefficient index has wrong dimension");
    int g = 0;
    for (int ai : a) {
      if (ai < 0) throw ValidationError("coefficient index has negative entry");
      g += ai;
    }
    if (g < 2 || g > M)
      throw ValidationError("coefficient grade must satisfy 2 <= |alpha| <= M");
    s.f[ordinal(a) - D - 2] = v;
  }
  Scalar trace = Scalar(0);
  for (int d = 0; d < D; ++d) {
    MultiIndex a(D, 0);
    a[d] = 2;
    trace += s.f[ordinal(a) - D - 2];
  }
  if (std::abs(trace) > Scalar(tolerance("TRACE", 1e-12)) * rho * theta)
    throw ValidationError("constraint violation: sum of f_{2e_d} must vanish");
  return s;
}

template <typename Scalar>
MomentState<Scalar> maxwellian(int D, int M, Scalar rho,
                               const DenseVector<Scalar>& u, Scalar theta) {
  return make_state<Scalar>(D, M, rho, u, theta, {});
}

// Recenter the diagonal second-order coefficients so their sum vanishes.
template <typename Scalar>
MomentState<Scalar> project_trace(MomentState<Scalar> s) {
  Scalar trace = Scalar(0);
  for (int d = 0; d < s.D; ++d) {
    MultiIndex a(s.D, 0);
    a[d] = 2;
    trace += s.f[ordinal(a) - s.D - 2];
  }
  for (int d = 0; d < s.D; ++d) {
    MultiIndex a(s.D, 0);
    a[d] = 2;
    s.f[ordinal(a) - s.D - 2] -= trace / Scalar(s.D);
  }
  return s;
}

template <typename Scalar>
DenseVector<Scalar> to_w_vector(const MomentState<Scalar>& s) {
  const auto& table = index_table(s.D, s.M);
  DenseVector<Scalar> w(table.size());
  w[0] = s.rho;
  for (int d = 0; d < s.D; ++d) w[1 + d] = s.u[d];
  for (int pos = s.D + 1; pos < table.size(); ++pos) {
    const MultiIndex& a = table.index(pos);
    Scalar v = s.f[pos - s.D - 1];
    if (grade(a) == 2) {
      bool diag = false;
      for (int d = 0; d < s.D; ++d) diag = diag || a[d] == 2;
      if (diag) v += s.rho * s.theta / Scalar(2);  // slot stores p_{2e_d}/2
    }
    w[pos] = v;
  }
  return w;
}

template <typename Scalar>
MomentState<Scalar> from_w_vector(int D, int M, const DenseVector<Scalar>& w) {
  const auto& table = index_table(D, M);
  if (w.size() != table.size())
    throw ValidationError("moment vector length must equal C(M+D, D)");
  MomentState<Scalar> s;
  s.D = D;
  s.M = M;
  s.rho = w[0];
  s.u = w.segment(1, D);
  Scalar half_trace = Scalar(0);
  for (int d = 0; d < D; ++d) {
    MultiIndex a(D, 0);
    a[d] = 2;
    half_trace += w[ordinal(a) - 1];
  }
  s.theta = Scalar(2) * half_trace / (Scalar(D) * s.rho);
  detail::validate_admissible(D, M, s.rho, s.theta);
  s.f = DenseVector<Scalar>(table.size() - D - 1);
  for (int pos = D + 1; pos < table.size(); ++pos) {
    const MultiIndex& a = table.index(pos);
    Scalar v = w[pos];
    if (grade(a) == 2) {
      bool diag = false;
      for (int d = 0; d < s.D; ++d) diag = diag || a[d] == 2;
      if (diag) v -= s.rho * s.theta / Scalar(2);
    }
    s.f[pos - D - 1] = v;
  }
  return s;
}

// E[xi^m]/m! for a scalar Gaussian with mean u and variance theta.
template <typename Scalar>
Scalar normalized_gaussian_moment(int m, Scalar u, Scalar theta) {
  Scalar sum = Scalar(0);
  for (int l = 0; 2 * l <= m; ++l)
    sum += std::pow(u, Scalar(m - 2 * l)) /
           Scalar(factorial(m - 2 * l)) * std::pow(theta, Scalar(l)) /
           (std::pow(Scalar(2), Scalar(l)) * Scalar(factorial(l)));
  return sum;
}

namespace detail {

// Visit every beta with 0 <= beta <= a componentwise.
template <typename F>
void for_each_subindex(const MultiIndex& a, F&& fn) {
  MultiIndex b(a.size(), 0);
  while (true) {
    fn(const_cast<const MultiIndex&>(b));
    int i = 0;
    while (i < static_cast<int>(a.size())) {
      if (b[i] < a[i]) {
        ++b[i];
        break;
      }
      b[i] = 0;
      ++i;
    }
    if (i == static_cast<int>(a.size())) break;
  }
}

}  // namespace detail

// Raw velocity moments F_alpha = (1/alpha!) int xi^alpha f dxi for |alpha| <= M,
// in ordinal order.
template <typename Scalar>
DenseVector<Scalar> to_fluid_moments(const MomentState<Scalar>& s) {
  const auto& table = index_table(s.D, s.M);
  DenseVector<Scalar> F = DenseVector<Scalar>::Zero(table.size());
  for (int pos = 0; pos < table.size(); ++pos) {
    const MultiIndex& a = table.index(pos);
    Scalar sum = Scalar(0);
    detail::for_each_subindex(a, [&](const MultiIndex& b) {
      Scalar c = coeff(s, b);
      if (c == Scalar(0)) return;
      Scalar weight = Scalar(1);
      for (int d = 0; d < s.D; ++d)
        weight *= normalized_gaussian_moment(a[d] - b[d], s.u[d], s.theta);
      sum += c * weight;
    });
    F[pos] = sum;
  }
  return F;
}

template <typename Scalar>
MomentState<Scalar> from_fluid_moments(int D, int M,
                                       const DenseVector<Scalar>& F) {
  const auto& table = index_table(D, M);
  if (F.size() != table.size())
    throw ValidationError("moment vector length must equal C(M+D, D)");
  Scalar rho = F[0];
  if (!(rho > Scalar(0))) throw ValidationError("inadmissible: F_0 must be positive");
  DenseVector<Scalar> u(D);
  for (int d = 0; d < D; ++d) u[d] = F[1 + d] / rho;
  Scalar ptrace = Scalar(0);
  for (int d = 0; d < D; ++d) {
    MultiIndex a(D, 0);
    a[d] = 2;
    ptrace += Scalar(2) * F[ordinal(a) - 1] - F[1 + d] * F[1 + d] / rho;
  }
  Scalar theta = ptrace / (Scalar(D) * rho);
  if (!(theta > Scalar(0)))
    throw ValidationError("inadmissible: derived theta must be positive");

  MomentState<Scalar> s;
  s.D = D;
  s.M = M;
  s.rho = rho;
  s.u = u;
  s.theta = theta;
  s.f = DenseVector<Scalar>(table.size() - D - 1);
  Scalar sqrt_theta = std::sqrt(theta);
  for (int pos = D + 1; pos < table.size(); ++pos) {
    const MultiIndex& a = table.index(pos);
    Scalar sum = Scalar(0);
    detail::for_each_subindex(a, [&](const MultiIndex& b) {
      int gap = grade(a) - grade(b);
      Scalar term = F[ordinal(b) - 1] * std::pow(sqrt_theta, Scalar(gap));
      Scalar denom = Scalar(1);
      for (int d = 0; d < D; ++d) {
        term *= hermite_value(a[d] - b[d], u[d] / sqrt_theta);
        denom *= Scalar(factorial(a[d] - b[d]));
      }
      sum += (gap % 2 ? Scalar(-1) : Scalar(1)) * term / denom;
    });
    s.f[pos - D - 1] = sum;
  }
  return s;
}

// Near-equilibrium admissible state with exactly vanishing trace.
template <typename Scalar = double, typename URBG>
MomentState<Scalar> random_state(int D, int M, URBG& rng, Scalar scale = Scalar(0.1)) {
  std::uniform_real_distribution<double> rho_dist(0.5, 2.0);
  std::uniform_real_distribution<double> u_dist(-1.0, 1.0);
  std::uniform_real_distribution<double> theta_dist(0.5, 2.0);
  std::uniform_real_distribution<double> f_dist(-1.0, 1.0);
  MomentState<Scalar> s;
  s.D = D;
  s.M = M;
  s.rho = Scalar(rho_dist(rng));
  s.theta = Scalar(theta_dist(rng));
  s.u = DenseVector<Scalar>(D);
  for (int d = 0; d < D; ++d) s.u[d] = Scalar(u_dist(rng));
  const auto& table = index_table(D, M);
  s.f = DenseVector<Scalar>(table.size() - D - 1);
  for (int pos = D + 1; pos < table.size(); ++pos) {
    int g = grade(table.index(pos));
    s.f[pos - D - 1] = scale * Scalar(f_dist(rng)) * s.rho *
                       std::pow(s.theta, Scalar(g) / Scalar(2));
  }
  s = project_trace(s);
  if (D == 1) s.f[0] = Scalar(0);
  return s;
}

}  // namespace hypermoment
