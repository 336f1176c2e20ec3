#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hypermoment/spectral.hpp"

namespace hypermoment {

enum class FieldNature { genuinely_nonlinear, linearly_degenerate };
enum class WaveType { rarefaction, shock, contact, unclassified };

inline const char* to_string(FieldNature n) {
  return n == FieldNature::genuinely_nonlinear ? "genuinely-nonlinear"
                                               : "linearly-degenerate";
}

inline const char* to_string(WaveType t) {
  switch (t) {
    case WaveType::rarefaction: return "rarefaction";
    case WaveType::shock: return "shock";
    case WaveType::contact: return "contact";
    default: return "unclassified";
  }
}

// A characteristic family: a transverse class together with one root C of
// its Hermite polynomial.  The eigenvalue is u1 + C*sqrt(theta).
template <typename Scalar>
struct CharacteristicField {
  WaveClass wave_class;
  int root_index = 1;  // 1-based, ascending roots
  Scalar root = Scalar(0);
  FieldNature nature = FieldNature::linearly_degenerate;
};

// The class whose parameter vector pivots on the transverse pressure slot
// p_{2e_k}; together with the pivot-on-density class these are the only
// candidates for genuine nonlinearity.
inline bool is_transverse_pressure_class(const MultiIndex& hat) {
  return grade(hat) == 2 &&
         *std::max_element(hat.begin(), hat.end()) == 2;
}

namespace detail {

template <typename Scalar>
void validate_class_root(const WaveClass& wc, Scalar C) {
  auto roots = hermite_roots<Scalar>(wc.hermite_degree);
  Scalar best = roots[0];
  for (Scalar r : roots)
    if (std::abs(r - C) < std::abs(best - C)) best = r;
  if (std::abs(best - C) > Scalar(1e-9) * (Scalar(1) + std::abs(best)))
    throw ValidationError("root does not belong to the class's Hermite factor");
}

template <typename Scalar>
bool is_zero_root(Scalar C) {
  return std::abs(C) <= Scalar(1e-12);
}

}  // namespace detail

template <typename Scalar>
FieldNature classify_field(int D, int M, const WaveClass& wc, Scalar C) {
  if (wc.hermite_degree != M + 1 - grade(wc.hat))
    throw ValidationError("class degree is inconsistent with M");
  (void)D;
  detail::validate_class_root(wc, C);
  if (detail::is_zero_root(C)) return FieldNature::linearly_degenerate;
  if (wc.ordinal == 1 || is_transverse_pressure_class(wc.hat))
    return FieldNature::genuinely_nonlinear;
  return FieldNature::linearly_degenerate;
}

template <typename Scalar = double>
std::vector<CharacteristicField<Scalar>> enumerate_fields(int D, int M) {
  std::vector<CharacteristicField<Scalar>> out;
  for (const WaveClass& wc : wave_classes(D, M)) {
    auto roots = hermite_roots<Scalar>(wc.hermite_degree);
    for (int i = 0; i < static_cast<int>(roots.size()); ++i)
      out.push_back({wc, i + 1, roots[i],
                     classify_field<Scalar>(D, M, wc, roots[i])});
  }
  return out;
}

template <typename Scalar>
Scalar field_eigenvalue(const MomentState<Scalar>& s,
                        const CharacteristicField<Scalar>& field) {
  return s.u(0) + field.root * std::sqrt(s.theta);
}

// Directional derivative of the eigenvalue along the (scaled-pivot
// normalized) eigenvector.  Only the density entry and the diagonal
// second-order entries of the class parameter vector contribute.
template <typename Scalar>
Scalar eigenvalue_derivative(const MomentState<Scalar>& s,
                             const CharacteristicField<Scalar>& field) {
  Scalar C = field.root;
  DenseVector<Scalar> v =
      class_parameter_vector(s, field.wave_class.ordinal, C);
  const auto& hat_table = index_table(s.D - 1, s.M);
  Scalar D = Scalar(s.D);
  Scalar vsum = Scalar(0);
  for (int d = 0; d + 1 < s.D; ++d)
    vsum += v(static_cast<int>(
        hat_table.position(shifted(MultiIndex(s.D - 1, 0), d, 2))));
  return std::sqrt(s.theta) * C / Scalar(2) *
         ((Scalar(1) + C * C / D) * v(0) + Scalar(2) / D * vsum);
}

enum class RarefactionFamily { acoustic, transverse_pressure };

// Partial state along a rarefaction curve: the components with closed-form
// evolution.  Higher moments require the ODE continuation.
template <typename Scalar>
struct RarefactionPoint {
  Scalar rho;
  DenseVector<Scalar> u;
  Scalar theta;
  Scalar p;
  Scalar p2e1;
  Scalar speed;
};

template <typename Scalar>
RarefactionPoint<Scalar> rarefaction_curve_closed(const MomentState<Scalar>& s,
                                                  RarefactionFamily family,
                                                  Scalar C, Scalar zeta) {
  detail::validate_admissible(s.D, s.M, s.rho, s.theta);
  RarefactionPoint<Scalar> out;
  out.u = s.u;
  Scalar p0 = pressure(s);
  Scalar p2e1_0 = pressure_component(s, 0, 0);
  if (family == RarefactionFamily::acoustic) {
    detail::validate_class_root(
        {MultiIndex(s.D - 1, 0), 1, s.M + 1}, C);
    Scalar D = Scalar(s.D);
    Scalar gamma = (D - Scalar(1) + C * C) / D;
    Scalar egz = std::exp(gamma * zeta);
    out.rho = s.rho * std::exp(zeta);
    out.theta = s.theta * std::exp((gamma - Scalar(1)) * zeta);
    Scalar root_theta0 = std::sqrt(s.theta);
    if (std::abs(gamma - Scalar(1)) < Scalar(1e-6)) {
      Scalar gm = gamma - Scalar(1);
      out.u(0) = s.u(0) + C * root_theta0 *
                              (zeta + gm * zeta * zeta / Scalar(4) +
                               gm * gm * zeta * zeta * zeta / Scalar(24));
    } else {
      out.u(0) = s.u(0) + Scalar(2) * C * root_theta0 *
                              (std::exp((gamma - Scalar(1)) * zeta / Scalar(2)) -
                               Scalar(1)) /
                              (gamma - Scalar(1));
    }
    out.p = p0 * egz;
    out.p2e1 = p2e1_0 + C * C / gamma * p0 * (egz - Scalar(1));
  } else {
    if (s.D < 2)
      throw ValidationError(
          "transverse pressure families need at least two dimensions");
    MultiIndex hat = shifted(MultiIndex(s.D - 1, 0), 0, 2);
    detail::validate_class_root({hat, 0, s.M - 1}, C);
    out.rho = s.rho;
    out.p = p0 * std::exp(Scalar(2) * zeta / Scalar(s.D));
    out.theta = out.p / out.rho;
    out.p2e1 = p2e1_0;
  }
  out.speed = out.u(0) + C * std::sqrt(out.theta);
  return out;
}

// Integrates the eigenvector field w' = r(w) with classical RK4.  The
// parameter vector's unit pivot fixes the normalization: the density entry
// of r equals rho for the acoustic family and the p_{2e_k}/2 entry equals
// rho*theta/... for the transverse families, matching the closed forms.
template <typename Scalar>
MomentState<Scalar> integral_curve(const MomentState<Scalar>& s,
                                   const CharacteristicField<Scalar>& field,
                                   Scalar zeta) {
  detail::validate_admissible(s.D, s.M, s.rho, s.theta);
  if (zeta == Scalar(0)) return s;
  const auto& table = index_table(s.D, s.M);
  double span = static_cast<double>(std::abs(zeta));
  int n = std::max(100, static_cast<int>(std::ceil(span / 1e-3)));
  Scalar h = zeta / Scalar(n);

  auto guard = [&](const DenseVector<Scalar>& w, Scalar at) {
    Scalar rho = w(0);
    Scalar trace = Scalar(0);
    for (int d = 0; d < s.D; ++d)
      trace += w(static_cast<int>(
          table.position(shifted(MultiIndex(s.D, 0), d, 2))));
    Scalar theta = Scalar(2) * trace / (Scalar(s.D) * rho);
    if (!(rho > Scalar(0)) || !(theta > Scalar(0)) || !std::isfinite(rho) ||
        !std::isfinite(theta)) {
      std::ostringstream msg;
      msg << "integral curve left the admissible set at zeta = " << at;
      throw NumericError(msg.str());
    }
  };
  auto rhs = [&](const DenseVector<Scalar>& w) {
    return eigenvector_from_w(s.D, s.M, w, field.wave_class.hat, field.root);
  };

  DenseVector<Scalar> w = to_w_vector(s);
  for (int i = 0; i < n; ++i) {
    guard(w, Scalar(i) * h);
    DenseVector<Scalar> k1 = rhs(w);
    DenseVector<Scalar> k2 = rhs(w + h / Scalar(2) * k1);
    DenseVector<Scalar> k3 = rhs(w + h / Scalar(2) * k2);
    DenseVector<Scalar> k4 = rhs(w + h * k3);
    w += h / Scalar(6) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
  }
  guard(w, zeta);
  return from_w_vector(s.D, s.M, w);
}

template <typename Scalar>
struct ContactReport {
  Scalar u1_jump;
  Scalar p_jump;
  Scalar p2e1_jump;
  bool invariants_hold;
};

template <typename Scalar>
Scalar equality_tolerance(Scalar a, Scalar b) {
  static const Scalar base =
      static_cast<Scalar>(tolerance("WAVE_EQ", 1e-9));
  return base * (Scalar(1) + std::max(std::abs(a), std::abs(b)));
}

template <typename Scalar>
ContactReport<Scalar> contact_invariants(
    const MomentState<Scalar>& left, const MomentState<Scalar>& right,
    const CharacteristicField<Scalar>& field) {
  if (field.nature != FieldNature::linearly_degenerate)
    throw ValidationError("contact analysis needs a linearly degenerate field");
  ContactReport<Scalar> out;
  out.u1_jump = right.u(0) - left.u(0);
  out.p_jump = pressure(right) - pressure(left);
  out.p2e1_jump = pressure_component(right, 0, 0) - pressure_component(left, 0, 0);
  bool u_ok = std::abs(out.u1_jump) <= equality_tolerance(left.u(0), right.u(0));
  if (detail::is_zero_root(field.root)) {
    out.invariants_hold = u_ok;
    return out;
  }
  bool p_ok =
      std::abs(out.p_jump) <= equality_tolerance(pressure(left), pressure(right));
  bool p2_ok = std::abs(out.p2e1_jump) <=
               equality_tolerance(pressure_component(left, 0, 0),
                                  pressure_component(right, 0, 0));
  out.invariants_hold = u_ok && p_ok && p2_ok;
  return out;
}

template <typename Scalar>
Scalar shock_speed(const MomentState<Scalar>& left,
                   const MomentState<Scalar>& right) {
  if (std::abs(left.rho - right.rho) <=
      equality_tolerance(left.rho, right.rho))
    throw ValidationError(
        "equal densities leave the speed undetermined by the mass jump; "
        "use the equal-density branch");
  return (left.rho * left.u(0) - right.rho * right.u(0)) /
         (left.rho - right.rho);
}

template <typename Scalar>
struct ShockReport {
  DenseVector<Scalar> jump_residuals;  // indices with |alpha| < M, ordinal order
  Scalar identity_residual;
  Scalar scale;
};

// Jump residuals of the conservative block: S*[F_alpha] - [(alpha_1+1)
// F_{alpha+e1}] for |alpha| < M.  The top-order jumps depend on the
// regularization path and are deliberately not evaluated.
template <typename Scalar>
ShockReport<Scalar> shock_residuals(const MomentState<Scalar>& left,
                                    const MomentState<Scalar>& right,
                                    Scalar S) {
  const auto& table = index_table(left.D, left.M);
  DenseVector<Scalar> FL = to_fluid_moments(left);
  DenseVector<Scalar> FR = to_fluid_moments(right);
  int low = static_cast<int>(binomial(left.M - 1 + left.D, left.D));
  ShockReport<Scalar> out;
  out.jump_residuals = DenseVector<Scalar>(low);
  for (int pos = 0; pos < low; ++pos) {
    const MultiIndex& a = table.index(pos);
    int up = static_cast<int>(table.position(shifted(a, 0, 1)));
    out.jump_residuals(pos) = S * (FL(pos) - FR(pos)) -
                              Scalar(a[0] + 1) * (FL(up) - FR(up));
  }
  out.identity_residual =
      (left.rho - right.rho) *
          (pressure_component(left, 0, 0) - pressure_component(right, 0, 0)) -
      left.rho * right.rho * (left.u(0) - right.u(0)) *
          (left.u(0) - right.u(0));
  out.scale = std::max(FL.cwiseAbs().maxCoeff(), FR.cwiseAbs().maxCoeff()) *
                  (Scalar(1) + std::abs(S)) +
              Scalar(1e-300);
  return out;
}

template <typename Scalar>
bool entropy_condition(const MomentState<Scalar>& left,
                       const MomentState<Scalar>& right, Scalar S,
                       const CharacteristicField<Scalar>& field) {
  return field_eigenvalue(left, field) > S && S > field_eigenvalue(right, field);
}

template <typename Scalar>
struct WaveDescription {
  WaveType type = WaveType::unclassified;
  CharacteristicField<Scalar> field;
  Scalar speed_left = Scalar(0);
  Scalar speed_right = Scalar(0);
  Scalar residual = Scalar(0);
  bool entropy_satisfied = false;
};

namespace detail {

// Best-fit speed for the linear-in-S jump system, used when the mass jump
// cannot determine it.
template <typename Scalar>
Scalar least_squares_speed(const MomentState<Scalar>& left,
                           const MomentState<Scalar>& right) {
  DenseVector<Scalar> FL = to_fluid_moments(left);
  DenseVector<Scalar> FR = to_fluid_moments(right);
  const auto& table = index_table(left.D, left.M);
  int low = static_cast<int>(binomial(left.M - 1 + left.D, left.D));
  Scalar num = Scalar(0), den = Scalar(0);
  for (int pos = 0; pos < low; ++pos) {
    const MultiIndex& a = table.index(pos);
    int up = static_cast<int>(table.position(shifted(a, 0, 1)));
    Scalar da = FL(pos) - FR(pos);
    Scalar db = Scalar(a[0] + 1) * (FL(up) - FR(up));
    num += da * db;
    den += da * da;
  }
  if (den <= Scalar(0))
    return (left.u(0) + right.u(0)) / Scalar(2);
  return num / den;
}

template <typename Scalar>
Scalar rarefaction_mismatch(const MomentState<Scalar>& left,
                            const MomentState<Scalar>& right,
                            const CharacteristicField<Scalar>& field,
                            Scalar* zeta_out) {
  RarefactionFamily family = field.wave_class.ordinal == 1
                                 ? RarefactionFamily::acoustic
                                 : RarefactionFamily::transverse_pressure;
  Scalar zeta;
  if (family == RarefactionFamily::acoustic)
    zeta = std::log(right.rho / left.rho);
  else
    zeta = Scalar(left.D) / Scalar(2) *
           std::log(pressure(right) / pressure(left));
  if (zeta_out) *zeta_out = zeta;
  if (field.root * zeta <= Scalar(0) && zeta != Scalar(0))
    return std::numeric_limits<Scalar>::infinity();
  RarefactionPoint<Scalar> tip =
      rarefaction_curve_closed(left, family, field.root, zeta);
  Scalar scale = Scalar(1) + std::abs(pressure(left)) + std::abs(pressure(right));
  Scalar err = std::abs(tip.rho - right.rho);
  err = std::max(err, std::abs(tip.p - pressure(right)));
  err = std::max(err, std::abs(tip.p2e1 - pressure_component(right, 0, 0)));
  for (int d = 0; d < left.D; ++d)
    err = std::max(err, std::abs(tip.u(d) - right.u(d)));
  return err / scale;
}

}  // namespace detail

// Mass-jump speed when the densities differ, least-squares fit over the
// conservative jump system otherwise.
template <typename Scalar>
Scalar suggested_shock_speed(const MomentState<Scalar>& left,
                             const MomentState<Scalar>& right) {
  if (std::abs(left.rho - right.rho) > equality_tolerance(left.rho, right.rho))
    return shock_speed(left, right);
  return detail::least_squares_speed(left, right);
}

// Decision table over the signs of the velocity and pressure jumps, refined
// by curve/jump residuals when more than one pattern matches.
template <typename Scalar>
WaveDescription<Scalar> classify_elementary_wave(
    const MomentState<Scalar>& left, const MomentState<Scalar>& right,
    const CharacteristicField<Scalar>& field) {
  WaveDescription<Scalar> out;
  out.field = field;
  Scalar C = field.root;
  Scalar du = right.u(0) - left.u(0);
  Scalar dp = pressure(right) - pressure(left);
  Scalar tol_u = equality_tolerance(left.u(0), right.u(0));
  Scalar tol_p = equality_tolerance(pressure(left), pressure(right));
  bool u_eq = std::abs(du) <= tol_u;
  bool p_eq = std::abs(dp) <= tol_p;
  bool zero_root = detail::is_zero_root(C);
  bool gnl = field.nature == FieldNature::genuinely_nonlinear;

  bool contact_pattern = zero_root ? u_eq : (u_eq && p_eq);
  bool raref_pattern = false, shock_pattern = false;
  if (gnl) {
    bool u_nondec = du >= -tol_u;
    if (C > Scalar(0)) {
      raref_pattern = u_nondec && dp > tol_p;
      shock_pattern = (u_nondec && dp < -tol_p) || du < -tol_u;
    } else {
      raref_pattern = u_nondec && dp < -tol_p;
      shock_pattern = (u_nondec && dp > tol_p) || du < -tol_u;
    }
  }

  struct Candidate {
    WaveType type;
    Scalar score;
  };
  std::vector<Candidate> candidates;
  Scalar raref_zeta = Scalar(0);
  if (contact_pattern) {
    Scalar score = std::abs(du) / (Scalar(1) + std::abs(left.u(0)));
    if (!zero_root)
      score = std::max(score, std::abs(dp) / (Scalar(1) + std::abs(pressure(left))));
    candidates.push_back({WaveType::contact, score});
  }
  if (raref_pattern)
    candidates.push_back(
        {WaveType::rarefaction,
         detail::rarefaction_mismatch(left, right, field, &raref_zeta)});
  if (shock_pattern) {
    Scalar S = suggested_shock_speed(left, right);
    auto report = shock_residuals(left, right, S);
    candidates.push_back(
        {WaveType::shock,
         report.jump_residuals.cwiseAbs().maxCoeff() / report.scale});
  }

  if (candidates.empty()) {
    out.type = WaveType::unclassified;
    return out;
  }
  const Candidate* best = &candidates[0];
  for (const Candidate& c : candidates)
    if (c.score < best->score) best = &c;
  out.type = best->type;
  out.residual = best->score;
  switch (out.type) {
    case WaveType::rarefaction:
      out.speed_left = field_eigenvalue(left, field);
      out.speed_right = field_eigenvalue(right, field);
      break;
    case WaveType::shock: {
      Scalar S = suggested_shock_speed(left, right);
      out.speed_left = out.speed_right = S;
      out.entropy_satisfied = entropy_condition(left, right, S, field);
      break;
    }
    case WaveType::contact:
      out.speed_left = out.speed_right = field_eigenvalue(left, field);
      break;
    default:
      break;
  }
  return out;
}

}  // namespace hypermoment
