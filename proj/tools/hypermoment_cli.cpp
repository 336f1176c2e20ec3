#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hypermoment/assembly.hpp"
#include "hypermoment/fv_solver.hpp"
#include "hypermoment/json_io.hpp"
#include "hypermoment/rotation.hpp"
#include "hypermoment/spectral.hpp"
#include "hypermoment/waves.hpp"

using namespace hypermoment;
using nlohmann::json;
using Vec = DenseVector<double>;
using Mat = DenseMatrix<double>;

namespace {

json read_json(const std::string& path) {
  try {
    if (path == "-") return json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    return json::parse(in);
  } catch (const json::parse_error& err) {
    throw ValidationError(std::string("bad JSON in ") + path + ": " +
                          err.what());
  }
}

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream file(out);
  if (!file) throw ValidationError("cannot write " + out);
  file << j.dump(2) << "\n";
}

void guard_dims(int D, int M, bool force) {
  if (force) return;
  if (D < 1 || D > 3)
    throw ValidationError("D outside the supported range [1, 3]; "
                          "pass --force to override");
  if (M < 3 || M > 8)
    throw ValidationError("M outside the supported range [3, 8]; "
                          "pass --force to override");
}

MomentState<double> load_state(const std::string& path, bool force) {
  auto s = state_from_json(read_json(path));
  guard_dims(s.D, s.M, force);
  return s;
}

bool parse_kind(const std::string& kind) {
  if (kind == "regularized") return true;
  if (kind == "grad") return false;
  throw ValidationError("kind must be 'regularized' or 'grad'");
}

Vec parse_components(const std::string& text, const char* what) {
  std::vector<double> vals;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ','))
    try {
      vals.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw ValidationError(std::string("bad ") + what + ": " + text);
    }
  if (vals.empty()) throw ValidationError(std::string("empty ") + what);
  Vec v(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) v(i) = vals[i];
  return v;
}

CharacteristicField<double> find_field(int D, int M, int class_ordinal,
                                       int root_index) {
  for (const auto& f : enumerate_fields<double>(D, M))
    if (f.wave_class.ordinal == class_ordinal && f.root_index == root_index)
      return f;
  throw ValidationError("no characteristic field with that class and root");
}

json field_to_json(const CharacteristicField<double>& f) {
  return json{{"class", f.wave_class.ordinal},
              {"hat", index_key(f.wave_class.hat)},
              {"hermite_degree", f.wave_class.hermite_degree},
              {"root_index", f.root_index},
              {"root", f.root},
              {"nature", to_string(f.nature)}};
}

struct StateArg {
  std::string path;
  bool force = false;
};

void add_state_options(CLI::App* cmd, StateArg& arg) {
  cmd->add_option("--state", arg.path, "state JSON path ('-' for stdin)")
      ->required();
  cmd->add_flag("--force", arg.force, "skip the D/M range guard");
}

int cmd_assemble(const StateArg& arg, const std::string& kind, int direction,
                 const std::string& out) {
  auto s = load_state(arg.path, arg.force);
  Mat A = flux_jacobian(s, direction, parse_kind(kind));
  emit(json{{"D", s.D},
            {"M", s.M},
            {"kind", kind},
            {"direction", direction},
            {"matrix", matrix_to_json(A)}},
       out);
  return 0;
}

int cmd_spectrum(const StateArg& arg, const std::string& kind, bool numeric,
                 const std::string& out) {
  auto s = load_state(arg.path, arg.force);
  json entries = json::array();
  auto classes = wave_classes(s.D, s.M);
  for (int k = 1; k <= s.M + 1; ++k) {
    int mult = hermite_factor_multiplicity(s.D, s.M, k);
    if (mult == 0) continue;
    std::vector<int> ordinals;
    for (const auto& wc : classes)
      if (wc.hermite_degree == k) ordinals.push_back(wc.ordinal);
    auto roots = hermite_roots<double>(k);
    for (int i = 0; i < static_cast<int>(roots.size()); ++i)
      entries.push_back(json{{"lambda", s.u(0) + roots[i] * std::sqrt(s.theta)},
                             {"hermite_degree", k},
                             {"root_index", i + 1},
                             {"multiplicity", mult},
                             {"classes", ordinals}});
  }
  json result{{"D", s.D}, {"M", s.M}, {"analytic", entries}};
  if (numeric) {
    Mat A = flux_jacobian(s, 1, parse_kind(kind));
    Eigen::EigenSolver<Mat> es(A, false);
    std::vector<double> re(A.rows());
    for (int i = 0; i < A.rows(); ++i) re[i] = es.eigenvalues()(i).real();
    std::sort(re.begin(), re.end());
    result["numeric"] = re;
    result["max_imaginary"] = es.eigenvalues().imag().cwiseAbs().maxCoeff();
    result["kind"] = kind;
  }
  emit(result, out);
  return 0;
}

int cmd_charpoly(const StateArg& arg, std::vector<double> lambdas, int samples,
                 unsigned seed, const std::string& out) {
  auto s = load_state(arg.path, arg.force);
  if (lambdas.empty()) {
    if (samples <= 0)
      throw ValidationError("give --lambda values or --samples > 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> spread(-4.0, 4.0);
    for (int i = 0; i < samples; ++i)
      lambdas.push_back(s.u(0) + spread(rng) * std::sqrt(s.theta));
  }
  json values = json::array();
  for (double lambda : lambdas) {
    auto sl = char_poly_signed_log(s.D, s.M, s.u(0), s.theta, lambda);
    values.push_back(json{
        {"lambda", lambda},
        {"sign", sl.sign},
        {"log_abs", sl.log_abs},
        {"value", sl.sign == 0 ? 0.0 : sl.sign * std::exp(sl.log_abs)}});
  }
  emit(json{{"D", s.D}, {"M", s.M}, {"values", values}}, out);
  return 0;
}

int cmd_check_hyperbolic(const StateArg& arg, const std::string& kind,
                         const std::string& out) {
  auto s = load_state(arg.path, arg.force);
  Mat A = flux_jacobian(s, 1, parse_kind(kind));
  auto report = hyperbolicity_report(A);
  json witness = json::array();
  for (const auto& z : report.offending)
    witness.push_back(json{{"real", z.real()}, {"imag", z.imag()}});
  emit(json{{"kind", kind},
            {"hyperbolic", report.hyperbolic},
            {"max_imaginary", report.max_imaginary},
            {"condition", report.condition},
            {"offending", witness}},
       out);
  return report.hyperbolic ? 0 : 3;
}

int cmd_rotate(const StateArg& arg, const std::string& matrix_path,
               double angle, int axis, bool has_angle,
               const std::string& out) {
  auto s = load_state(arg.path, arg.force);
  Mat G;
  if (!matrix_path.empty()) {
    json j = read_json(matrix_path);
    auto rows = j.get<std::vector<std::vector<double>>>();
    G = Mat(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<Eigen::Index>(rows[i].size()) != G.cols())
        throw ValidationError("rotation matrix rows have unequal lengths");
      for (std::size_t k = 0; k < rows[i].size(); ++k) G(i, k) = rows[i][k];
    }
  } else if (has_angle) {
    if (s.D == 2) {
      G = Mat(2, 2);
      G << std::cos(angle), std::sin(angle), -std::sin(angle), std::cos(angle);
    } else if (s.D == 3) {
      if (axis < 0 || axis > 2)
        throw ValidationError("--axis must be 0, 1 or 2 in three dimensions");
      G = Mat::Identity(3, 3);
      int i = (axis + 1) % 3, j = (axis + 2) % 3;
      G(i, i) = std::cos(angle);
      G(i, j) = std::sin(angle);
      G(j, i) = -std::sin(angle);
      G(j, j) = std::cos(angle);
    } else {
      throw ValidationError("--angle needs D = 2 or D = 3 with --axis");
    }
  } else {
    throw ValidationError("give --matrix or --angle");
  }
  if (G.rows() != s.D || G.cols() != s.D)
    throw ValidationError("rotation matrix must be D x D");
  emit(state_to_json(rotate_state(s, G)), out);
  return 0;
}

int cmd_rotate_check(const StateArg& arg, const std::string& normal,
                     const std::string& out) {
  auto s = load_state(arg.path, arg.force);
  Vec n = parse_components(normal, "normal");
  if (n.size() != s.D)
    throw ValidationError("normal must have D components");
  n /= n.norm();
  double residual = rotation_invariance_residual(s, n);
  double tol = tolerance("ROTATION", 1e-10);
  bool pass = residual <= tol;
  emit(json{{"residual", residual}, {"tolerance", tol}, {"pass", pass}}, out);
  return pass ? 0 : 3;
}

int cmd_classify_field(int D, int M, bool force, const std::string& state_path,
                       const std::string& out) {
  MomentState<double> s;
  bool with_state = !state_path.empty();
  if (with_state) {
    s = load_state(state_path, force);
    D = s.D;
    M = s.M;
  } else {
    if (D <= 0 || M <= 0)
      throw ValidationError("give --D and --M, or --state");
    guard_dims(D, M, force);
  }
  json fields = json::array();
  for (const auto& f : enumerate_fields<double>(D, M)) {
    json entry = field_to_json(f);
    if (with_state) {
      entry["lambda"] = field_eigenvalue(s, f);
      entry["eigenvalue_derivative"] = eigenvalue_derivative(s, f);
    }
    fields.push_back(entry);
  }
  emit(json{{"D", D}, {"M", M}, {"fields", fields}}, out);
  return 0;
}

int cmd_classify_wave(const std::string& left_path,
                      const std::string& right_path, bool force,
                      int class_ordinal, int root_index,
                      const std::string& out) {
  auto left = load_state(left_path, force);
  auto right = load_state(right_path, force);
  if (left.D != right.D || left.M != right.M)
    throw ValidationError("left and right states must share D and M");
  auto field = find_field(left.D, left.M, class_ordinal, root_index);
  auto wave = classify_elementary_wave(left, right, field);
  json j = field_to_json(field);
  j["type"] = to_string(wave.type);
  j["speed_left"] = wave.speed_left;
  j["speed_right"] = wave.speed_right;
  j["residual"] = wave.residual;
  j["entropy_satisfied"] = wave.entropy_satisfied;
  emit(j, out);
  return 0;
}

int cmd_curve(const StateArg& arg, int class_ordinal, int root_index,
              double zeta, const std::string& out) {
  auto s = load_state(arg.path, arg.force);
  auto field = find_field(s.D, s.M, class_ordinal, root_index);
  auto tip = integral_curve(s, field, zeta);
  json j{{"zeta", zeta},
         {"field", field_to_json(field)},
         {"state", state_to_json(tip)}};
  bool acoustic = field.wave_class.ordinal == 1;
  if (acoustic || is_transverse_pressure_class(field.wave_class.hat)) {
    auto closed = rarefaction_curve_closed(
        s,
        acoustic ? RarefactionFamily::acoustic
                 : RarefactionFamily::transverse_pressure,
        field.root, zeta);
    j["closed_form"] = json{
        {"rho", closed.rho},
        {"u", std::vector<double>(closed.u.data(), closed.u.data() + s.D)},
        {"theta", closed.theta},
        {"p", closed.p},
        {"p_2e1", closed.p2e1},
        {"speed", closed.speed}};
  }
  emit(j, out);
  return 0;
}

int cmd_shock(const std::string& left_path, const std::string& right_path,
              bool force, double speed, bool has_speed, int class_ordinal,
              int root_index, const std::string& out) {
  auto left = load_state(left_path, force);
  auto right = load_state(right_path, force);
  if (left.D != right.D || left.M != right.M)
    throw ValidationError("left and right states must share D and M");
  double S = has_speed ? speed : suggested_shock_speed(left, right);
  auto report = shock_residuals(left, right, S);
  const auto& table = index_table(left.D, left.M);
  json residuals = json::object();
  for (int pos = 0; pos < report.jump_residuals.size(); ++pos)
    residuals[index_key(table.index(pos))] = report.jump_residuals(pos);
  json j{{"speed", S},
         {"jump_residuals", residuals},
         {"identity_residual", report.identity_residual},
         {"scale", report.scale}};
  if (class_ordinal > 0) {
    auto field = find_field(left.D, left.M, class_ordinal, root_index);
    j["field"] = field_to_json(field);
    j["entropy_satisfied"] = entropy_condition(left, right, S, field);
  }
  emit(j, out);
  return 0;
}

int cmd_random_state(int D, int M, double scale, unsigned seed, bool force,
                     const std::string& out) {
  guard_dims(D, M, force);
  std::mt19937_64 rng(seed);
  auto s = random_state<double>(D, M, rng, scale);
  emit(state_to_json(s), out);
  return 0;
}

std::string csv_key(const MultiIndex& a) {
  std::string key = index_key(a);
  std::replace(key.begin(), key.end(), ',', '_');
  return key;
}

void write_frame_csv(const std::string& path, const SimConfig<double>& config,
                     const std::vector<MomentState<double>>& cells) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << std::setprecision(17);
  const auto& table = index_table(config.D, config.M);
  out << "x,rho";
  for (int d = 1; d <= config.D; ++d) out << ",u" << d;
  out << ",theta,p_2e1";
  for (int pos = config.D + 1; pos < table.size(); ++pos)
    out << ",f_" << csv_key(table.index(pos));
  out << "\n";
  for (int i = 0; i < config.cells; ++i) {
    const auto& s = cells[i];
    out << cell_center(config, i) << "," << s.rho;
    for (int d = 0; d < config.D; ++d) out << "," << s.u(d);
    out << "," << s.theta << "," << pressure_component(s, 0, 0);
    for (int pos = config.D + 1; pos < table.size(); ++pos)
      out << "," << s.f(pos - config.D - 1);
    out << "\n";
  }
}

int cmd_simulate(const std::string& config_path, bool force,
                 const std::string& prefix, const std::string& out) {
  json j = read_json(config_path);
  SimConfig<double> config;
  for (const char* key : {"D", "M", "cells"})
    if (!j.contains(key))
      throw ValidationError(std::string("config missing field: ") + key);
  config.D = j.at("D").get<int>();
  config.M = j.at("M").get<int>();
  guard_dims(config.D, config.M, force);
  config.cells = j.at("cells").get<int>();
  config.x_lo = j.value("x_lo", 0.0);
  config.x_hi = j.value("x_hi", 1.0);
  config.cfl = j.value("cfl", 0.5);
  config.t_end = j.value("t_end", 0.1);
  config.snapshot_interval = j.value("snapshot_interval", 0);
  std::string boundary = j.value("boundary", "copy");
  if (boundary == "copy")
    config.boundary = BoundaryKind::copy;
  else if (boundary == "periodic")
    config.boundary = BoundaryKind::periodic;
  else
    throw ValidationError("boundary must be 'copy' or 'periodic'");
  config.kind = parse_kind(j.value("kind", "regularized"))
                    ? SchemeKind::regularized
                    : SchemeKind::grad;
  if (j.contains("riemann")) {
    auto left = state_from_json(j.at("riemann").at("left"));
    auto right = state_from_json(j.at("riemann").at("right"));
    set_riemann_data(config, left, right);
  } else if (j.contains("cells_data")) {
    for (const auto& cell : j.at("cells_data"))
      config.initial.push_back(state_from_json(cell));
  } else {
    throw ValidationError("config needs 'riemann' or 'cells_data'");
  }

  auto series = simulate(config);

  json files = json::array();
  for (std::size_t k = 0; k < series.frames.size(); ++k) {
    std::ostringstream name;
    name << prefix << "_frame_" << k << ".csv";
    write_frame_csv(name.str(), config, series.frames[k]);
    files.push_back(name.str());
  }
  std::string ledger_path = prefix + "_ledger.csv";
  {
    std::ofstream ledger(ledger_path);
    if (!ledger) throw ValidationError("cannot write " + ledger_path);
    ledger << std::setprecision(17);
    const auto& table = index_table(config.D, config.M);
    ledger << "time";
    int low = static_cast<int>(binomial(config.M - 1 + config.D, config.D));
    for (int pos = 0; pos < low; ++pos)
      ledger << ",F_" << csv_key(table.index(pos));
    ledger << "\n";
    for (std::size_t k = 0; k < series.times.size(); ++k) {
      ledger << series.times[k];
      for (int pos = 0; pos < low; ++pos)
        ledger << "," << series.conserved_totals[k](pos);
      ledger << "\n";
    }
  }
  files.push_back(ledger_path);
  emit(json{{"steps", series.steps},
            {"times", series.times},
            {"files", files}},
       out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moment system toolbox: assembly, spectra, waves, simulation"};
  app.require_subcommand(1);

  StateArg assemble_state;
  std::string assemble_kind = "regularized", assemble_out;
  int assemble_direction = 1;
  auto* assemble = app.add_subcommand("assemble", "assemble a flux Jacobian");
  add_state_options(assemble, assemble_state);
  assemble->add_option("--kind", assemble_kind, "regularized or grad");
  assemble->add_option("--direction", assemble_direction, "flux direction, 1-based");
  assemble->add_option("--out", assemble_out, "output path");

  StateArg spectrum_state;
  std::string spectrum_kind = "regularized", spectrum_out;
  bool spectrum_numeric = false;
  auto* spectrum = app.add_subcommand("spectrum", "analytic eigenvalue list");
  add_state_options(spectrum, spectrum_state);
  spectrum->add_flag("--numeric", spectrum_numeric,
                     "also compute the numeric spectrum");
  spectrum->add_option("--kind", spectrum_kind, "matrix for --numeric");
  spectrum->add_option("--out", spectrum_out, "output path");

  StateArg charpoly_state;
  std::vector<double> charpoly_lambdas;
  int charpoly_samples = 0;
  unsigned charpoly_seed = 0;
  std::string charpoly_out;
  auto* charpoly = app.add_subcommand(
      "charpoly", "characteristic polynomial in signed-log form");
  add_state_options(charpoly, charpoly_state);
  charpoly->add_option("--lambda", charpoly_lambdas, "evaluation points");
  charpoly->add_option("--samples", charpoly_samples,
                       "draw this many sample points");
  charpoly->add_option("--seed", charpoly_seed, "sample seed");
  charpoly->add_option("--out", charpoly_out, "output path");

  StateArg hyper_state;
  std::string hyper_kind = "regularized", hyper_out;
  auto* hyper = app.add_subcommand("check-hyperbolic",
                                   "verify all eigenvalues are real");
  add_state_options(hyper, hyper_state);
  hyper->add_option("--kind", hyper_kind, "regularized or grad");
  hyper->add_option("--out", hyper_out, "output path");

  StateArg rotate_state_arg;
  std::string rotate_matrix, rotate_out;
  double rotate_angle = 0;
  int rotate_axis = -1;
  auto* rotate = app.add_subcommand("rotate", "apply a frame rotation");
  add_state_options(rotate, rotate_state_arg);
  rotate->add_option("--matrix", rotate_matrix, "rotation matrix JSON");
  auto* angle_opt =
      rotate->add_option("--angle", rotate_angle, "rotation angle, radians");
  rotate->add_option("--axis", rotate_axis, "fixed axis for D = 3");
  rotate->add_option("--out", rotate_out, "output path");

  StateArg check_state;
  std::string check_normal, check_out;
  auto* rotcheck = app.add_subcommand(
      "rotate-check", "directional flux rotation-invariance residual");
  add_state_options(rotcheck, check_state);
  rotcheck->add_option("--normal", check_normal, "direction components")
      ->required();
  rotcheck->add_option("--out", check_out, "output path");

  int cf_D = 0, cf_M = 0;
  bool cf_force = false;
  std::string cf_state, cf_out;
  auto* clsfield = app.add_subcommand("classify-field",
                                      "genuine nonlinearity per field");
  clsfield->add_option("--D", cf_D, "dimension");
  clsfield->add_option("--M", cf_M, "moment order");
  clsfield->add_option("--state", cf_state, "optional state for eigenvalues");
  clsfield->add_flag("--force", cf_force, "skip the D/M range guard");
  clsfield->add_option("--out", cf_out, "output path");

  std::string cw_left, cw_right, cw_out;
  bool cw_force = false;
  int cw_class = 1, cw_root = 1;
  auto* clswave = app.add_subcommand("classify-wave",
                                     "elementary wave decision table");
  clswave->add_option("--left", cw_left, "left state JSON")->required();
  clswave->add_option("--right", cw_right, "right state JSON")->required();
  clswave->add_option("--class", cw_class, "class ordinal, 1-based")->required();
  clswave->add_option("--root", cw_root, "root index, 1-based")->required();
  clswave->add_flag("--force", cw_force, "skip the D/M range guard");
  clswave->add_option("--out", cw_out, "output path");

  StateArg curve_state;
  int curve_class = 1, curve_root = 1;
  double curve_zeta = 0;
  std::string curve_out;
  auto* curve = app.add_subcommand("curve", "integral curve of a field");
  add_state_options(curve, curve_state);
  curve->add_option("--class", curve_class, "class ordinal, 1-based")->required();
  curve->add_option("--root", curve_root, "root index, 1-based")->required();
  curve->add_option("--zeta", curve_zeta, "curve parameter")->required();
  curve->add_option("--out", curve_out, "output path");

  std::string shock_left, shock_right, shock_out;
  bool shock_force = false;
  double shock_speed_value = 0;
  int shock_class = 0, shock_root = 1;
  auto* shock = app.add_subcommand("shock", "jump conditions and residuals");
  shock->add_option("--left", shock_left, "left state JSON")->required();
  shock->add_option("--right", shock_right, "right state JSON")->required();
  auto* speed_opt =
      shock->add_option("--speed", shock_speed_value, "override the speed");
  shock->add_option("--class", shock_class,
                    "class ordinal for the entropy check");
  shock->add_option("--root", shock_root, "root index for the entropy check");
  shock->add_flag("--force", shock_force, "skip the D/M range guard");
  shock->add_option("--out", shock_out, "output path");

  std::string sim_config, sim_prefix = "sim", sim_out;
  bool sim_force = false;
  auto* sim = app.add_subcommand("simulate", "finite volume run");
  sim->add_option("--config", sim_config, "simulation config JSON")->required();
  sim->add_option("--out-prefix", sim_prefix, "prefix for CSV artifacts");
  sim->add_flag("--force", sim_force, "skip the D/M range guard");
  sim->add_option("--out", sim_out, "summary output path");

  int rs_D = 2, rs_M = 3;
  double rs_scale = 0.1;
  unsigned rs_seed = 0;
  bool rs_force = false;
  std::string rs_out;
  auto* random = app.add_subcommand("random-state",
                                    "draw a random admissible state");
  random->add_option("--D", rs_D, "dimension");
  random->add_option("--M", rs_M, "moment order");
  random->add_option("--scale", rs_scale, "perturbation scale");
  random->add_option("--seed", rs_seed, "generator seed");
  random->add_flag("--force", rs_force, "skip the D/M range guard");
  random->add_option("--out", rs_out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return 1;
  }

  try {
    if (*assemble)
      return cmd_assemble(assemble_state, assemble_kind, assemble_direction,
                          assemble_out);
    if (*spectrum)
      return cmd_spectrum(spectrum_state, spectrum_kind, spectrum_numeric,
                          spectrum_out);
    if (*charpoly)
      return cmd_charpoly(charpoly_state, charpoly_lambdas, charpoly_samples,
                          charpoly_seed, charpoly_out);
    if (*hyper) return cmd_check_hyperbolic(hyper_state, hyper_kind, hyper_out);
    if (*rotate)
      return cmd_rotate(rotate_state_arg, rotate_matrix, rotate_angle,
                        rotate_axis, angle_opt->count() > 0, rotate_out);
    if (*rotcheck) return cmd_rotate_check(check_state, check_normal, check_out);
    if (*clsfield)
      return cmd_classify_field(cf_D, cf_M, cf_force, cf_state, cf_out);
    if (*clswave)
      return cmd_classify_wave(cw_left, cw_right, cw_force, cw_class, cw_root,
                               cw_out);
    if (*curve)
      return cmd_curve(curve_state, curve_class, curve_root, curve_zeta,
                       curve_out);
    if (*shock)
      return cmd_shock(shock_left, shock_right, shock_force, shock_speed_value,
                       speed_opt->count() > 0, shock_class, shock_root,
                       shock_out);
    if (*sim) return cmd_simulate(sim_config, sim_force, sim_prefix, sim_out);
    if (*random)
      return cmd_random_state(rs_D, rs_M, rs_scale, rs_seed, rs_force, rs_out);
  } catch (const ValidationError& err) {
    std::cerr << "validation error: " << err.what() << "\n";
    return 2;
  } catch (const NumericError& err) {
    std::cerr << "numeric error: " << err.what() << "\n";
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
