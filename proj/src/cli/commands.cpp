#include "orthoflow/cli.hpp"

#include "orthoflow/diagnostics.hpp"
#include "orthoflow/errors.hpp"
#include "orthoflow/integrate.hpp"
#include "orthoflow/io.hpp"
#include "orthoflow/navkit.hpp"
#include "orthoflow/propagate.hpp"
#include "orthoflow/tableau.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <map>
#include <optional>
#include <sstream>

#ifndef ORTHOFLOW_VERSION
#define ORTHOFLOW_VERSION "unknown"
#endif

namespace fs = std::filesystem;

namespace orthoflow::cli {

namespace {

// Benchmark problem: S = hat(0, -0.1, -2) on [0, 2000] with h = 0.1.
const AngularRate kPaperRate{0.0, -0.1, -2.0};
constexpr double kPaperStep = 0.1;
constexpr double kPaperEnd = 2000.0;
constexpr double kPaperThetaSq = 4.01;
constexpr double kEnergyBudget = 1e-8;
constexpr double kOrthBudget = 1e-9;
constexpr double kForecastRelTol = 5e-3;

struct CommonRunArgs {
  std::string method;
  double h = 0.0;
  std::string stage_solver = "direct";
  double fp_tol = 1e-14;
  int fp_max_iters = 100;
  std::string out;
  std::string dump_q;
};

Method resolve_method(const std::string& spec) {
  std::error_code ec;
  if (fs::is_regular_file(spec, ec)) {
    const std::string text = io::read_file(spec);
    return Method(parse_tableau(text, fs::path(spec).stem().string()));
  }
  return Method::from_label(spec);
}

StageSolver resolve_solver(const CommonRunArgs& a) {
  if (a.stage_solver == "fixed-point") return FixedPointSolve{a.fp_tol, a.fp_max_iters};
  return DirectSolve{};
}

AngularRate parse_omega(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty()) throw UsageError("--omega: not a number: '" + item + "'");
    vals.push_back(v);
  }
  if (vals.size() != 3) throw UsageError("--omega expects three comma-separated values wx,wy,wz");
  if (!std::isfinite(vals[0]) || !std::isfinite(vals[1]) || !std::isfinite(vals[2])) {
    throw UsageError("--omega values must be finite");
  }
  return AngularRate(vals[0], vals[1], vals[2]);
}

SquareMatrix read_matrix_file(const std::string& path) {
  std::istringstream in(io::read_file(path));
  return io::read_matrix(in);
}

void add_solver_flags(CLI::App* sub, CommonRunArgs& a) {
  sub->add_option("--stage-solver", a.stage_solver, "Implicit stage solver")
      ->check(CLI::IsMember({"direct", "fixed-point"}));
  sub->add_option("--fp-tol", a.fp_tol, "Fixed-point tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--fp-max-iters", a.fp_max_iters, "Fixed-point iteration cap")->check(CLI::PositiveNumber);
}

void write_outputs(const fs::path& out, const std::string& csv, const std::map<std::string, std::string>& manifest) {
  io::atomic_write(out, csv);
  io::atomic_write(io::manifest_path(out), io::manifest_text(manifest));
}

std::map<std::string, std::string> base_manifest(const std::string& subcommand, const std::string& method,
                                                 double step, double t_end) {
  return {
      {"subcommand", subcommand},
      {"method", method},
      {"step", io::format_double(step)},
      {"t_end", io::format_double(t_end)},
      {"seed", "none"},
      {"version", ORTHOFLOW_VERSION},
  };
}

// ---------------------------------------------------------------------------

struct CheckTableauArgs {
  std::string name;
  std::string file;
};

int cmd_check_tableau(const CheckTableauArgs& a, std::ostream& out) {
  ButcherTableau t;
  if (!a.name.empty()) {
    t = builtin(a.name);
  } else {
    t = parse_tableau(io::read_file(a.file), fs::path(a.file).stem().string());
  }
  const TableauKind kind = validate(t);
  const SymplecticityReport r = symplecticity(t);
  out << "method: " << t.name << '\n';
  out << "stages: " << t.stages() << '\n';
  out << "kind: " << (kind == TableauKind::explicit_method ? "explicit" : "implicit") << '\n';
  out << "defect matrix M = B A + A^T B - b b^T:\n";
  for (Eigen::Index i = 0; i < r.m.rows(); ++i) {
    out << ' ';
    for (Eigen::Index j = 0; j < r.m.cols(); ++j) out << ' ' << io::format_double(r.m(i, j));
    out << '\n';
  }
  out << "defect: " << io::format_double(r.defect) << '\n';
  out << "verdict: " << (r.symplectic ? "symplectic" : "non-symplectic") << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct PropagateArgs {
  CommonRunArgs run;
  std::string omega;
  std::string s_file;
  double t_end = 0.0;
  std::string q0;
  int record_every = 1;
  bool allow_nonorthogonal = false;
};

int cmd_propagate(const PropagateArgs& a, std::ostream& out) {
  const Method method = resolve_method(a.run.method);
  const SkewMatrix s = a.omega.empty() ? assert_skew(read_matrix_file(a.s_file)) : hat(parse_omega(a.omega));

  OrthogonalState q0 = OrthogonalState::identity(s.dim());
  if (!a.q0.empty()) {
    q0.q = read_matrix_file(a.q0);
    if (q0.q.rows() != s.dim()) {
      throw DimensionError("--q0 is " + std::to_string(q0.q.rows()) + "x" + std::to_string(q0.q.cols()) +
                           " but S is " + std::to_string(s.dim()) + "x" + std::to_string(s.dim()));
    }
    if (!a.allow_nonorthogonal) require_orthogonal(q0.q);
  }

  IntegratorConfig config{method, a.run.h, resolve_solver(a.run)};
  const Trajectory traj = propagate(config, s, q0, a.t_end, a.record_every, !a.run.dump_q.empty());

  auto manifest = base_manifest("propagate", traj.method, a.run.h, a.t_end);
  manifest["input"] = a.omega.empty() ? a.s_file : "omega:" + a.omega;
  manifest["q0"] = a.q0.empty() ? "identity" : a.q0;
  manifest["record_every"] = std::to_string(a.record_every);
  manifest["stage_solver"] = a.run.stage_solver;
  manifest["output"] = a.run.out;
  write_outputs(a.run.out, io::trajectory_csv(traj), manifest);
  if (!a.run.dump_q.empty()) io::atomic_write(a.run.dump_q, io::snapshot_dump(traj));

  double max_err = 0.0;
  for (const auto& r : traj.records) max_err = std::max(max_err, std::abs(r.energy_err));
  out << "records: " << traj.records.size() << '\n';
  out << "final energy: " << io::format_double(traj.records.back().energy) << '\n';
  out << "max |energy_err|: " << io::format_double(max_err) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct BranchSummary {
  double max_abs_energy_err = 0.0;
  double max_orth_defect = 0.0;
  double max_abs_det_err = 0.0;
  double final_energy = 0.0;
  bool monotone = true;
};

BranchSummary summarize(const Trajectory& traj) {
  BranchSummary s;
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    const auto& r = traj.records[i];
    s.max_abs_energy_err = std::max(s.max_abs_energy_err, std::abs(r.energy_err));
    s.max_orth_defect = std::max(s.max_orth_defect, r.orth_defect);
    s.max_abs_det_err = std::max(s.max_abs_det_err, std::abs(r.det_drift));
    if (i > 0 && r.energy_err < traj.records[i - 1].energy_err) s.monotone = false;
  }
  s.final_energy = traj.records.back().energy;
  return s;
}

int cmd_paper_experiment(const std::string& out_dir, std::ostream& out) {
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + out_dir);

  const SkewMatrix s = hat(kPaperRate);
  const OrthogonalState q0 = OrthogonalState::identity(3);
  auto run_branch = [&](ClosedForm form) {
    return propagate(IntegratorConfig{Method(form), kPaperStep, DirectSolve{}}, s, q0, kPaperEnd, 1);
  };
  auto midpoint_future = std::async(std::launch::async, run_branch, ClosedForm::cayley_midpoint);
  auto rk2_future = std::async(std::launch::async, run_branch, ClosedForm::rk2_closed);
  const Trajectory midpoint = midpoint_future.get();
  const Trajectory rk2 = rk2_future.get();

  for (const auto& [name, traj] : {std::pair{"midpoint.csv", &midpoint}, std::pair{"rk2.csv", &rk2}}) {
    auto manifest = base_manifest("paper-experiment", traj->method, kPaperStep, kPaperEnd);
    manifest["input"] = "omega:0,-0.1,-2";
    manifest["q0"] = "identity";
    manifest["record_every"] = "1";
    manifest["output"] = (dir / name).string();
    write_outputs(dir / name, io::trajectory_csv(*traj), manifest);
  }

  const BranchSummary m = summarize(midpoint);
  const BranchSummary r = summarize(rk2);
  const long long steps = step_count(kPaperEnd, kPaperStep);
  const double forecast = rk2_energy_forecast(kPaperThetaSq, kPaperStep, steps, 3);
  const double rel = std::abs(r.final_energy - forecast) / forecast;

  const bool ac1 = m.max_abs_energy_err <= kEnergyBudget && m.max_orth_defect <= kOrthBudget;
  const bool ac2 = r.monotone && rel <= kForecastRelTol;

  std::ostringstream summary;
  summary << "problem: S = hat(0, -0.1, -2), Q0 = I, h = 0.1, t in [0, 2000], steps = " << steps << '\n';
  summary << "midpoint (" << midpoint.method << "): max |energy_err| = " << io::format_double(m.max_abs_energy_err)
          << ", max orth_defect = " << io::format_double(m.max_orth_defect)
          << ", max |det_err| = " << io::format_double(m.max_abs_det_err) << '\n';
  summary << "rk2 (" << rk2.method << "): max |energy_err| = " << io::format_double(r.max_abs_energy_err)
          << ", final energy = " << io::format_double(r.final_energy)
          << ", forecast = " << io::format_double(forecast) << ", relative deviation = " << io::format_double(rel)
          << ", energy_err monotone = " << (r.monotone ? "yes" : "no") << '\n';
  summary << "criterion 1 (midpoint energy <= 1e-8, orthogonality <= 1e-9): " << (ac1 ? "PASS" : "FAIL") << '\n';
  summary << "criterion 2 (rk2 monotone growth, final energy within 0.5% of forecast): " << (ac2 ? "PASS" : "FAIL")
          << '\n';
  io::atomic_write(dir / "summary.txt", summary.str());
  out << summary.str();
  return 0;
}

// ---------------------------------------------------------------------------

struct GyroArgs {
  CommonRunArgs run;
  std::string input;
  std::string q0;
  bool reference = false;
  bool allow_nonorthogonal = false;
};

int cmd_gyro(const GyroArgs& a, std::ostream& out) {
  const GyroLog log = parse_gyro_csv(io::read_file(a.input));
  if (log.size() < 2) throw Error(ErrorKind::validation, "gyro log needs at least two samples");
  const Method method = resolve_method(a.run.method);

  OrthogonalState q0 = OrthogonalState::identity(3, log.samples().front().t);
  if (!a.q0.empty()) q0.q = read_matrix_file(a.q0);
  if (q0.q.rows() != 3) throw DimensionError("--q0 must be a 3x3 matrix");

  GyroOptions opts;
  opts.keep_snapshots = a.reference || !a.run.dump_q.empty();
  opts.allow_nonorthogonal = a.allow_nonorthogonal;
  if (!opts.allow_nonorthogonal) require_orthogonal(q0.q);

  const IntegratorConfig config{method, a.run.h, resolve_solver(a.run)};
  const Trajectory traj = propagate_gyro(log, config, q0, opts);

  std::vector<std::string> columns;
  std::vector<std::vector<double>> extra;
  double final_ref_err = 0.0;
  if (a.reference) {
    const Trajectory ref = reference_gyro(log, q0, true);
    std::vector<double> err;
    err.reserve(traj.records.size());
    for (std::size_t i = 0; i < traj.records.size(); ++i) {
      err.push_back((*traj.records[i].q - *ref.records.at(i).q).norm());
    }
    final_ref_err = err.back();
    columns.push_back("ref_err");
    extra.push_back(std::move(err));
  }

  auto manifest = base_manifest("gyro", traj.method, a.run.h, log.samples().back().t);
  manifest["input"] = a.input;
  manifest["q0"] = a.q0.empty() ? "identity" : a.q0;
  manifest["reference"] = a.reference ? "true" : "false";
  manifest["stage_solver"] = a.run.stage_solver;
  manifest["output"] = a.run.out;
  write_outputs(a.run.out, io::trajectory_csv(traj, columns, extra), manifest);
  if (!a.run.dump_q.empty()) io::atomic_write(a.run.dump_q, io::snapshot_dump(traj));

  out << "samples: " << log.size() << '\n';
  out << "records: " << traj.records.size() << '\n';
  if (a.reference) out << "final reference error: " << io::format_double(final_ref_err) << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structure-preserving integration of Q' = S Q with skew-symmetric S", "orthoflow"};
  app.set_version_flag("--version", ORTHOFLOW_VERSION);
  // `--h` is the step size, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  CheckTableauArgs check_args;
  auto* check = app.add_subcommand("check-tableau", "Inspect a Butcher tableau and its symplecticity defect");
  auto* name_opt = check->add_option("--name", check_args.name, "Built-in tableau name");
  auto* file_opt = check->add_option("--file", check_args.file, "Tableau file");
  name_opt->excludes(file_opt);
  check->require_option(1);

  PropagateArgs prop_args;
  auto* prop = app.add_subcommand("propagate", "Integrate Q' = S Q with a fixed step and write a trajectory CSV");
  prop->add_option("--method", prop_args.run.method, "Method label or tableau file")->required();
  auto* omega_opt = prop->add_option("--omega", prop_args.omega, "Angular rate wx,wy,wz (3x3 hat-map path)");
  auto* sfile_opt = prop->add_option("--s-file", prop_args.s_file, "Whitespace-separated MxM skew matrix");
  omega_opt->excludes(sfile_opt);
  prop->add_option("--h", prop_args.run.h, "Step size")->required()->check(CLI::PositiveNumber);
  prop->add_option("--t-end", prop_args.t_end, "End time (start is 0)")->required()->check(CLI::PositiveNumber);
  prop->add_option("--q0", prop_args.q0, "Initial matrix file (default identity)");
  prop->add_option("--record-every", prop_args.record_every, "Record every n steps")->check(CLI::PositiveNumber);
  prop->add_flag("--allow-nonorthogonal", prop_args.allow_nonorthogonal, "Accept a non-orthogonal --q0");
  prop->add_option("--out", prop_args.run.out, "Trajectory CSV path")->required();
  prop->add_option("--dump-q", prop_args.run.dump_q, "Also write matrix snapshots here");
  add_solver_flags(prop, prop_args.run);

  std::string paper_out;
  auto* paper = app.add_subcommand("paper-experiment", "Run the midpoint vs explicit RK2 energy benchmark");
  paper->add_option("--out", paper_out, "Output directory")->required();

  GyroArgs gyro_args;
  auto* gyro = app.add_subcommand("gyro", "Propagate attitude from a gyro CSV log");
  gyro->add_option("--input", gyro_args.input, "Gyro CSV (t,wx,wy,wz)")->required();
  gyro->add_option("--method", gyro_args.run.method, "Method label or tableau file")->required();
  gyro->add_option("--h", gyro_args.run.h, "Step size")->required()->check(CLI::PositiveNumber);
  gyro->add_option("--out", gyro_args.run.out, "Trajectory CSV path")->required();
  gyro->add_option("--q0", gyro_args.q0, "Initial attitude file (default identity)");
  gyro->add_flag("--reference", gyro_args.reference, "Add error columns against the exact per-interval flow");
  gyro->add_flag("--allow-nonorthogonal", gyro_args.allow_nonorthogonal, "Accept a non-orthogonal --q0");
  gyro->add_option("--dump-q", gyro_args.run.dump_q, "Also write matrix snapshots here");
  add_solver_flags(gyro, gyro_args.run);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << ORTHOFLOW_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*check) return cmd_check_tableau(check_args, out);
    if (*prop) {
      if (prop_args.omega.empty() == prop_args.s_file.empty()) {
        throw UsageError("propagate needs exactly one of --omega or --s-file");
      }
      return cmd_propagate(prop_args, out);
    }
    if (*paper) return cmd_paper_experiment(paper_out, out);
    if (*gyro) return cmd_gyro(gyro_args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}

}  // namespace orthoflow::cli
