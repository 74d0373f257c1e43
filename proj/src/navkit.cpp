#include "orthoflow/navkit.hpp"

#include "orthoflow/errors.hpp"
#include "recorder.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace orthoflow {

GyroLog::GyroLog(std::vector<GyroSample> samples, const std::vector<std::size_t>& lines)
    : samples_(std::move(samples)) {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const std::size_t line = i < lines.size() ? lines[i] : i + 1;
    if (!std::isfinite(samples_[i].t)) {
      throw ParseError(line, "non-finite time");
    }
    if (i > 0 && !(samples_[i].t > samples_[i - 1].t)) {
      throw OrderingError(line, samples_[i - 1].t, samples_[i].t);
    }
  }
}

namespace {

double parse_field(std::string_view field, std::size_t line_no) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw ParseError(line_no, "not a finite real number: '" + std::string(field) + "'");
  }
  return v;
}

bool skippable(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

}  // namespace

GyroLog parse_gyro_csv(std::istream& in) {
  std::vector<GyroSample> samples;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (line != "t,wx,wy,wz") {
        throw ParseError(line_no, "expected header 't,wx,wy,wz'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 4) {
      throw ParseError(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    }
    GyroSample s;
    s.t = parse_field(fields[0], line_no);
    s.rate = AngularRate(parse_field(fields[1], line_no), parse_field(fields[2], line_no),
                         parse_field(fields[3], line_no));
    samples.push_back(s);
    lines.push_back(line_no);
  }
  if (!header_seen) {
    throw ParseError(line_no + 1, "missing header 't,wx,wy,wz'");
  }
  return GyroLog(std::move(samples), lines);
}

GyroLog parse_gyro_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_gyro_csv(in);
}

void require_orthogonal(const SquareMatrix& q, double tol) {
  const double defect = (q.transpose() * q - SquareMatrix::Identity(q.cols(), q.cols())).norm();
  if (!(defect <= tol)) {
    throw OrthogonalityError(defect, tol);
  }
}

namespace {

void check_log_start(const GyroLog& log, const OrthogonalState& q0) {
  if (log.size() < 2) {
    throw std::invalid_argument("gyro log needs at least two samples");
  }
  if (q0.t != log.samples().front().t) {
    throw std::invalid_argument("initial state time must equal the first sample time");
  }
  if (q0.q.rows() != 3 || q0.q.cols() != 3) {
    throw DimensionError("attitude matrix must be 3x3");
  }
}

}  // namespace

Trajectory propagate_gyro(const GyroLog& log, const IntegratorConfig& config, const OrthogonalState& q0,
                          const GyroOptions& options) {
  config.check();
  check_log_start(log, q0);
  if (!options.allow_nonorthogonal) require_orthogonal(q0.q);

  Trajectory traj;
  traj.method = config.method.label();
  traj.step = config.step;
  detail::Recorder recorder(traj, q0.q, options.keep_snapshots);
  recorder.record(q0);

  OrthogonalState state = q0;
  const auto& samples = log.samples();
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const SkewMatrix s = hat(samples[k].rate);
    state.t = samples[k].t;
    state = detail::advance_segment(config, s, state, samples[k + 1].t, options.record_every, recorder);
  }
  return traj;
}

Trajectory reference_gyro(const GyroLog& log, const OrthogonalState& q0, bool keep_snapshots) {
  check_log_start(log, q0);
  Trajectory traj;
  traj.method = "expm";
  traj.step = 0.0;
  detail::Recorder recorder(traj, q0.q, keep_snapshots);
  recorder.record(q0);

  OrthogonalState state = q0;
  const auto& samples = log.samples();
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const double dt = samples[k + 1].t - samples[k].t;
    state.q = expm(hat(samples[k].rate), dt) * state.q;
    state.t = samples[k + 1].t;
    recorder.record(state);
  }
  return traj;
}

}  // namespace orthoflow
