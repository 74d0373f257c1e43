#include "orthoflow/io.hpp"

#include "orthoflow/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace orthoflow::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trajectory_csv(const Trajectory& traj, const std::vector<std::string>& extra_columns,
                           const std::vector<std::vector<double>>& extra) {
  std::string out = "t,E,E_err,orth_defect,det_err";
  for (const auto& col : extra_columns) out += "," + col;
  out += '\n';
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    const StepRecord& r = traj.records[i];
    out += format_double(r.t);
    out += ',';
    out += format_double(r.energy);
    out += ',';
    out += format_double(r.energy_err);
    out += ',';
    out += format_double(r.orth_defect);
    out += ',';
    out += format_double(r.det_drift);
    for (const auto& col : extra) {
      out += ',';
      out += format_double(col.at(i));
    }
    out += '\n';
  }
  return out;
}

std::string snapshot_dump(const Trajectory& traj) {
  std::string out;
  for (const StepRecord& r : traj.records) {
    if (!r.q) continue;
    out += format_double(r.t);
    for (Eigen::Index i = 0; i < r.q->rows(); ++i) {
      for (Eigen::Index j = 0; j < r.q->cols(); ++j) {
        out += ' ';
        out += format_double((*r.q)(i, j));
      }
    }
    out += '\n';
  }
  return out;
}

std::string manifest_text(const std::map<std::string, std::string>& fields) {
  std::string out;
  for (const auto& [k, v] : fields) {
    out += k + "=" + v + "\n";
  }
  return out;
}

std::filesystem::path manifest_path(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".manifest");
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw UsageError("cannot write " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw UsageError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw UsageError("cannot move output into place at " + path.string());
  }
}

SquareMatrix read_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> line_numbers;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream is(line);
    std::vector<double> row;
    std::string tok;
    while (is >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw ParseError(line_no, "not a real number: '" + tok + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
    line_numbers.push_back(line_no);
  }
  if (rows.empty()) throw ParseError(line_no + 1, "empty matrix");
  const std::size_t m = rows.size();
  SquareMatrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != m) {
      throw ParseError(line_numbers[i], "row has " + std::to_string(rows[i].size()) + " entries, expected " +
                                            std::to_string(m));
    }
    for (std::size_t j = 0; j < m; ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  if (!a.allFinite()) throw ParseError(line_numbers.front(), "matrix has non-finite entries");
  return a;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw Error(ErrorKind::validation, "cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace orthoflow::io
