#include "orthoflow/tableau.hpp"

#include "orthoflow/errors.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace orthoflow {

bool is_explicit(const ButcherTableau& t) {
  const Eigen::Index s = t.a.rows();
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = i; j < s; ++j) {
      if (t.a(i, j) != 0.0) return false;
    }
  }
  return true;
}

TableauKind validate(const ButcherTableau& t) {
  const Eigen::Index s = t.b.size();
  if (s < 1) {
    throw ConsistencyError(0, "tableau has no stages");
  }
  if (t.a.rows() != s || t.a.cols() != s || t.c.size() != s) {
    throw ConsistencyError(0, "A must be s x s and b, c must have length s (s = " + std::to_string(s) + ")");
  }
  for (Eigen::Index i = 0; i < s; ++i) {
    const auto row = static_cast<std::size_t>(i + 1);
    if (!t.a.row(i).allFinite() || !std::isfinite(t.b(i)) || !std::isfinite(t.c(i))) {
      throw ConsistencyError(row, "non-finite coefficient");
    }
    const double row_sum = t.a.row(i).sum();
    if (std::abs(t.c(i) - row_sum) > kRowSumTolerance) {
      throw ConsistencyError(row, t.c(i), row_sum);
    }
  }
  return is_explicit(t) ? TableauKind::explicit_method : TableauKind::implicit_method;
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"midpoint", "rk2-explicit", "gauss2", "rk4-classical"};
  return names;
}

ButcherTableau builtin(std::string_view name) {
  ButcherTableau t;
  t.name = std::string(name);
  if (name == "midpoint") {
    t.a = Eigen::MatrixXd::Constant(1, 1, 0.5);
    t.b = Eigen::VectorXd::Constant(1, 1.0);
    t.c = Eigen::VectorXd::Constant(1, 0.5);
  } else if (name == "rk2-explicit") {
    t.a = Eigen::MatrixXd::Zero(2, 2);
    t.a(1, 0) = 0.5;
    t.b = Eigen::Vector2d(0.0, 1.0);
    t.c = Eigen::Vector2d(0.0, 0.5);
  } else if (name == "gauss2") {
    const double r = std::sqrt(3.0) / 6.0;
    t.a.resize(2, 2);
    t.a << 0.25, 0.25 - r,
           0.25 + r, 0.25;
    t.b = Eigen::Vector2d(0.5, 0.5);
    t.c = Eigen::Vector2d(0.5 - r, 0.5 + r);
  } else if (name == "rk4-classical") {
    t.a = Eigen::MatrixXd::Zero(4, 4);
    t.a(1, 0) = 0.5;
    t.a(2, 1) = 0.5;
    t.a(3, 2) = 1.0;
    t.b.resize(4);
    t.b << 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0;
    t.c.resize(4);
    t.c << 0.0, 0.5, 0.5, 1.0;
  } else {
    throw CatalogueError(std::string(name));
  }
  validate(t);
  return t;
}

SymplecticityReport symplecticity(const ButcherTableau& t) {
  const Eigen::MatrixXd bdiag = t.b.asDiagonal();
  SymplecticityReport r;
  r.m = bdiag * t.a + t.a.transpose() * bdiag - t.b * t.b.transpose();
  r.defect = r.m.norm();
  r.symplectic = r.defect <= kSymplecticTolerance;
  return r;
}

namespace {

std::vector<double> parse_reals(const std::string& line, std::size_t line_no) {
  std::vector<double> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      throw ParseError(line_no, "not a real number: '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

bool skippable(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

}  // namespace

ButcherTableau parse_tableau(std::istream& in, std::string name) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!skippable(line)) lines.emplace_back(line_no, line);
  }
  if (lines.empty()) {
    throw ParseError(line_no + 1, "missing stage count");
  }

  const auto& [count_line, count_text] = lines.front();
  std::istringstream cs(count_text);
  long long s = 0;
  std::string extra;
  if (!(cs >> s) || (cs >> extra) || s < 1) {
    throw ParseError(count_line, "expected a positive integer stage count");
  }
  const auto stages = static_cast<std::size_t>(s);
  if (lines.size() < stages + 2) {
    throw ParseError(line_no + 1, "expected " + std::to_string(stages) + " rows of A and a b line");
  }
  if (lines.size() > stages + 3) {
    throw ParseError(lines[stages + 3].first, "unexpected trailing line");
  }

  auto read_row = [&](std::size_t idx, const char* what) {
    const auto& [no, text] = lines[idx];
    auto vals = parse_reals(text, no);
    if (vals.size() != stages) {
      throw ParseError(no, std::string(what) + " has " + std::to_string(vals.size()) + " entries, expected " +
                               std::to_string(stages));
    }
    return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(stages)).eval();
  };

  ButcherTableau t;
  t.name = std::move(name);
  const auto n = static_cast<Eigen::Index>(stages);
  t.a.resize(n, n);
  for (std::size_t i = 0; i < stages; ++i) {
    t.a.row(static_cast<Eigen::Index>(i)) = read_row(1 + i, "row of A").transpose();
  }
  t.b = read_row(1 + stages, "b line");
  if (lines.size() == stages + 3) {
    t.c = read_row(2 + stages, "c line");
  } else {
    t.c = t.a.rowwise().sum();
  }
  validate(t);
  return t;
}

ButcherTableau parse_tableau(std::string_view text, std::string name) {
  std::istringstream in{std::string(text)};
  return parse_tableau(in, std::move(name));
}

std::string serialize_tableau(const ButcherTableau& t) {
  std::ostringstream os;
  os << std::setprecision(17);
  if (!t.name.empty()) os << "# " << t.name << '\n';
  os << t.stages() << '\n';
  auto write = [&](const auto& v) {
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (j) os << ' ';
      os << v(j);
    }
    os << '\n';
  };
  for (Eigen::Index i = 0; i < t.a.rows(); ++i) write(t.a.row(i));
  write(t.b);
  write(t.c);
  return os.str();
}

}  // namespace orthoflow
