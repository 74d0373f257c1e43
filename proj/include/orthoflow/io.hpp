#pragma once

#include "orthoflow/diagnostics.hpp"
#include "orthoflow/linalg.hpp"

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace orthoflow::io {

/// printf("%.17g"); round-trips every double.
std::string format_double(double v);

/// Header `t,E,E_err,orth_defect,det_err`, plus one column per entry of
/// `extra_columns` whose values come from `extra` (one vector per column,
/// one value per record).
std::string trajectory_csv(const Trajectory& traj, const std::vector<std::string>& extra_columns = {},
                           const std::vector<std::vector<double>>& extra = {});

/// One flattened row-major matrix per line, prefixed by the record time.
/// Records without a snapshot are skipped.
std::string snapshot_dump(const Trajectory& traj);

/// Flat key=value lines in key order.
std::string manifest_text(const std::map<std::string, std::string>& fields);

/// Writes to a temporary sibling and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Manifest file path for an output file: `<path>.manifest`.
std::filesystem::path manifest_path(const std::filesystem::path& output);

/// Whitespace-separated square matrix, one row per line; '#' lines skipped.
SquareMatrix read_matrix(std::istream& in);

std::string read_file(const std::filesystem::path& path);

}  // namespace orthoflow::io
