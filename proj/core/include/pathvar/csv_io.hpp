#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pathvar/localtime.hpp"
#include "pathvar/paths.hpp"

namespace pathvar {

/// Header `t,x1,...,xd`, one row per sample. Times must form a uniform grid
/// starting at 0 (relative tolerance 1e-9).
SampledPath read_path_csv(std::istream& in);
SampledPath read_path_csv(const std::string& file);
void write_path_csv(std::ostream& out, const SampledPath& path);
void write_path_csv(const std::string& file, const SampledPath& path);

/// Header `t`, one partition point per row.
std::vector<double> read_partition_csv(std::istream& in);
void write_partition_csv(std::ostream& out, std::span<const double> times);

/// Header `x,L`.
void write_local_time_csv(std::ostream& out, const LocalTimeGrid& lt);

}  // namespace pathvar
