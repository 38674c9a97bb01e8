#pragma once

#include <iosfwd>
#include <string>

#include "ckls/model.hpp"

namespace ckls {

/// Shortest decimal representation of v that parses back to the same
/// double (round-trip formatting; locale independent).
std::string format_double(double v);

/// Strict double parser for the same format. Throws InvalidParameter on
/// trailing garbage or empty input.
double parse_double(const std::string& text);

/// Writes the path as CSV with header `t,r` and one row per grid point.
void write_path_csv(const SamplePath& path, std::ostream& out);
void write_path_csv(const SamplePath& path, const std::string& filename);

/// Reads a `t,r` CSV back into a path, checking that the time column is
/// strictly increasing and uniform.
SamplePath read_path_csv(std::istream& in);
SamplePath read_path_csv(const std::string& filename);

} // namespace ckls
