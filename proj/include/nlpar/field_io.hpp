#pragma once

#include "nlpar/geometry.hpp"

#include <filesystem>
#include <iosfwd>

namespace nlpar::io {

// Binary layout (little endian):
//   char[4]  magic "NLPF"
//   uint32   format version (1)
//   int32    n
//   float64  L
//   int32    N
//   int32    M              (number of time levels minus one)
//   float64  s
//   float64  t_0 ... t_M
//   float64  values, level by level, each level holding N^n nodal values
//
// CSV layout:
//   # nlpar-field v1,n=<n>,L=<L>,N=<N>,M=<M>,s=<s>
//   t,u_0,u_1,...            one row per time level
// Numbers are written in shortest round-trip form, so both layouts reproduce
// the field exactly.

void write_binary(std::ostream& out, const SpaceTimeField& field);
SpaceTimeField read_binary(std::istream& in);
void write_csv(std::ostream& out, const SpaceTimeField& field);
SpaceTimeField read_csv(std::istream& in);

void save(const std::filesystem::path& path, const SpaceTimeField& field);
/// Format chosen by extension: ".csv" or anything else for binary.
SpaceTimeField load(const std::filesystem::path& path);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace nlpar::io
