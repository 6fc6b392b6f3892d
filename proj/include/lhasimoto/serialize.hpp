#pragma once

// JSON-lines trajectory files and CSV scalar diagnostics.
//
// One record per line:
//   {"t": <float>, "kind": "al"|"spin"|"frame", "lo": <int>, "values": [...]}
// complex -> [re, im], vector -> [x, y, z], rotation -> 9 row-major floats.
// Floats are written with 17 significant digits so a read-back is bit-exact.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "lhasimoto/core.hpp"

namespace lh::io {

std::string format_double(double x);

std::string to_record(double t, const ALField& f);
std::string to_record(double t, const SpinField& f);
std::string to_record(double t, const FrameSequence& f);

using AnyState = std::variant<ALField, SpinField, FrameSequence>;

struct Record {
  double t = 0.0;
  AnyState state;
};

/// Parses one line. Throws ParameterError on malformed input.
Record parse_record(const std::string& line);
std::vector<Record> read_records(std::istream& in);

template <typename State>
void write_trajectory(std::ostream& out, const Trajectory<State>& traj);

/// Reads a file whose records all have the requested kind.
template <typename State>
Trajectory<State> read_trajectory(std::istream& in);

struct ScalarRow {
  double t;
  std::string name;
  double value;
};

/// CSV with header "t,name,value".
void write_scalar_csv(std::ostream& out, const std::vector<ScalarRow>& rows);

}  // namespace lh::io
