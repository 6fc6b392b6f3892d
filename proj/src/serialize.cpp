#include "lhasimoto/serialize.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace lh::io {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // keep a float marker so integral values (and -0) come back as doubles
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace {

std::string header(double t, const char* kind, long lo) {
  return "{\"t\":" + format_double(t) + ",\"kind\":\"" + kind + "\",\"lo\":" + std::to_string(lo) +
         ",\"values\":[";
}

void append_list(std::string& s, std::initializer_list<double> xs) {
  s += '[';
  bool first = true;
  for (double x : xs) {
    if (!first) s += ',';
    s += format_double(x);
    first = false;
  }
  s += ']';
}

}  // namespace

std::string to_record(double t, const ALField& f) {
  std::string s = header(t, "al", f.window().lo);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) s += ',';
    append_list(s, {f.values()[i].real(), f.values()[i].imag()});
  }
  return s + "]}";
}

std::string to_record(double t, const SpinField& f) {
  std::string s = header(t, "spin", f.window().lo);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) s += ',';
    const Vec3& v = f.values()[i];
    append_list(s, {v.x(), v.y(), v.z()});
  }
  return s + "]}";
}

std::string to_record(double t, const FrameSequence& f) {
  std::string s = header(t, "frame", f.window().lo);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) s += ',';
    const Mat3& m = f.frames()[i].matrix();
    append_list(s, {m(0, 0), m(0, 1), m(0, 2), m(1, 0), m(1, 1), m(1, 2), m(2, 0), m(2, 1),
                    m(2, 2)});
  }
  return s + "]}";
}

Record parse_record(const std::string& line) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("trajectory record: ") + e.what());
  }
  try {
    Record r;
    r.t = j.at("t").get<double>();
    const std::string kind = j.at("kind").get<std::string>();
    const long lo = j.at("lo").get<long>();
    const json& values = j.at("values");
    if (values.empty()) throw ParameterError("trajectory record: empty values");
    const Window w(lo, lo + static_cast<long>(values.size()) - 1);
    if (kind == "al") {
      std::vector<Complex> v;
      v.reserve(values.size());
      for (const auto& e : values) {
        if (e.size() != 2) throw ParameterError("al record: complex entries need 2 floats");
        v.emplace_back(e[0].get<double>(), e[1].get<double>());
      }
      r.state = ALField(w, std::move(v));
    } else if (kind == "spin") {
      std::vector<Vec3> v;
      v.reserve(values.size());
      for (const auto& e : values) {
        if (e.size() != 3) throw ParameterError("spin record: vectors need 3 floats");
        v.emplace_back(e[0].get<double>(), e[1].get<double>(), e[2].get<double>());
      }
      r.state = SpinField(w, std::move(v));
    } else if (kind == "frame") {
      std::vector<Rotation> v;
      v.reserve(values.size());
      for (const auto& e : values) {
        if (e.size() != 9) throw ParameterError("frame record: rotations need 9 floats");
        Mat3 m;
        for (int k = 0; k < 9; ++k) m(k / 3, k % 3) = e[k].get<double>();
        v.emplace_back(m);
      }
      r.state = FrameSequence(w, std::move(v));
    } else {
      throw ParameterError("trajectory record: unknown kind '" + kind + "'");
    }
    return r;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("trajectory record: ") + e.what());
  }
}

std::vector<Record> read_records(std::istream& in) {
  std::vector<Record> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_record(line));
  }
  return out;
}

template <typename State>
void write_trajectory(std::ostream& out, const Trajectory<State>& traj) {
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << to_record(traj.time(i), traj.state(i)) << '\n';
  }
}

template <typename State>
Trajectory<State> read_trajectory(std::istream& in) {
  Trajectory<State> traj;
  for (auto& rec : read_records(in)) {
    auto* s = std::get_if<State>(&rec.state);
    if (s == nullptr) throw ParameterError("trajectory file mixes record kinds");
    traj.push_back(rec.t, std::move(*s));
  }
  return traj;
}

template void write_trajectory(std::ostream&, const Trajectory<ALField>&);
template void write_trajectory(std::ostream&, const Trajectory<SpinField>&);
template void write_trajectory(std::ostream&, const Trajectory<FrameSequence>&);
template Trajectory<ALField> read_trajectory(std::istream&);
template Trajectory<SpinField> read_trajectory(std::istream&);
template Trajectory<FrameSequence> read_trajectory(std::istream&);

void write_scalar_csv(std::ostream& out, const std::vector<ScalarRow>& rows) {
  out << "t,name,value\n";
  for (const auto& r : rows) {
    out << format_double(r.t) << ',' << r.name << ',' << format_double(r.value) << '\n';
  }
}

}  // namespace lh::io
