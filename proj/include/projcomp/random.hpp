// Deterministic random streams. A stream is keyed by (seed, label, index) so
// results never depend on evaluation order or thread count.
#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "projcomp/field.hpp"

namespace projcomp {

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a_u64(std::uint64_t v, std::uint64_t h) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_key(std::uint64_t seed, std::string_view label, std::uint64_t index) {
  return splitmix64(fnv1a_u64(index, fnv1a(label, fnv1a_u64(seed, 0xcbf29ce484222325ULL))));
}

/// mt19937_64 with a bit-exact uniform mapping (std distributions are not
/// portable across standard libraries).
class Stream {
 public:
  explicit Stream(std::uint64_t key) : engine_(key) {}
  Stream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0) : engine_(stream_key(seed, label, index)) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Uniform point in the chart box, rejecting points near singular loci.
inline Point sample_point(const Chart& chart, Stream& s, int max_tries = 1000) {
  for (int t = 0; t < max_tries; ++t) {
    Point p;
    for (const auto& iv : chart.box) p.push_back(s.uniform(iv.lo, iv.hi));
    if (chart.admissible(p)) return p;
  }
  throw GeometryError("sample_point: no admissible point found in chart box");
}

/// `count` points, point i drawn from its own stream (seed, label, i).
inline std::vector<Point> sample_points(const Chart& chart, std::uint64_t seed, std::string_view label, int count) {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Stream s(seed, label, static_cast<std::uint64_t>(i));
    out.push_back(sample_point(chart, s));
  }
  return out;
}

}  // namespace projcomp
