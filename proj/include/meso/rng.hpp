#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace meso::rng {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent substream seed for worker `stream` of a master seed.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 1));
}

inline Engine make_engine(std::uint64_t seed) { return Engine(splitmix64(seed)); }

// The distributions below are hand-rolled so that identical seeds give
// identical streams on every platform; the standard distribution classes
// are implementation-defined.

/// Uniform double in [0, 1).
inline double uniform(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform(Engine& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform(eng);
}

/// Uniform integer in [0, n).
inline std::size_t uniform_index(Engine& eng, std::size_t n) {
  return static_cast<std::size_t>(eng() % n);
}

/// Standard normal via Box-Muller; consumes two engine draws per value.
inline double normal(Engine& eng) {
  double u1 = uniform(eng);
  double u2 = uniform(eng);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline double normal(Engine& eng, double mean, double sd) {
  return mean + sd * normal(eng);
}

/// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& v, Engine& eng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = uniform_index(eng, i);
    std::swap(v[i - 1], v[j]);
  }
}

/// Random permutation of 0..n-1.
inline std::vector<std::size_t> permutation(std::size_t n, Engine& eng) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  shuffle(p, eng);
  return p;
}

}  // namespace meso::rng
