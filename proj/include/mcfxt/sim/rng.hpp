#pragma once

#include <boost/random/normal_distribution.hpp>

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace mcfxt::sim {

/// What a random stream is used for; part of the stream key.
enum class StreamPurpose : std::uint32_t { Positions = 1, Phase = 2, PathPhase = 3 };

/// Deterministic engine keyed by (seed, purpose, indices...).  Independent keys give
/// statistically independent streams; the same key always yields the same sequence.
inline std::mt19937_64 make_stream(std::uint64_t seed, StreamPurpose purpose,
                                   std::initializer_list<std::uint32_t> indices) {
  std::vector<std::uint32_t> words;
  words.reserve(3 + indices.size());
  words.push_back(static_cast<std::uint32_t>(seed & 0xffffffffu));
  words.push_back(static_cast<std::uint32_t>(seed >> 32));
  words.push_back(static_cast<std::uint32_t>(purpose));
  words.insert(words.end(), indices.begin(), indices.end());
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

/// Gaussian increments drawn from one keyed engine (ziggurat sampler).
struct GaussianStream {
  std::mt19937_64 engine;
  boost::random::normal_distribution<double> normal{0.0, 1.0};

  double operator()() { return normal(engine); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
};

}  // namespace mcfxt::sim
