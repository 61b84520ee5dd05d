#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "jpf/inside.hpp"
#include "jpf/seq_model.hpp"

namespace jpf {

/// Generator of draw `index` in a batch seeded with `seed`: mt19937_64
/// seeded through SplitMix64, so every draw has its own stream.
std::mt19937_64 draw_stream(std::uint64_t seed, std::uint64_t index);

/// Uniform variate on [0,1) with 53 random bits.
double uniform01(std::mt19937_64& rng);

/// Draws one joint structure with probability weight / q_total.
/// Throws Error(NumericalUnderflow) if a cell's terms fail to add up to the
/// stored value within 1e-6.
JointStructure sample_one(const InsideResult& in, std::mt19937_64& rng);

struct SampleBatch {
  std::vector<JointStructure> structures;
  std::uint64_t seed = 0;
  std::string fingerprint;
  std::size_t draws = 0;
};

/// `count` draws, draw k using draw_stream(seed, k). Threads only change
/// speed, never the result.
SampleBatch sample_batch(const InsideResult& in, std::size_t count, std::uint64_t seed,
                         int threads = 1);

}  // namespace jpf
