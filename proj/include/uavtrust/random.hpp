#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace uavtrust {

using Rng = std::mt19937_64;

/// Independent stream for (seed, tags...). Streams are derived through
/// std::seed_seq.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

double uniform01(Rng& rng);
double standard_normal(Rng& rng);

}  // namespace uavtrust
