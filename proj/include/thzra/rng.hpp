#pragma once

#include <cstdint>
#include <random>

namespace thzra {

enum class RngComponent : std::uint64_t {
    Absorption = 1,
    Fading = 2,
    Misalignment = 3,
    Access = 4,
};

using Engine = std::mt19937_64;

/// Independent engine for one (seed, trial, component) triple.
/// Streams do not depend on thread count or evaluation order.
Engine make_stream(std::uint64_t seed, std::uint64_t trial, RngComponent component);

/// Uniform on the open interval (0, 1).
double open_uniform(Engine& eng);

/// Worker count for parallel loops; honours THZRA_MAX_PARALLEL and
/// set_parallel_limit (0 clears the limit).
unsigned max_parallel();
void set_parallel_limit(unsigned limit);

}  // namespace thzra
