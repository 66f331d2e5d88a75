#include "thzra/rng.hpp"

#include <algorithm>
#include <atomic>
#include <array>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <thread>

namespace thzra {
namespace {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::atomic<unsigned> g_parallel_limit{0};

}  // namespace

Engine make_stream(std::uint64_t seed, std::uint64_t trial, RngComponent component)
{
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state);
    state ^= trial * 0xd1b54a32d192ed03ULL;
    std::uint64_t b = splitmix64(state);
    state ^= static_cast<std::uint64_t>(component) * 0x8cb92ba72f3d8dd7ULL;
    std::uint64_t c = splitmix64(state);

    std::array<std::uint32_t, 8> words{};
    for (int i = 0; i < 2; ++i) {
        words[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(a >> (32 * i));
        words[static_cast<std::size_t>(2 + i)] = static_cast<std::uint32_t>(b >> (32 * i));
        words[static_cast<std::size_t>(4 + i)] = static_cast<std::uint32_t>(c >> (32 * i));
    }
    words[6] = static_cast<std::uint32_t>(trial);
    words[7] = static_cast<std::uint32_t>(component);
    std::seed_seq seq(words.begin(), words.end());
    return Engine(seq);
}

double open_uniform(Engine& eng)
{
    // 53 random bits, shifted off zero by half an ulp-step.
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

unsigned max_parallel()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("THZRA_MAX_PARALLEL")) {
        unsigned cap = 0;
        auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), cap);
        if (ec == std::errc() && cap > 0)
            n = std::min(n, cap);
    }
    if (unsigned limit = g_parallel_limit.load(); limit > 0)
        n = std::min(n, limit);
    return n;
}

void set_parallel_limit(unsigned limit)
{
    g_parallel_limit.store(limit);
}

}  // namespace thzra
