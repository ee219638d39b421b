#pragma once

#include <cstddef>
#include <cstdint>

#include "filterint/partition.hpp"

namespace filterint {

/// xoshiro256** seeded through splitmix64. Draws are identical on every
/// platform, unlike the standard distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    /// Uniform on [0, bound), bound > 0. Rejection keeps it unbiased.
    std::uint64_t below(std::uint64_t bound);
    /// Uniform on [lo, hi], lo <= hi.
    std::int64_t between(std::int64_t lo, std::int64_t hi);

private:
    std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Independent stream id for (seed, index, ordinal). Sample j at index k is
/// reproducible without drawing samples 0..j-1 first.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index, std::uint64_t ordinal);

/// Sort-and-dedupe generator: n - 1 distinct interior breakpoints on the
/// lattice lo + L*j/D, tags xi + len*u/D. Cell count is uniform in
/// [1, min(max_cells, D)].
TaggedPartition random_partition(const Interval& domain, Rng& rng, std::size_t max_cells,
                                 std::int64_t denominator_bound);

/// Breakpoints of a jittered grid whose every cell is shorter than `delta`.
/// `lattice` must be a positive multiple of 4.
std::vector<Rational> jittered_mesh_breakpoints(const Interval& domain, const Rational& delta, Rng& rng,
                                                std::int64_t lattice, std::size_t max_cells);

/// Tag inside [lo, hi] on the grid lo + (hi-lo)*u/D, u uniform in {0..D}.
Rational random_tag(const Rational& lo, const Rational& hi, Rng& rng, std::int64_t denominator_bound);

}  // namespace filterint
