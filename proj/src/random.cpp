#include "filterint/random.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace filterint {

namespace {

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
    std::uint64_t state = seed;
    for (auto& word : s_) {
        word = splitmix64(state);
    }
}

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("Rng::below requires a positive bound");
    }
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = next();
    while (x >= limit) {
        x = next();
    }
    return x % bound;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) {
        throw std::invalid_argument("Rng::between requires lo <= hi");
    }
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(below(span));
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index, std::uint64_t ordinal) {
    std::uint64_t state = seed;
    std::uint64_t h = splitmix64(state);
    state = h ^ (index * 0xd1b54a32d192ed03ULL);
    h = splitmix64(state);
    state = h ^ (ordinal * 0xabc98388fb8fac03ULL);
    return splitmix64(state);
}

Rational random_tag(const Rational& lo, const Rational& hi, Rng& rng, std::int64_t denominator_bound) {
    const std::int64_t u = rng.between(0, denominator_bound);
    return lo + (hi - lo) * Rational(u, denominator_bound);
}

TaggedPartition random_partition(const Interval& domain, Rng& rng, std::size_t max_cells,
                                 std::int64_t denominator_bound) {
    if (denominator_bound < 2 || max_cells == 0) {
        throw std::invalid_argument("random_partition needs denominator bound >= 2 and max_cells >= 1");
    }
    const auto cap = std::min<std::int64_t>(static_cast<std::int64_t>(max_cells), denominator_bound);
    const std::int64_t cells = rng.between(1, cap);

    // Floyd's algorithm: cells - 1 distinct lattice points from {1..D-1}.
    std::unordered_set<std::int64_t> chosen;
    for (std::int64_t j = denominator_bound - cells + 1; j < denominator_bound; ++j) {
        const std::int64_t pick = rng.between(1, j);
        if (!chosen.insert(pick).second) {
            chosen.insert(j);
        }
    }
    std::vector<std::int64_t> lattice(chosen.begin(), chosen.end());
    std::sort(lattice.begin(), lattice.end());

    const Rational length = domain.length();
    std::vector<Rational> xi{domain.lo()};
    for (const auto j : lattice) {
        xi.push_back(domain.lo() + length * Rational(j, denominator_bound));
    }
    xi.push_back(domain.hi());

    std::vector<Rational> tags;
    tags.reserve(xi.size() - 1);
    for (std::size_t k = 0; k + 1 < xi.size(); ++k) {
        Rational tag = random_tag(xi[k], xi[k + 1], rng, denominator_bound);
        while (!tags.empty() && tags.back() == tag) {
            tag = random_tag(xi[k], xi[k + 1], rng, denominator_bound);
        }
        tags.push_back(std::move(tag));
    }
    return make_partition(domain, std::move(xi), std::move(tags));
}

std::vector<Rational> jittered_mesh_breakpoints(const Interval& domain, const Rational& delta, Rng& rng,
                                                std::int64_t lattice, std::size_t max_cells) {
    if (lattice < 4 || lattice % 4 != 0) {
        throw std::invalid_argument("mesh lattice must be a positive multiple of 4");
    }
    if (delta.sign() <= 0) {
        throw std::invalid_argument("mesh bound must be positive");
    }
    // Cells span at most 3/2 of the nominal width L/n, so n > 3L/(2 delta) suffices.
    const Rational ratio = Rational(3) * domain.length() / (Rational(2) * delta);
    const mpz_class minimal = floor(ratio) + 1;
    if (minimal > mpz_class(static_cast<unsigned long>(max_cells / 2))) {
        throw std::length_error("mesh bound " + delta.str() + " needs more than " + std::to_string(max_cells) +
                                " cells");
    }
    const auto m = static_cast<std::int64_t>(minimal.get_si());
    const std::int64_t cells = rng.between(m, 2 * m);
    const std::int64_t jitter = lattice / 4;

    const Rational unit = domain.length() / Rational(cells * lattice);
    std::vector<Rational> xi;
    xi.reserve(static_cast<std::size_t>(cells) + 1);
    xi.push_back(domain.lo());
    for (std::int64_t i = 1; i < cells; ++i) {
        const std::int64_t position = i * lattice + rng.between(-jitter, jitter);
        xi.push_back(domain.lo() + unit * Rational(position));
    }
    xi.push_back(domain.hi());
    return xi;
}

}  // namespace filterint
