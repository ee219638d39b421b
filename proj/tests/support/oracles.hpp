#pragma once

// Independent reference implementations for tests. Nothing here calls the
// library code it is used to check.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "filterint/partition.hpp"

namespace oracle {

using filterint::Interval;
using filterint::Rational;
using filterint::TaggedPartition;

/// Small PCG-style generator, deliberately unrelated to the library's streams.
class TestRng {
public:
    explicit TestRng(std::uint64_t seed) : state_(seed * 2 + 1) { next(); }

    std::uint32_t next() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + 1442695040888963407ULL;
        const auto shifted = static_cast<std::uint32_t>(((old >> 18U) ^ old) >> 27U);
        const auto rot = static_cast<std::uint32_t>(old >> 59U);
        return (shifted >> rot) | (shifted << ((32U - rot) & 31U));
    }

    /// Uniform in [0, bound) by rejection.
    std::uint32_t below(std::uint32_t bound) {
        const std::uint32_t limit = UINT32_MAX - UINT32_MAX % bound;
        std::uint32_t x = 0;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

private:
    std::uint64_t state_;
};

/// Random tagged partition of `domain` on the lattice lo + L*j/D with tags on
/// the cell lattice xi + len*u/D; adjacent tags never coincide.
inline TaggedPartition random_partition(TestRng& rng, const Interval& domain, std::uint32_t max_cells,
                                        std::uint32_t denominator) {
    const std::uint32_t cells = 1 + rng.below(std::min(max_cells, denominator));
    std::vector<std::uint32_t> lattice(denominator - 1);
    std::iota(lattice.begin(), lattice.end(), 1U);
    for (std::uint32_t i = 0; i + 1 < cells; ++i) {
        std::swap(lattice[i], lattice[i + rng.below(static_cast<std::uint32_t>(lattice.size()) - i)]);
    }
    std::vector<std::uint32_t> cuts(lattice.begin(), lattice.begin() + (cells - 1));
    std::sort(cuts.begin(), cuts.end());
    const Rational L = domain.length();
    std::vector<Rational> xi{domain.lo()};
    for (const auto c : cuts) {
        xi.push_back(domain.lo() + L * Rational(c, denominator));
    }
    xi.push_back(domain.hi());
    std::vector<Rational> tags;
    for (std::size_t k = 0; k + 1 < xi.size(); ++k) {
        Rational tag;
        do {
            tag = xi[k] + (xi[k + 1] - xi[k]) * Rational(rng.below(denominator + 1), denominator);
        } while (!tags.empty() && tags.back() == tag);
        tags.push_back(tag);
    }
    return filterint::make_partition(domain, std::move(xi), std::move(tags));
}

/// Three-sum form of rho: shared tags, tags only in a, tags only in b.
/// Quadratic scans over tag vectors, no maps.
inline Rational three_sum_rho(const TaggedPartition& a, const TaggedPartition& b) {
    auto find = [](const TaggedPartition& tp, const Rational& t) -> std::optional<std::size_t> {
        for (std::size_t k = 0; k < tp.cell_count(); ++k) {
            if (tp.tags()[k] == t) {
                return k;
            }
        }
        return std::nullopt;
    };
    Rational shared;
    Rational only_a;
    Rational only_b;
    for (std::size_t k = 0; k < a.cell_count(); ++k) {
        const Rational len = a.breakpoints()[k + 1] - a.breakpoints()[k];
        if (const auto j = find(b, a.tags()[k])) {
            const Rational other = b.breakpoints()[*j + 1] - b.breakpoints()[*j];
            shared += len < other ? other - len : len - other;
        } else {
            only_a += len;
        }
    }
    for (std::size_t k = 0; k < b.cell_count(); ++k) {
        if (!find(a, b.tags()[k])) {
            only_b += b.breakpoints()[k + 1] - b.breakpoints()[k];
        }
    }
    return shared + only_a + only_b;
}

/// sum over n = 1..cutoff of n * l(tp, point(n)), scanning every cell per n.
template <class Point>
Rational brute_cover_sum(const TaggedPartition& tp, Point point, std::int64_t cutoff) {
    Rational total;
    for (std::int64_t n = 1; n <= cutoff; ++n) {
        const Rational t = point(n);
        for (std::size_t k = 0; k < tp.cell_count(); ++k) {
            if (tp.tags()[k] == t) {
                total += Rational(n) * (tp.breakpoints()[k + 1] - tp.breakpoints()[k]);
            }
        }
    }
    return total;
}

/// Integral of sum c_i t^i over [a, b] via the antiderivative.
inline Rational polynomial_integral(const std::vector<Rational>& c, const Rational& a, const Rational& b) {
    Rational total;
    Rational pa = a;
    Rational pb = b;
    for (std::size_t i = 0; i < c.size(); ++i) {
        total += c[i] * (pb - pa) / Rational(static_cast<std::int64_t>(i + 1));
        pa *= a;
        pb *= b;
    }
    return total;
}

/// True when t = 1/n for a positive integer n, tested on the reduced form.
inline bool is_unit_fraction(const Rational& t) {
    return t.sign() > 0 && t.numerator() == 1;
}

}  // namespace oracle
