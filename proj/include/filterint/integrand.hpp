#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "filterint/filters.hpp"
#include "filterint/partition.hpp"

namespace filterint {

/// Bounds of f over all real t in a nondegenerate cell. An empty side is
/// infinite. `exact` means the bounds are the true inf and sup; otherwise
/// they only bracket them.
struct Envelope {
    std::optional<Rational> inf;
    std::optional<Rational> sup;
    bool exact = true;
};

/// Closed catalog of integrands with exact evaluation on rationals and an
/// envelope oracle per kind.
class Integrand {
public:
    enum class Kind { constant, identity, polynomial, step, spike, dirichlet, combination };

    static Integrand constant(Rational c);
    static Integrand identity();
    /// Coefficients in ascending degree order.
    static Integrand polynomial(std::vector<Rational> coefficients);
    /// values[i] on [breakpoints[i-1], breakpoints[i]); values.front() left of
    /// the first breakpoint, values.back() from the last one on.
    static Integrand step(std::vector<Rational> breakpoints, std::vector<Rational> values);
    /// scale * n at t = points.at(n), zero elsewhere; scale > 0.
    static Integrand spike(PointSequence points, Rational scale = Rational(1));
    /// Indicator of the rationals: 1 at every tag the library can represent,
    /// envelope (0, 1) on every cell.
    static Integrand dirichlet();
    static Integrand combination(std::vector<std::pair<Rational, Integrand>> terms);

    /// Catalog text: "constant:c", "identity", "polynomial:c0,c1,...",
    /// "step:b1,b2,...;v0,v1,...", "spike:<points>[;scale]", "dirichlet".
    static Integrand parse(const std::string& text);

    [[nodiscard]] Rational operator()(const Rational& t) const;
    [[nodiscard]] Envelope envelope(const Interval& cell) const;
    /// Whether f is bounded on every bounded interval.
    [[nodiscard]] bool is_bounded() const;
    [[nodiscard]] Kind kind() const;
    [[nodiscard]] std::string text() const;

    /// Spike data, for the unbounded-witness machinery.
    [[nodiscard]] const PointSequence* spike_points() const;
    [[nodiscard]] std::optional<Rational> spike_scale() const;

private:
    struct Constant {
        Rational c;
    };
    struct Identity {};
    struct Polynomial {
        std::vector<Rational> coefficients;
    };
    struct Step {
        std::vector<Rational> breakpoints;
        std::vector<Rational> values;
    };
    struct Spike {
        PointSequence points;
        Rational scale;
    };
    struct Dirichlet {};
    struct Combination {
        std::shared_ptr<const std::vector<std::pair<Rational, Integrand>>> terms;
    };
    using Data = std::variant<Constant, Identity, Polynomial, Step, Spike, Dirichlet, Combination>;

    explicit Integrand(Data data) : data_(std::move(data)) {}
    Data data_;
};

}  // namespace filterint
