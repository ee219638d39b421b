#include "filterint/theorem_suite.hpp"

#include <algorithm>
#include <functional>

#include "filterint/parallel.hpp"

namespace filterint {

std::string to_string(SuiteStatus status) {
    switch (status) {
        case SuiteStatus::pass: return "pass";
        case SuiteStatus::fail: return "fail";
        case SuiteStatus::unknown: return "unknown";
    }
    return "unknown";
}

std::size_t TheoremSuiteResult::count(SuiteStatus status) const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [&](const SuiteEntry& e) { return e.status == status; }));
}

Json TheoremSuiteResult::to_json() const {
    Json out;
    out["seed"] = seed;
    Json list = Json::array();
    for (const auto& e : entries) {
        Json entry;
        entry["id"] = e.id;
        entry["statement"] = e.statement;
        entry["instance"] = e.instance;
        entry["status"] = to_string(e.status);
        entry["artifact"] = e.artifact ? Json(*e.artifact) : Json(nullptr);
        entry["details"] = e.details;
        list.push_back(std::move(entry));
    }
    out["entries"] = std::move(list);
    out["summary"] = Json{{"pass", count(SuiteStatus::pass)},
                          {"fail", count(SuiteStatus::fail)},
                          {"unknown", count(SuiteStatus::unknown)}};
    return out;
}

const std::vector<std::string>& suite_manifest() {
    static const std::vector<std::string> ids{
        "riemann-recovery",        "boundedness-lemma",      "boundedness-mesh",
        "boundedness-finer-mesh",  "linearity",              "metric-axioms",
        "subset-implies-dominance", "dominance-transfer",    "exactly-tagged-unbounded",
        "cover-sum-sufficient",    "cover-sum-necessary",    "subsegment-integration",
        "dirichlet-not-cauchy",
    };
    return ids;
}

namespace {

const Interval kUnit(Rational(0), Rational(1));

SuiteStatus status_of(bool pass, bool unknown = false) {
    if (pass) {
        return SuiteStatus::pass;
    }
    return unknown ? SuiteStatus::unknown : SuiteStatus::fail;
}

/// Exactly-tagged samples whose cells around 1/2, 1/3, 1/4 are retagged at
/// those points: tags hit {1/n} only for n <= 4, so 0 < sum n*l(t_n) < 1.
FilterBase sparse_hit_base() {
    const AvoidSet harmonic = PointSequence::harmonic();
    const FilterBase inner = exactly_tagged_base(kUnit, harmonic, DeltaSchedule::geometric(Rational(1, 8), Rational(2)));
    auto membership = [harmonic](std::size_t k, const TaggedPartition& tp) {
        if (!(diameter(tp) < Rational(1, 8) / pow(Rational(2), static_cast<unsigned>(k)))) {
            return false;
        }
        return std::all_of(tp.tags().begin(), tp.tags().end(), [&](const Rational& t) {
            const auto n = harmonic.index_of(t);
            return !n || *n <= 4;
        });
    };
    auto draw = [inner](std::size_t k, std::size_t ordinal, Rng& rng) {
        const TaggedPartition base = inner.draw(k, ordinal, rng.next());
        std::vector<Rational> tags = base.tags();
        const auto& xi = base.breakpoints();
        for (const Rational& point : {Rational(1, 2), Rational(1, 3), Rational(1, 4)}) {
            const auto upper = std::upper_bound(xi.begin(), xi.end(), point);
            const auto cell = static_cast<std::size_t>(upper - xi.begin()) - 1;
            const auto k_cell = std::min(cell, tags.size() - 1);
            const bool clash = (k_cell > 0 && tags[k_cell - 1] == point) ||
                               (k_cell + 1 < tags.size() && tags[k_cell + 1] == point);
            if (!clash) {
                tags[k_cell] = point;
            }
        }
        return make_partition(base.domain(), xi, std::move(tags));
    };
    return FilterBase::custom(kUnit, membership, draw, "sparse_hit(points=1/2,1/3,1/4, delta=1/8/2^k)");
}

struct Suite {
    SuiteOptions options;
    TheoremSuiteResult result;
    FilterBase mesh = mesh_base(kUnit, DeltaSchedule::parse("1/2^k"));
    FilterBase mesh_harmonic = mesh_base(kUnit, DeltaSchedule::parse("1/k"));
    FilterBase exact = exactly_tagged_base(kUnit, PointSequence::harmonic(), DeltaSchedule::parse("1/k"));
    FilterBase exact_geometric = exactly_tagged_base(kUnit, PointSequence::harmonic(), DeltaSchedule::parse("1/2^k"));
    std::optional<ConvergenceReport> identity_mesh;

    EstimateOptions estimate(std::size_t depth, std::size_t samples, Rational tolerance) const {
        EstimateOptions o;
        o.depth = depth;
        o.samples = samples;
        o.tolerance = std::move(tolerance);
        o.seed = options.seed;
        o.jobs = options.jobs;
        return o;
    }

    SearchOptions search(std::size_t depth, std::size_t samples) const {
        SearchOptions s;
        s.depth = depth;
        s.samples = samples;
        s.seed = options.seed;
        s.jobs = options.jobs;
        return s;
    }

    SuiteEntry& add(std::string id, std::string statement, std::string instance) {
        SuiteEntry e;
        e.id = std::move(id);
        e.statement = std::move(statement);
        e.instance = std::move(instance);
        result.entries.push_back(std::move(e));
        return result.entries.back();
    }

    void attach_table(SuiteEntry& entry, const ConvergenceReport& report) {
        entry.artifact = "tables/" + entry.id + ".csv";
        entry.table_csv = index_table_csv(report.records, options.approx);
    }

    void riemann_recovery() {
        auto& e = add("riemann-recovery", "over the mesh filter the filter integral is the Riemann integral",
                      "f(t)=t, mesh delta=1/2^k, depth 10, 20 samples, tol 1/500; oracle 1/2");
        identity_mesh = estimate_filter_limit(Integrand::identity(), mesh, estimate(10, 20, Rational(1, 500)));
        const auto& r = *identity_mesh;
        const bool converged = r.verdict == LimitVerdict::converged;
        e.status = status_of(converged && abs(*r.estimate - Rational(1, 2)) < r.tolerance,
                             r.verdict == LimitVerdict::inconclusive);
        e.details = to_json(r, options.approx);
        attach_table(e, r);
    }

    void boundedness_lemma() {
        auto& e = add("boundedness-lemma", "an integrable Riemann sum is bounded on some member of the filter",
                      "f(t)=t, mesh delta=1/2^k: probe at the final index gives C <= |I| + tol + 1");
        const auto& r = *identity_mesh;
        if (r.verdict != LimitVerdict::converged) {
            e.status = SuiteStatus::unknown;
            e.details = Json{{"reason", "estimate did not converge"}};
            return;
        }
        ProbeOptions p;
        p.first_index = r.records.size();
        p.depth = r.records.size();
        p.samples = r.records.back().samples;
        p.seed = options.seed;
        p.jobs = options.jobs;
        const auto probe = probe_f_boundedness(Integrand::identity(), mesh, p);
        const Rational limit = abs(*r.estimate) + r.tolerance + Rational(1);
        e.status = status_of(probe.certificate && !(limit < probe.certificate->bound));
        e.details = Json{{"bound", probe.certificate ? Json(probe.certificate->bound.str()) : Json(nullptr)},
                         {"index", p.depth},
                         {"limit", limit.str()}};
    }

    void boundedness_mesh() {
        auto& e = add("boundedness-mesh", "a function integrable over the mesh filter is bounded",
                      "f(t)=t^2 converges and is bounded; the unbounded spike at 1/n is not Cauchy over mesh");
        const auto square = estimate_filter_limit(Integrand::parse("polynomial:0,0,1"), mesh,
                                                  estimate(8, 15, Rational(1, 100)));
        const Integrand spike = Integrand::parse("spike:1/n");
        const auto spiky = estimate_filter_limit(spike, mesh, estimate(6, 10, Rational(1, 100)));
        const bool pass = square.verdict == LimitVerdict::converged && Integrand::parse("polynomial:0,0,1").is_bounded() &&
                          spiky.verdict == LimitVerdict::not_cauchy && !spike.is_bounded();
        e.status = status_of(pass, square.verdict == LimitVerdict::inconclusive);
        e.details = Json{{"square", to_json(square, options.approx)}, {"spike", to_json(spiky, options.approx)}};
        attach_table(e, square);
    }

    void boundedness_finer_mesh() {
        auto& e = add("boundedness-finer-mesh",
                      "if every member of a filter contains a mesh set, integrable functions are bounded",
                      "filter mesh delta=1/k contains mesh sets delta=1/2^k; f(t)=t^2 converges and is bounded");
        const auto subset = check_subset(mesh_harmonic, mesh, search(5, 20));
        const Integrand square = Integrand::parse("polynomial:0,0,1");
        const auto report = estimate_filter_limit(square, mesh_harmonic, estimate(40, 10, Rational(1, 20)));
        e.status = status_of(subset.verified && report.verdict == LimitVerdict::converged && square.is_bounded(),
                             !subset.verified || report.verdict == LimitVerdict::inconclusive);
        e.details = Json{{"subset", to_json(subset)}, {"estimate", to_json(report, options.approx)}};
    }

    void linearity() {
        auto& e = add("linearity", "the filter integral is linear",
                      "2*t - 3*t^2 over mesh delta=1/2^k, depth 8, 15 samples, tol 1/100; per-sample identity exact");
        const auto report = check_linearity(Integrand::identity(), Integrand::parse("polynomial:0,0,1"), Rational(2),
                                            Rational(-3), mesh, estimate(8, 15, Rational(1, 100)));
        e.status = status_of(report.holds);
        e.details = Json{{"expected", report.expected.str()},
                         {"combined", to_json(report.combined, options.approx)},
                         {"deviation", report.deviation ? Json(report.deviation->str()) : Json(nullptr)},
                         {"per_sample_exact", report.per_sample_exact}};
        attach_table(e, report.combined);
    }

    void metric_axioms() {
        auto& e = add("metric-axioms", "rho is a metric on tagged partitions",
                      "40 seeded random partitions of [0,1], denominator bound 64, all pairs and triples");
        const auto sample = parallel_map(40, options.jobs, [&](std::size_t i) {
            Rng rng(derive_stream(options.seed, 0, i));
            return random_partition(kUnit, rng, 12, 64);
        });
        const auto report = check_metric_axioms(sample);
        e.status = status_of(report.all_passed());
        e.details = to_json(report);
    }

    void subset_implies_dominance() {
        auto& e = add("subset-implies-dominance", "a finer filter rho-dominates a coarser one",
                      "exactly-tagged (1/n, 1/k) inside mesh 1/k; identity projector, epsilon 1/100, depth 5");
        const auto subset = check_subset(mesh_harmonic, exact, search(5, 20));
        const auto dominance =
            check_rho_dominance(mesh_harmonic, exact, Rational(1, 100), identity_projector(), search(5, 20));
        e.status = status_of(subset.verified && dominance.verified && dominance.worst_distance.is_zero(),
                             !subset.verified);
        e.details = Json{{"subset", to_json(subset)}, {"dominance", to_json(dominance)}};
    }

    void dominance_transfer() {
        auto& e = add("dominance-transfer", "a rho-dominating filter has the same integral for bounded f",
                      "f(t)=t, mesh 1/2^k dominated by exactly-tagged (1/n, 1/2^k); estimates within 2*tol");
        const auto dominance =
            check_rho_dominance(mesh, exact_geometric, Rational(1, 100), identity_projector(), search(5, 20));
        const auto& dominated = *identity_mesh;
        const auto dominating =
            estimate_filter_limit(Integrand::identity(), exact_geometric, estimate(10, 20, Rational(1, 500)));
        const bool both = dominated.verdict == LimitVerdict::converged && dominating.verdict == LimitVerdict::converged;
        const bool close = both && abs(*dominated.estimate - *dominating.estimate) < Rational(2) * dominated.tolerance;
        e.status = status_of(dominance.verified && close, !dominance.verified || !both);
        e.details = Json{{"dominance", to_json(dominance)}, {"dominating", to_json(dominating, options.approx)}};
        attach_table(e, dominating);
    }

    void exactly_tagged_unbounded() {
        auto& e = add("exactly-tagged-unbounded", "an exactly tagged filter integrates some unbounded function",
                      "spike f(1/n)=n over exactly-tagged (1/n, 1/k), depth 20, 20 samples");
        const Integrand spike = Integrand::parse("spike:1/n");
        const auto report = estimate_filter_limit(spike, exact, estimate(20, 20, Rational(1, 1000)));
        const bool all_zero = std::all_of(report.records.begin(), report.records.end(), [](const IndexRecord& r) {
            return r.min.is_zero() && r.max.is_zero();
        });
        const auto big = point_exceeding(spike, Rational(1000000));
        const auto not_finer = check_subset(exact, mesh, search(1, 50));
        e.status = status_of(report.verdict == LimitVerdict::converged && report.estimate->is_zero() && all_zero &&
                             big && !spike.is_bounded() && !not_finer.verified);
        e.details = Json{{"estimate", to_json(report, options.approx)},
                         {"value_above_1e6", big ? Json{{"t", big->first.str()}, {"f", big->second.str()}} : Json(nullptr)},
                         {"contains_mesh_set", to_json(not_finer)}};
        attach_table(e, report);
    }

    struct CoverCheck {
        bool below_bound = true;
        bool sums_match = true;
        Rational worst;
    };

    CoverCheck cover_check(const FilterBase& base, std::size_t index, std::size_t samples, const PointSequence& points,
                           const Integrand& witness) const {
        struct One {
            Rational cover;
            bool exact = true;
            Rational sum;
        };
        const auto rows = parallel_map(samples, options.jobs, [&](std::size_t i) {
            const TaggedPartition tp = base.draw(index, i, options.seed);
            const CoverSum c = weighted_cover_sum(tp, points, mpz_class(1000000));
            return One{c.value, c.truncation_exact, riemann_sum(witness, tp)};
        });
        CoverCheck out;
        for (const auto& r : rows) {
            out.below_bound = out.below_bound && r.exact && r.cover < Rational(1) && abs(r.sum) < Rational(1);
            out.sums_match = out.sums_match && r.sum == r.cover;
            out.worst = max(out.worst, r.cover);
        }
        return out;
    }

    void cover_sum_sufficient() {
        auto& e = add("cover-sum-sufficient",
                      "points with sum n*l(t_n) < 1 on a filter member give an unbounded f with bounded sums",
                      "t_n = 1/n; exactly-tagged (1/n, 1/k) at index 10 and a sparse-hit base at index 4, 30 samples");
        const PointSequence points = PointSequence::harmonic();
        const Integrand witness = build_unbounded_witness(points);
        const auto exact_check = cover_check(exact, 10, 30, points, witness);
        const auto hit_check = cover_check(sparse_hit_base(), 4, 30, points, witness);
        const auto big = point_exceeding(witness, Rational(1000000));
        e.status = status_of(exact_check.below_bound && exact_check.sums_match && hit_check.below_bound &&
                             hit_check.sums_match && hit_check.worst.sign() > 0 && big.has_value());
        e.details = Json{{"exact_tagged_worst_cover_sum", exact_check.worst.str()},
                         {"sparse_hit_worst_cover_sum", hit_check.worst.str()},
                         {"witness_value_above_1e6", big ? Json(big->second.str()) : Json(nullptr)}};
    }

    void cover_sum_necessary() {
        auto& e = add("cover-sum-necessary",
                      "an unbounded f with bounded sums gives points with sum n*l(alpha_n) < 1",
                      "spike f(1/n)=n over the sparse-hit base; certificate (C, k) from the probe, alpha_n = t_(q n)");
        const FilterBase base = sparse_hit_base();
        const Integrand f = build_unbounded_witness(PointSequence::harmonic());
        ProbeOptions p;
        p.depth = 6;
        p.samples = 30;
        p.seed = options.seed;
        p.jobs = options.jobs;
        const auto probe = probe_f_boundedness(f, base, p);
        if (!probe.certificate) {
            e.status = SuiteStatus::unknown;
            e.details = Json{{"reason", "no boundedness certificate"}};
            return;
        }
        const Rational c = probe.certificate->bound;
        const PointSequence alpha = dominating_points(f, c);
        bool dominates = true;
        for (mpz_class n = 1; n <= 1000; ++n) {
            dominates = dominates && !(f(*alpha.at(n)) < c * Rational(mpq_class(n)));
        }
        const auto rows = parallel_map(p.samples, options.jobs, [&](std::size_t i) {
            const TaggedPartition tp = base.draw(probe.certificate->index, i, options.seed);
            const CoverSum cover = weighted_cover_sum(tp, alpha, mpz_class(1000000));
            return cover.truncation_exact && cover.value < Rational(1) && !(riemann_sum(f, tp) / c < cover.value);
        });
        e.status = status_of(dominates && std::all_of(rows.begin(), rows.end(), [](bool b) { return b; }));
        e.details = Json{{"bound", c.str()}, {"index", probe.certificate->index}, {"alpha", alpha.text()}};
    }

    void subsegment_integration() {
        auto& e = add("subsegment-integration", "a function integrable on the domain is integrable on a subsegment",
                      "f(t)=t, mesh 1/2^k, sub [1/4,3/4], depth 9, 20 samples, tol 1/500, 20 pairs per index");
        SubsegmentOptions s;
        s.estimate = estimate(9, 20, Rational(1, 500));
        s.pairs = 20;
        try {
            const auto report = check_subsegment_integration(Integrand::identity(), mesh,
                                                             Interval(Rational(1, 4), Rational(3, 4)), s);
            const bool close = report.restricted.estimate &&
                               abs(*report.restricted.estimate - Rational(1, 4)) < s.estimate.tolerance;
            e.status = status_of(report.holds && close, report.restricted.verdict == LimitVerdict::inconclusive);
            e.details = to_json(report, options.approx);
            attach_table(e, report.restricted);
        } catch (const ComplementError& err) {
            e.status = SuiteStatus::unknown;
            e.details = Json{{"reason", err.what()}};
        }
    }

    void dirichlet_not_cauchy() {
        auto& e = add("dirichlet-not-cauchy", "the rational indicator is not integrable over the mesh filter",
                      "envelope sums (0, 1) on every sample; mesh 1/2^k, depth 6, 10 samples");
        const Integrand f = Integrand::dirichlet();
        const auto report = estimate_filter_limit(f, mesh, estimate(6, 10, Rational(1, 100)));
        const auto envelopes = parallel_map(10, options.jobs, [&](std::size_t i) {
            const EnvelopeSums s = envelope_sums(f, mesh.draw(6, i, options.seed));
            return s.lower && s.upper && s.lower->is_zero() && *s.upper == Rational(1);
        });
        e.status = status_of(report.verdict == LimitVerdict::not_cauchy &&
                             std::all_of(envelopes.begin(), envelopes.end(), [](bool b) { return b; }));
        e.details = to_json(report, options.approx);
    }
};

}  // namespace

TheoremSuiteResult run_theorem_suite(const SuiteOptions& options) {
    Suite suite;
    suite.options = options;
    suite.result.seed = options.seed;
    suite.riemann_recovery();
    suite.boundedness_lemma();
    suite.boundedness_mesh();
    suite.boundedness_finer_mesh();
    suite.linearity();
    suite.metric_axioms();
    suite.subset_implies_dominance();
    suite.dominance_transfer();
    suite.exactly_tagged_unbounded();
    suite.cover_sum_sufficient();
    suite.cover_sum_necessary();
    suite.subsegment_integration();
    suite.dirichlet_not_cauchy();
    return std::move(suite.result);
}

}  // namespace filterint
