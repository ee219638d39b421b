#include <gtest/gtest.h>

#include <sstream>

#include "filterint/io.hpp"
#include "support/oracles.hpp"

using namespace filterint;

namespace {

const Interval kUnit(Rational(0), Rational(1));

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

TEST(PartitionJson, CanonicalText) {
    const auto tp = make_partition(kUnit, {0, Rational(1, 3), 1}, {Rational(1, 6), Rational(2, 3)});
    EXPECT_EQ(dump_partition(tp), R"({"domain":["0","1"],"breakpoints":["0","1/3","1"],"tags":["1/6","2/3"]})");
}

TEST(PartitionJson, RoundTripsRandomPartitions) {
    oracle::TestRng rng(71);
    const Interval domain(Rational(-3, 2), Rational(5, 7));
    for (int i = 0; i < 200; ++i) {
        const auto tp = oracle::random_partition(rng, domain, 15, 64);
        const auto text = dump_partition(tp);
        const auto back = parse_partition(text);
        EXPECT_EQ(back, tp);
        EXPECT_EQ(dump_partition(back), text);
    }
}

TEST(PartitionJson, AcceptsIntegerNumbersAndRejectsMalformedInput) {
    const auto tp = parse_partition(R"({"domain":[0,1],"breakpoints":[0,"1/2",1],"tags":["1/4","1"]})");
    EXPECT_EQ(tp.tags().back(), Rational(1));
    for (const char* bad : {R"(not json)", R"({"domain":[0,1],"breakpoints":[0,1]})",
                            R"({"domain":[0],"breakpoints":[0,1],"tags":["1/2"]})",
                            R"({"domain":[0,1],"breakpoints":[0,1],"tags":[0.5]})",
                            R"({"domain":[0,1],"breakpoints":"0,1","tags":["1/2"]})"}) {
        EXPECT_THROW(parse_partition(bad), FormatError) << bad;
    }
    try {
        parse_partition(R"({"domain":[0,1],"breakpoints":[0,"1/2",1],"tags":["3/4","7/8"]})");
        FAIL() << "expected a PartitionError";
    } catch (const PartitionError& e) {
        EXPECT_EQ(e.kind(), PartitionErrorKind::tag_outside_cell);
    }
}

TEST(BaseDescriptor, JsonAndShorthandAgree) {
    const auto from_json = parse_base(R"({"kind":"mesh","delta":"1/2^k"})");
    const auto shorthand = parse_base("mesh:1/2^k");
    EXPECT_EQ(from_json.kind(), BaseKind::mesh);
    EXPECT_EQ(from_json.description(), shorthand.description());
    EXPECT_EQ(from_json.draw(5, 3, 9), shorthand.draw(5, 3, 9));

    const auto exact = parse_base("exact_tagged:1/n:1/k");
    EXPECT_EQ(exact.kind(), BaseKind::exactly_tagged);
    EXPECT_FALSE(exact.is_member(1, make_partition(kUnit, {0, 1}, {Rational(1, 2)})));
    EXPECT_TRUE(exact.avoid()->contains(Rational(1, 9)));
}

TEST(BaseDescriptor, DomainAndSubsegment) {
    const auto shifted = parse_base(R"({"kind":"mesh","delta":"1/k","domain":["-1","2"]})");
    EXPECT_EQ(shifted.domain(), Interval(Rational(-1), Rational(2)));
    const auto sub = parse_base(R"({"kind":"subsegment","of":{"kind":"mesh","delta":"1/k"},"alpha":"1/4","beta":"3/4"})");
    EXPECT_EQ(sub.kind(), BaseKind::subsegment);
    EXPECT_EQ(sub.domain(), Interval(Rational(1, 4), Rational(3, 4)));
}

TEST(BaseDescriptor, SamplerConfigIsApplied) {
    SamplerConfig config;
    config.denominator_bound = 8;
    EXPECT_EQ(parse_base("mesh:1/k", config).config().denominator_bound, 8);
}

TEST(BaseDescriptor, Errors) {
    for (const char* bad : {"", "mesh", "mesh:", "mesh:1/j", "exact_tagged:1/k", "grid:1/k", "{\"kind\":\"mesh\"}",
                            "{\"kind\":\"cube\",\"delta\":\"1/k\"}", "{\"kind\":", R"({"delta":"1/k"})",
                            R"({"kind":"subsegment","of":{"kind":"mesh","delta":"1/k"},"alpha":"1/2","beta":"3/2"})"}) {
        EXPECT_THROW(parse_base(bad), FormatError) << bad;
    }
}

TEST(ReportJson, ConvergenceReportFields) {
    EstimateOptions o;
    o.depth = 4;
    o.samples = 5;
    o.tolerance = Rational(1, 10);
    const auto report = estimate_filter_limit(Integrand::constant(Rational(2)), parse_base("mesh:1/k"), o);
    const auto exact = to_json(report);
    EXPECT_EQ(exact["verdict"], "converged");
    EXPECT_EQ(exact["estimate"], "2");
    EXPECT_FALSE(exact.contains("estimate_approx"));
    EXPECT_EQ(exact["records"].size(), 4U);
    const auto approx = to_json(report, true);
    EXPECT_EQ(approx["estimate_approx"], "2");
    EXPECT_TRUE(approx["records"][0].contains("mean_approx"));
}

TEST(ReportJson, CsvRowsMatchJsonRecords) {
    EstimateOptions o;
    o.depth = 5;
    o.samples = 8;
    o.tolerance = Rational(1, 10);
    const auto report = estimate_filter_limit(Integrand::identity(), parse_base("mesh:1/2^k"), o);
    const auto json = to_json(report);
    for (bool approx : {false, true}) {
        const auto rows = split_csv(index_table_csv(report.records, approx));
        ASSERT_EQ(rows.size(), report.records.size() + 1);
        const std::vector<std::string> header{"index", "n_samples", "min", "max", "mean", "width"};
        EXPECT_EQ(std::vector<std::string>(rows[0].begin(), rows[0].begin() + 6), header);
        EXPECT_EQ(rows[0].size(), approx ? 8U : 6U);
        for (std::size_t i = 0; i < report.records.size(); ++i) {
            const auto& row = rows[i + 1];
            const auto& record = json["records"][i];
            EXPECT_EQ(std::stoul(row[0]), record["index"].get<std::size_t>());
            EXPECT_EQ(std::stoul(row[1]), record["n_samples"].get<std::size_t>());
            for (std::size_t c = 2; c < 6; ++c) {
                EXPECT_EQ(Rational::parse(row[c]), Rational::parse(record[header[c]].get<std::string>()));
            }
        }
    }
}

TEST(ReportJson, TraceFields) {
    const auto tp = make_partition(kUnit, {0, Rational(1, 2), 1}, {Rational(1, 4), Rational(3, 4)});
    const auto r = restrict_to(tp, Interval(Rational(3, 8), Rational(7, 8)));
    const auto json = to_json(r.trace);
    EXPECT_EQ(json.dump(),
              R"({"case":3,"left_tag_past_min_breakpoint":true,"right_tag_before_max_breakpoint":false,)"
              R"("dropped_outside_breakpoints":["0","1"],"dropped_interior_extremes":["1/2"],)"
              R"("dropped_tags":["1/4"],"added_endpoints":["3/8","7/8"]})");
}

TEST(ApproxDecimal, TwelveSignificantDigits) {
    EXPECT_EQ(approx_decimal(Rational(1, 3)), "0.333333333333");
    EXPECT_EQ(approx_decimal(Rational(-5, 2)), "-2.5");
}
