#include "filterint/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "filterint/io.hpp"
#include "filterint/theorem_suite.hpp"

namespace filterint::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const std::vector<std::string> kCommonKeys{"seed", "jobs", "out", "approx"};
const std::vector<std::string> kSamplerKeys{"denominator_bound", "tag_retry_cap", "restriction_retry_cap", "max_cells"};

std::string flag_name(const std::string& key) {
    std::string out = "--" + key;
    std::replace(out.begin(), out.end(), '_', '-');
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::size_t line_of(const std::string& text, std::size_t offset) {
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(
                                                                            std::min(offset, text.size())),
                                                   '\n'));
}

/// Merged view of --config and command-line values; the command line wins.
/// Remembers where each value came from for error messages.
class Settings {
public:
    void load_config(const std::string& path, const std::set<std::string>& allowed) {
        const std::string text = read_file(path);
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw UsageError(path + ":" + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) +
                             ": malformed JSON: " + e.what());
        }
        if (!parsed.is_object()) {
            throw UsageError(path + ":1: config must be a JSON object");
        }
        for (const auto& [key, value] : parsed.items()) {
            const auto at = text.find("\"" + key + "\"");
            const std::string origin = path + ":" + std::to_string(line_of(text, at == std::string::npos ? 0 : at));
            if (!allowed.count(key)) {
                throw UsageError(origin + ": unknown field \"" + key + "\"");
            }
            values_[key] = value;
            origins_[key] = origin + ": field \"" + key + "\"";
        }
    }

    void set_flag(const std::string& key, const std::string& value) {
        values_[key] = value;
        origins_[key] = flag_name(key);
    }

    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) > 0; }

    [[nodiscard]] std::string text(const std::string& key) const {
        const auto& v = require(key);
        if (v.is_string()) {
            return v.get<std::string>();
        }
        if (v.is_object()) {
            return v.dump();
        }
        fail(key, "expected a string");
    }

    [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const {
        return has(key) ? text(key) : fallback;
    }

    [[nodiscard]] std::uint64_t integer(const std::string& key, std::uint64_t fallback, std::uint64_t least = 1) const {
        if (!has(key)) {
            return fallback;
        }
        const auto& v = values_.at(key);
        std::uint64_t out = 0;
        if (v.is_number_unsigned()) {
            out = v.get<std::uint64_t>();
        } else if (v.is_string()) {
            const std::string s = v.get<std::string>();
            std::size_t used = 0;
            try {
                if (s.empty() || s.front() == '-') {
                    throw std::invalid_argument(s);
                }
                out = std::stoull(s, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != s.size() || used == 0) {
                fail(key, "expected a nonnegative integer, got \"" + s + "\"");
            }
        } else {
            fail(key, "expected a nonnegative integer");
        }
        if (out < least) {
            fail(key, "must be at least " + std::to_string(least));
        }
        return out;
    }

    [[nodiscard]] Rational rational(const std::string& key) const {
        const auto& v = require(key);
        try {
            return rational_from_json(v, key);
        } catch (const FormatError& e) {
            fail(key, e.what());
        }
    }

    [[nodiscard]] Rational positive_rational(const std::string& key, const Rational& fallback) const {
        if (!has(key)) {
            return fallback;
        }
        Rational r = rational(key);
        if (r.sign() <= 0) {
            fail(key, "must be positive");
        }
        return r;
    }

    [[nodiscard]] bool flag(const std::string& key) const {
        if (!has(key)) {
            return false;
        }
        const auto& v = values_.at(key);
        if (v.is_boolean()) {
            return v.get<bool>();
        }
        if (v.is_string() && (v == "true" || v == "1")) {
            return true;
        }
        if (v.is_string() && (v == "false" || v == "0")) {
            return false;
        }
        fail(key, "expected true or false");
    }

    [[noreturn]] void fail(const std::string& key, const std::string& message) const {
        const auto it = origins_.find(key);
        throw UsageError((it == origins_.end() ? flag_name(key) : it->second) + ": " + message);
    }

private:
    const nlohmann::json& require(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            throw UsageError("missing required " + flag_name(key) + " (flag or config field \"" + key + "\")");
        }
        return it->second;
    }

    std::map<std::string, nlohmann::json> values_;
    std::map<std::string, std::string> origins_;
};

struct Command {
    CLI::App* app = nullptr;
    std::vector<std::string> keys;
    std::map<std::string, std::string> raw;
    std::string config;
    bool approx = false;
};

void add_keys(Command& c, const std::vector<std::string>& keys, const std::map<std::string, std::string>& help) {
    for (const auto& key : keys) {
        c.keys.push_back(key);
        const auto h = help.find(key);
        c.app->add_option(flag_name(key), c.raw[key], h == help.end() ? key : h->second);
    }
}

Command& make_command(std::map<std::string, Command>& commands, CLI::App& app, const std::string& name,
                      const std::string& description, const std::vector<std::string>& keys) {
    static const std::map<std::string, std::string> help{
        {"seed", "seed of every sampled stream (mandatory for sampling commands)"},
        {"jobs", "worker threads; output does not depend on it"},
        {"out", "directory for report.json and tables/*.csv"},
        {"function", "integrand: identity | constant:c | polynomial:c0,c1,... | step:b;v | spike:pts[;s] | dirichlet"},
        {"base", "base descriptor JSON or shorthand mesh:<delta> | exact_tagged:<avoid>:<delta>"},
        {"depth", "number of base indices"},
        {"samples", "samples per index"},
        {"tol", "tolerance, rational p/q"},
        {"window", "trailing indices forming the Cauchy window"},
        {"alpha", "left end of the sub-interval"},
        {"beta", "right end of the sub-interval"},
        {"epsilon", "rho bound, rational > 0"},
        {"projector", "identity | perturb"},
        {"window_factor", "candidate indices j <= window_factor * k"},
        {"pairs", "restricted pairs per checked index"},
        {"complement_window", "inner indices tried per complemented check; 0 means 4*index"},
        {"count", "random partitions to draw"},
        {"cells", "maximum cells per random partition"},
        {"partition", "partition JSON file"},
        {"dominated", "base descriptor of the dominated base"},
        {"dominating", "base descriptor of the dominating base"},
        {"coarser", "base descriptor of the coarser base"},
        {"finer", "base descriptor of the finer base"},
        {"denominator_bound", "sampler lattice refinement D, multiple of 4"},
        {"tag_retry_cap", "tag redraws before an avoid-set sampler gives up"},
        {"restriction_retry_cap", "parent redraws for an empty restriction"},
        {"max_cells", "largest sampled cell count"},
    };
    Command& c = commands[name];
    c.app = app.add_subcommand(name, description);
    c.app->add_option("--config", c.config, "JSON config; flags override its fields");
    c.app->add_flag("--approx", c.approx, "add lossy decimal columns");
    std::vector<std::string> all = {"seed", "jobs", "out"};
    all.insert(all.end(), keys.begin(), keys.end());
    add_keys(c, all, help);
    return c;
}

Settings settings_for(const Command& c) {
    Settings s;
    std::set<std::string> allowed(c.keys.begin(), c.keys.end());
    allowed.insert("approx");
    if (!c.config.empty()) {
        s.load_config(c.config, allowed);
    }
    for (const auto& key : c.keys) {
        if (c.app->count(flag_name(key)) > 0) {
            s.set_flag(key, c.raw.at(key));
        }
    }
    if (c.approx) {
        s.set_flag("approx", "true");
    }
    return s;
}

SamplerConfig sampler_config(const Settings& s) {
    SamplerConfig config;
    config.denominator_bound = static_cast<std::int64_t>(s.integer("denominator_bound", 64, 4));
    if (config.denominator_bound % 4 != 0) {
        s.fail("denominator_bound", "must be a multiple of 4");
    }
    config.tag_retry_cap = s.integer("tag_retry_cap", config.tag_retry_cap);
    config.restriction_retry_cap = s.integer("restriction_retry_cap", config.restriction_retry_cap);
    config.max_cells = s.integer("max_cells", config.max_cells, 2);
    return config;
}

std::uint64_t seed_of(const Settings& s) {
    if (!s.has("seed")) {
        throw UsageError("missing required --seed (flag or config field \"seed\"); sampling is always seeded");
    }
    return s.integer("seed", 0, 0);
}

FilterBase base_of(const Settings& s, const std::string& key, const SamplerConfig& config) {
    try {
        return parse_base(s.text(key), config);
    } catch (const FormatError& e) {
        s.fail(key, e.what());
    }
}

Integrand integrand_of(const Settings& s) {
    try {
        return Integrand::parse(s.text("function"));
    } catch (const std::invalid_argument& e) {
        s.fail("function", e.what());
    }
}

EstimateOptions estimate_of(const Settings& s) {
    EstimateOptions o;
    o.depth = s.integer("depth", 12, 2);
    o.samples = s.integer("samples", 50);
    o.tolerance = s.positive_rational("tol", Rational(1, 1000));
    o.window = s.integer("window", 3);
    if (o.window > o.depth) {
        s.fail("window", "must not exceed depth");
    }
    o.seed = seed_of(s);
    o.jobs = s.integer("jobs", 1);
    return o;
}

SearchOptions search_of(const Settings& s) {
    SearchOptions o;
    o.depth = s.integer("depth", 5);
    o.samples = s.integer("samples", 100);
    o.window_factor = s.integer("window_factor", 4);
    o.seed = seed_of(s);
    o.jobs = s.integer("jobs", 1);
    return o;
}

struct Output {
    Json report;
    std::map<std::string, std::string> tables;
    int code = exit_pass;
    /// Printed instead of the JSON report when set.
    std::optional<std::string> plain;
};

int verdict_code(LimitVerdict v) {
    switch (v) {
        case LimitVerdict::converged: return exit_pass;
        case LimitVerdict::not_cauchy: return exit_fail;
        case LimitVerdict::inconclusive: return exit_unknown;
    }
    return exit_unknown;
}

Output run_integrate(const Settings& s) {
    const auto options = estimate_of(s);
    const auto report = estimate_filter_limit(integrand_of(s), base_of(s, "base", sampler_config(s)), options);
    Output out;
    out.report = to_json(report, s.flag("approx"));
    out.report["seed"] = options.seed;
    out.tables["indices.csv"] = index_table_csv(report.records, s.flag("approx"));
    out.code = verdict_code(report.verdict);
    return out;
}

Interval sub_of(const Settings& s) {
    const Rational alpha = s.rational("alpha");
    const Rational beta = s.rational("beta");
    if (!(alpha < beta)) {
        s.fail("beta", "must exceed alpha");
    }
    return Interval(alpha, beta);
}

Output run_subsegment(const Settings& s) {
    SubsegmentOptions options;
    options.estimate = estimate_of(s);
    options.pairs = s.integer("pairs", 200);
    options.complement_window = s.integer("complement_window", 0, 0);
    const FilterBase base = base_of(s, "base", sampler_config(s));
    const Interval sub = sub_of(s);
    if (!base.domain().contains(sub)) {
        s.fail("alpha", "sub-interval must lie inside the base domain");
    }
    Output out;
    try {
        const auto report = check_subsegment_integration(integrand_of(s), base, sub, options);
        out.report = to_json(report, s.flag("approx"));
        out.tables["full.csv"] = index_table_csv(report.full.records, s.flag("approx"));
        out.tables["restricted.csv"] = index_table_csv(report.restricted.records, s.flag("approx"));
        out.code = report.holds ? exit_pass
                                : (report.restricted.verdict == LimitVerdict::not_cauchy ? exit_fail : exit_unknown);
    } catch (const ComplementError& e) {
        out.report = Json{{"holds", false}, {"precondition", e.what()}};
        out.code = exit_unknown;
    }
    out.report["seed"] = options.estimate.seed;
    return out;
}

Output run_rho(const Settings& s, const std::string& a, const std::string& b) {
    TaggedPartition pa = parse_partition(read_file(a));
    TaggedPartition pb = parse_partition(read_file(b));
    (void)s;
    const RhoDistance d = rho(pa, pb);
    Output out;
    out.report = Json{{"a", a}, {"b", b}, {"distance", d.value().str()}};
    out.plain = d.value().str();
    return out;
}

Output run_check_metric(const Settings& s, const std::vector<std::string>& files) {
    std::vector<TaggedPartition> sample;
    Json source;
    if (!files.empty()) {
        for (const auto& f : files) {
            sample.push_back(parse_partition(read_file(f)));
        }
        source = Json{{"files", files}};
    } else {
        const std::uint64_t seed = seed_of(s);
        const std::size_t count = s.integer("count", 100);
        const std::size_t cells = s.integer("cells", 12);
        const auto bound = static_cast<std::int64_t>(s.integer("denominator_bound", 64, 4));
        for (std::size_t i = 0; i < count; ++i) {
            Rng rng(derive_stream(seed, 0, i));
            sample.push_back(random_partition(Interval(Rational(0), Rational(1)), rng, cells, bound));
        }
        source = Json{{"seed", seed}, {"count", count}, {"cells", cells}, {"denominator_bound", bound}};
    }
    const auto report = check_metric_axioms(sample);
    Output out;
    out.report = to_json(report);
    out.report["source"] = std::move(source);
    out.code = report.all_passed() ? exit_pass : exit_fail;
    return out;
}

Output run_dominance(const Settings& s) {
    const SamplerConfig config = sampler_config(s);
    const std::string name = s.text("projector", "identity");
    Projector projector;
    if (name == "identity") {
        projector = identity_projector();
    } else if (name == "perturb") {
        projector = tag_perturbation_projector();
    } else {
        s.fail("projector", "expected identity or perturb, got \"" + name + "\"");
    }
    const Rational epsilon = s.positive_rational("epsilon", Rational(1, 100));
    const auto verdict = check_rho_dominance(base_of(s, "dominated", config), base_of(s, "dominating", config),
                                             epsilon, projector, search_of(s));
    Output out;
    out.report = to_json(verdict);
    out.report["epsilon"] = epsilon.str();
    out.report["projector"] = name;
    out.code = verdict.verified ? exit_pass : exit_unknown;
    return out;
}

Output run_subset(const Settings& s) {
    const SamplerConfig config = sampler_config(s);
    const auto verdict = check_subset(base_of(s, "coarser", config), base_of(s, "finer", config), search_of(s));
    Output out;
    out.report = to_json(verdict);
    out.code = verdict.verified ? exit_pass : exit_unknown;
    return out;
}

Output run_restrict(const Settings& s) {
    const TaggedPartition tp = parse_partition(read_file(s.text("partition")));
    const Interval sub = sub_of(s);
    Output out;
    try {
        const Restriction r = restrict_to(tp, sub);
        out.report = Json{{"partition", to_json(r.partition)}, {"trace", to_json(r.trace)}};
    } catch (const RestrictionError& e) {
        out.report = Json{{"error", e.what()}, {"trace", e.trace() ? to_json(*e.trace()) : Json(nullptr)}};
        out.code = exit_fail;
    }
    return out;
}

Output run_suite(const Settings& s) {
    SuiteOptions options;
    options.seed = seed_of(s);
    options.jobs = s.integer("jobs", 1);
    options.approx = s.flag("approx");
    const auto result = run_theorem_suite(options);
    Output out;
    out.report = result.to_json();
    for (const auto& e : result.entries) {
        if (e.artifact) {
            out.tables[fs::path(*e.artifact).filename().string()] = e.table_csv;
        }
    }
    out.code = result.count(SuiteStatus::fail) ? exit_fail
                                               : (result.count(SuiteStatus::unknown) ? exit_unknown : exit_pass);
    return out;
}

void write_outputs(const Settings& s, const Output& output) {
    if (!s.has("out")) {
        return;
    }
    const fs::path dir = s.text("out");
    std::error_code ec;
    fs::create_directories(dir / "tables", ec);
    if (ec) {
        throw UsageError("cannot create " + (dir / "tables").string() + ": " + ec.message());
    }
    std::ofstream(dir / "report.json", std::ios::binary) << output.report.dump(2) << '\n';
    for (const auto& [name, csv] : output.tables) {
        std::ofstream(dir / "tables" / name, std::ios::binary) << csv;
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Filter integration over tagged partitions"};
    app.require_subcommand(1);
    std::map<std::string, Command> commands;
    auto with_sampler = [](std::vector<std::string> keys) {
        keys.insert(keys.end(), kSamplerKeys.begin(), kSamplerKeys.end());
        return keys;
    };

    make_command(commands, app, "integrate", "estimate the filter limit of Riemann sums",
                 with_sampler({"function", "base", "depth", "samples", "tol", "window"}));
    make_command(commands, app, "subsegment-integrate", "integrate over the base induced on [alpha, beta]",
                 with_sampler({"function", "base", "depth", "samples", "tol", "window", "alpha", "beta", "pairs",
                               "complement_window"}));
    Command& rho_cmd = make_command(commands, app, "rho", "exact rho distance between two partitions", {});
    std::string rho_a;
    std::string rho_b;
    rho_cmd.app->add_option("a", rho_a, "partition JSON file")->required();
    rho_cmd.app->add_option("b", rho_b, "partition JSON file")->required();
    Command& metric_cmd = make_command(commands, app, "check-metric", "check the metric axioms of rho",
                                      {"count", "cells", "denominator_bound"});
    std::vector<std::string> metric_files;
    metric_cmd.app->add_option("--partitions", metric_files, "partition JSON files instead of random ones");
    make_command(commands, app, "dominance", "sampled rho-dominance certificate",
                 with_sampler({"dominated", "dominating", "epsilon", "projector", "depth", "samples", "window_factor"}));
    make_command(commands, app, "subset", "sampled base inclusion certificate",
                 with_sampler({"coarser", "finer", "depth", "samples", "window_factor"}));
    make_command(commands, app, "restrict", "restrict a partition to [alpha, beta]", {"partition", "alpha", "beta"});
    make_command(commands, app, "theorem-suite", "run the fixed theorem manifest", {});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_pass : exit_usage;
    }

    const auto chosen = app.get_subcommands().front()->get_name();
    const Command& command = commands.at(chosen);
    Settings settings;
    auto fail = [&](int code, const std::string& message) {
        err << "error: " << message << '\n';
        std::string dir;
        if (settings.has("out")) {
            dir = settings.text("out");
        } else if (command.app->count("--out") > 0) {
            dir = command.raw.at("out");
        }
        if (!dir.empty()) {
            const Json report{{"command", chosen}, {"exit_code", code}, {"error", message}};
            std::error_code ec;
            fs::create_directories(fs::path(dir), ec);
            if (!ec) {
                std::ofstream(fs::path(dir) / "report.json", std::ios::binary) << report.dump(2) << '\n';
            }
        }
        return code;
    };
    try {
        settings = settings_for(command);
        Output output;
        if (chosen == "integrate") {
            output = run_integrate(settings);
        } else if (chosen == "subsegment-integrate") {
            output = run_subsegment(settings);
        } else if (chosen == "rho") {
            output = run_rho(settings, rho_a, rho_b);
        } else if (chosen == "check-metric") {
            output = run_check_metric(settings, metric_files);
        } else if (chosen == "dominance") {
            output = run_dominance(settings);
        } else if (chosen == "subset") {
            output = run_subset(settings);
        } else if (chosen == "restrict") {
            output = run_restrict(settings);
        } else {
            output = run_suite(settings);
        }
        output.report = Json{{"command", chosen}, {"exit_code", output.code}, {"result", std::move(output.report)}};
        write_outputs(settings, output);
        out << (output.plain ? *output.plain : output.report.dump(2)) << '\n';
        return output.code;
    } catch (const UsageError& e) {
        return fail(exit_usage, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(exit_usage, e.what());
    } catch (const PartitionError& e) {
        return fail(exit_usage, e.what());
    } catch (const std::exception& e) {
        return fail(exit_unknown, e.what());
    }
}

}  // namespace filterint::cli
