#include "filterint/io.hpp"

#include <cstdio>
#include <sstream>

namespace filterint {

namespace {

Json rational_list(const std::vector<Rational>& values) {
    Json out = Json::array();
    for (const auto& v : values) {
        out.push_back(v.str());
    }
    return out;
}

Json optional_rational(const std::optional<Rational>& value) {
    return value ? Json(value->str()) : Json(nullptr);
}

void add_approx(Json& object, const std::string& name, const std::optional<Rational>& value, bool approx) {
    if (approx) {
        object[name + "_approx"] = value ? Json(approx_decimal(*value)) : Json(nullptr);
    }
}

const nlohmann::json& require(const nlohmann::json& object, const std::string& key, const std::string& where) {
    if (!object.is_object() || !object.contains(key)) {
        throw FormatError(where + ": missing field \"" + key + "\"");
    }
    return object.at(key);
}

std::string require_string(const nlohmann::json& object, const std::string& key, const std::string& where) {
    const auto& value = require(object, key, where);
    if (!value.is_string()) {
        throw FormatError(where + ": field \"" + key + "\" must be a string");
    }
    return value.get<std::string>();
}

Interval domain_of(const nlohmann::json& descriptor) {
    if (descriptor.contains("domain")) {
        return interval_from_json(descriptor.at("domain"), "domain");
    }
    return Interval(Rational(0), Rational(1));
}

Json failure_json(const std::optional<FailedIndex>& failure) {
    if (!failure) {
        return nullptr;
    }
    Json out;
    out["index"] = failure->index;
    out["detail"] = failure->detail;
    out["counterexample"] = failure->counterexample ? to_json(*failure->counterexample) : Json(nullptr);
    return out;
}

}  // namespace

Json to_json(const Rational& value) {
    return value.str();
}

Json to_json(const Interval& interval) {
    return Json::array({interval.lo().str(), interval.hi().str()});
}

Json to_json(const TaggedPartition& tp) {
    Json out;
    out["domain"] = to_json(tp.domain());
    out["breakpoints"] = rational_list(tp.breakpoints());
    out["tags"] = rational_list(tp.tags());
    return out;
}

Json to_json(const RestrictionTrace& trace) {
    Json out;
    out["case"] = trace.case_id;
    out["left_tag_past_min_breakpoint"] =
        trace.left_tag_past_min_breakpoint ? Json(*trace.left_tag_past_min_breakpoint) : Json(nullptr);
    out["right_tag_before_max_breakpoint"] =
        trace.right_tag_before_max_breakpoint ? Json(*trace.right_tag_before_max_breakpoint) : Json(nullptr);
    out["dropped_outside_breakpoints"] = rational_list(trace.dropped_outside_breakpoints);
    out["dropped_interior_extremes"] = rational_list(trace.dropped_interior_extremes);
    out["dropped_tags"] = rational_list(trace.dropped_tags);
    out["added_endpoints"] = rational_list(trace.added_endpoints);
    return out;
}

Json to_json(const AxiomReport& report) {
    Json out;
    out["pairs_checked"] = report.pairs_checked;
    out["triples_checked"] = report.triples_checked;
    Json axioms = Json::object();
    for (const MetricAxiom axiom : {MetricAxiom::nonnegativity, MetricAxiom::symmetry, MetricAxiom::identity,
                                    MetricAxiom::triangle}) {
        const std::optional<AxiomViolation>* slot = nullptr;
        switch (axiom) {
            case MetricAxiom::nonnegativity: slot = &report.nonnegativity; break;
            case MetricAxiom::symmetry: slot = &report.symmetry; break;
            case MetricAxiom::identity: slot = &report.identity; break;
            case MetricAxiom::triangle: slot = &report.triangle; break;
        }
        Json entry;
        entry["passed"] = !slot->has_value();
        if (*slot) {
            entry["detail"] = (*slot)->detail;
            Json witnesses = Json::array();
            for (const auto& w : (*slot)->witnesses) {
                witnesses.push_back(to_json(w));
            }
            entry["witnesses"] = std::move(witnesses);
        }
        axioms[to_string(axiom)] = std::move(entry);
    }
    out["axioms"] = std::move(axioms);
    out["all_passed"] = report.all_passed();
    return out;
}

Json to_json(const SearchVerdict& verdict) {
    Json out;
    out["verdict"] = verdict.verified ? "verified" : "unknown";
    out["index_map"] = verdict.index_map;
    out["failure"] = failure_json(verdict.failure);
    return out;
}

Json to_json(const DominanceVerdict& verdict) {
    Json out;
    out["verdict"] = verdict.verified ? "verified" : "unknown";
    out["index_map"] = verdict.index_map;
    out["worst_distance"] = verdict.worst_distance.str();
    out["failure"] = failure_json(verdict.failure);
    return out;
}

Json to_json(const ComplementedVerdict& verdict) {
    Json out;
    out["index"] = verdict.index;
    out["verdict"] = verdict.verified ? "verified" : "unknown";
    out["inner_index"] = verdict.inner_index ? Json(*verdict.inner_index) : Json(nullptr);
    out["pairs_checked"] = verdict.pairs_checked;
    out["detail"] = verdict.detail;
    if (verdict.outer) {
        out["outer_left"] = verdict.outer->left ? to_json(*verdict.outer->left) : Json(nullptr);
        out["outer_right"] = verdict.outer->right ? to_json(*verdict.outer->right) : Json(nullptr);
    }
    if (verdict.failing_pair) {
        out["failing_pair"] = Json::array({to_json(verdict.failing_pair->first), to_json(verdict.failing_pair->second)});
    }
    return out;
}

Json to_json(const ConvergenceReport& report, bool approx) {
    Json out;
    out["integrand"] = report.integrand;
    out["base"] = report.base;
    out["verdict"] = to_string(report.verdict);
    out["estimate"] = optional_rational(report.estimate);
    add_approx(out, "estimate", report.estimate, approx);
    out["window"] = report.window;
    out["window_width"] = report.window_width.str();
    add_approx(out, "window_width", report.window_width, approx);
    out["tolerance"] = report.tolerance.str();
    Json records = Json::array();
    for (const auto& r : report.records) {
        Json row;
        row["index"] = r.index;
        row["n_samples"] = r.samples;
        row["min"] = r.min.str();
        row["max"] = r.max.str();
        row["mean"] = r.mean.str();
        row["width"] = r.width().str();
        add_approx(row, "mean", r.mean, approx);
        add_approx(row, "width", r.width(), approx);
        records.push_back(std::move(row));
    }
    out["records"] = std::move(records);
    if (report.witness) {
        Json w;
        w["index"] = report.witness->index;
        w["ordinal"] = report.witness->ordinal;
        w["cells"] = report.witness->partition.cell_count();
        w["lower_sum"] = report.witness->lower.str();
        w["upper_sum"] = optional_rational(report.witness->upper);
        out["oscillation_witness"] = std::move(w);
    } else {
        out["oscillation_witness"] = nullptr;
    }
    return out;
}

Json to_json(const SubsegmentReport& report, bool approx) {
    Json out;
    out["holds"] = report.holds;
    out["full"] = to_json(report.full, approx);
    out["restricted"] = to_json(report.restricted, approx);
    Json complemented = Json::array();
    for (const auto& v : report.complemented) {
        Json entry = to_json(v);
        entry.erase("outer_left");
        entry.erase("outer_right");
        complemented.push_back(std::move(entry));
    }
    out["complemented"] = std::move(complemented);
    Json cancellation = Json::array();
    for (const auto& c : report.cancellation) {
        cancellation.push_back(
            Json{{"index", c.index}, {"inner_index", c.inner_index}, {"pairs", c.pairs}, {"exact", c.exact}});
    }
    out["cancellation"] = std::move(cancellation);
    return out;
}

Rational rational_from_json(const nlohmann::json& value, const std::string& field) {
    if (value.is_number_integer()) {
        return Rational(value.get<std::int64_t>());
    }
    if (!value.is_string()) {
        throw FormatError("field \"" + field + "\" must be a rational string \"p/q\"");
    }
    try {
        return Rational::parse(value.get<std::string>());
    } catch (const RationalError& e) {
        throw FormatError("field \"" + field + "\": " + e.what());
    }
}

Interval interval_from_json(const nlohmann::json& value, const std::string& field) {
    if (!value.is_array() || value.size() != 2) {
        throw FormatError("field \"" + field + "\" must be a two-element array");
    }
    try {
        return Interval(rational_from_json(value[0], field), rational_from_json(value[1], field));
    } catch (const PartitionError& e) {
        throw FormatError("field \"" + field + "\": " + e.what());
    }
}

TaggedPartition partition_from_json(const nlohmann::json& value) {
    const Interval domain = interval_from_json(require(value, "domain", "partition"), "domain");
    auto list = [&](const std::string& key) {
        const auto& items = require(value, key, "partition");
        if (!items.is_array()) {
            throw FormatError("partition: field \"" + key + "\" must be an array");
        }
        std::vector<Rational> out;
        for (const auto& item : items) {
            out.push_back(rational_from_json(item, key));
        }
        return out;
    };
    return make_partition(domain, list("breakpoints"), list("tags"));
}

std::string dump_partition(const TaggedPartition& tp) {
    return to_json(tp).dump();
}

TaggedPartition parse_partition(const std::string& text) {
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("partition JSON: ") + e.what());
    }
    return partition_from_json(parsed);
}

FilterBase base_from_json(const nlohmann::json& descriptor, const SamplerConfig& config) {
    const std::string kind = require_string(descriptor, "kind", "base descriptor");
    try {
        if (kind == "mesh") {
            return mesh_base(domain_of(descriptor),
                             DeltaSchedule::parse(require_string(descriptor, "delta", "mesh descriptor")), config);
        }
        if (kind == "exact_tagged") {
            return exactly_tagged_base(
                domain_of(descriptor), PointSequence::parse(require_string(descriptor, "avoid", "exact_tagged descriptor")),
                DeltaSchedule::parse(require_string(descriptor, "delta", "exact_tagged descriptor")), config);
        }
        if (kind == "subsegment") {
            const FilterBase parent = base_from_json(require(descriptor, "of", "subsegment descriptor"), config);
            const Interval sub(rational_from_json(require(descriptor, "alpha", "subsegment descriptor"), "alpha"),
                               rational_from_json(require(descriptor, "beta", "subsegment descriptor"), "beta"));
            return induced_subsegment_base(parent, sub);
        }
    } catch (const FilterError& e) {
        throw FormatError(kind + " descriptor: " + e.what());
    } catch (const PartitionError& e) {
        throw FormatError(kind + " descriptor: " + e.what());
    }
    throw FormatError("unknown base kind \"" + kind + "\"");
}

FilterBase parse_base(const std::string& text, const SamplerConfig& config) {
    if (!text.empty() && text.front() == '{') {
        try {
            return base_from_json(nlohmann::json::parse(text), config);
        } catch (const nlohmann::json::parse_error& e) {
            throw FormatError(std::string("base descriptor JSON: ") + e.what());
        }
    }
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    nlohmann::json descriptor{{"kind", kind}};
    if (kind == "mesh" && !rest.empty()) {
        descriptor["delta"] = rest;
    } else if (kind == "exact_tagged") {
        const auto split = rest.find(':');
        if (split == std::string::npos) {
            throw FormatError("shorthand \"" + text + "\" must read exact_tagged:<avoid>:<delta>");
        }
        descriptor["avoid"] = rest.substr(0, split);
        descriptor["delta"] = rest.substr(split + 1);
    } else {
        throw FormatError("unknown base shorthand \"" + text + "\"");
    }
    return base_from_json(descriptor, config);
}

std::string approx_decimal(const Rational& value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.12g", value.to_double());
    return buffer;
}

std::string index_table_csv(const std::vector<IndexRecord>& records, bool approx) {
    std::ostringstream out;
    out << "index,n_samples,min,max,mean,width";
    if (approx) {
        out << ",mean_approx,width_approx";
    }
    out << '\n';
    for (const auto& r : records) {
        out << r.index << ',' << r.samples << ',' << r.min << ',' << r.max << ',' << r.mean << ',' << r.width();
        if (approx) {
            out << ',' << approx_decimal(r.mean) << ',' << approx_decimal(r.width());
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace filterint
