#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "filterint/filters.hpp"
#include "filterint/integrator.hpp"
#include "filterint/metric.hpp"
#include "filterint/partition.hpp"
#include "filterint/restriction.hpp"
#include "filterint/subsegment.hpp"

namespace filterint {

using Json = nlohmann::ordered_json;

class FormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

Json to_json(const Rational& value);
Json to_json(const Interval& interval);
Json to_json(const TaggedPartition& tp);
Json to_json(const RestrictionTrace& trace);
Json to_json(const AxiomReport& report);
Json to_json(const SearchVerdict& verdict);
Json to_json(const DominanceVerdict& verdict);
Json to_json(const ComplementedVerdict& verdict);
Json to_json(const SubsegmentReport& report, bool approx = false);
/// With approx, every rational field gets a lossy "<name>_approx" decimal.
Json to_json(const ConvergenceReport& report, bool approx = false);

/// Rationals are "p/q" strings; integers may omit "/q".
Rational rational_from_json(const nlohmann::json& value, const std::string& field);
Interval interval_from_json(const nlohmann::json& value, const std::string& field);
TaggedPartition partition_from_json(const nlohmann::json& value);

/// Canonical compact text: {"domain":[..],"breakpoints":[..],"tags":[..]}.
std::string dump_partition(const TaggedPartition& tp);
TaggedPartition parse_partition(const std::string& text);

/// Descriptor JSON: {"kind":"mesh","delta":"1/k"},
/// {"kind":"exact_tagged","avoid":"1/n","delta":"1/k"},
/// {"kind":"subsegment","of":<descriptor>,"alpha":"1/4","beta":"3/4"};
/// "domain":["lo","hi"] is optional and defaults to [0, 1].
FilterBase base_from_json(const nlohmann::json& descriptor, const SamplerConfig& config = {});
/// Descriptor JSON text or shorthand "mesh:<delta>", "exact_tagged:<avoid>:<delta>".
FilterBase parse_base(const std::string& text, const SamplerConfig& config = {});

/// Lossy decimal rendering for human reading.
std::string approx_decimal(const Rational& value);

/// index,n_samples,min,max,mean,width[,mean_approx,width_approx]
std::string index_table_csv(const std::vector<IndexRecord>& records, bool approx = false);

}  // namespace filterint
