#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "filterint/io.hpp"

namespace filterint {

enum class SuiteStatus { pass, fail, unknown };

std::string to_string(SuiteStatus status);

struct SuiteEntry {
    std::string id;
    std::string statement;
    std::string instance;
    SuiteStatus status = SuiteStatus::unknown;
    Json details;
    /// Relative path of the per-index table, when the entry produces one.
    std::optional<std::string> artifact;
    std::string table_csv;
};

struct SuiteOptions {
    std::uint64_t seed = 7;
    std::size_t jobs = 1;
    bool approx = false;
};

struct TheoremSuiteResult {
    std::uint64_t seed = 0;
    std::vector<SuiteEntry> entries;

    [[nodiscard]] std::size_t count(SuiteStatus status) const;
    [[nodiscard]] Json to_json() const;
};

/// Ids of the fixed manifest, in run order.
const std::vector<std::string>& suite_manifest();

TheoremSuiteResult run_theorem_suite(const SuiteOptions& options);

}  // namespace filterint
