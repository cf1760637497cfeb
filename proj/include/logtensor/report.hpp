#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <logtensor/exact.hpp>

namespace logtensor {

struct CoefficientRecord {
    std::string key;
    bool exact_zero = true;
    double abs = 0.0;

    friend bool operator==(const CoefficientRecord &, const CoefficientRecord &) = default;
};

/// Outcome of one identity check. Exact mode passes only on exact zeros;
/// numeric mode passes when max |deviation| <= tolerance * scale.
struct VerificationReport {
    std::string identity;
    std::string tag;
    std::string window;
    bool exact_mode = true;
    double tolerance = 1e-9;
    double scale = 1.0;
    bool keep_records = false;

    std::vector<CoefficientRecord> records;
    double max_deviation = 0.0;
    std::size_t checked = 0;
    std::size_t skipped = 0;
    std::size_t failures = 0;
    std::vector<std::string> offending; // capped
    std::vector<std::string> notes;

    void add(const std::string &key, const ExactComplex &diff);
    void add(const std::string &key, NumericComplex diff);
    void add_failure(const std::string &key, const std::string &why);
    void merge(const VerificationReport &o);
    bool pass() const;
};

inline constexpr std::size_t kMaxOffending = 64;

} // namespace logtensor
