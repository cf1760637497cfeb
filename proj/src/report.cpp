#include <logtensor/report.hpp>

#include <algorithm>
#include <cmath>

namespace logtensor {

namespace {
void note_offending(VerificationReport &r, const std::string &key)
{
    ++r.failures;
    if (r.offending.size() < kMaxOffending) r.offending.push_back(key);
}
} // namespace

void VerificationReport::add(const std::string &key, const ExactComplex &diff)
{
    ++checked;
    bool zero = diff.is_zero();
    double a = zero ? 0.0 : std::abs(diff.numeric());
    if (!zero) {
        max_deviation = std::max(max_deviation, a);
        note_offending(*this, key);
    }
    if (keep_records) records.push_back({key, zero, a});
}

void VerificationReport::add(const std::string &key, NumericComplex diff)
{
    exact_mode = false;
    ++checked;
    double a = std::abs(diff);
    max_deviation = std::max(max_deviation, a);
    if (!(a <= tolerance * scale)) note_offending(*this, key);
    if (keep_records) records.push_back({key, false, a});
}

void VerificationReport::add_failure(const std::string &key, const std::string &why)
{
    ++checked;
    note_offending(*this, why.empty() ? key : key + ": " + why);
}

void VerificationReport::merge(const VerificationReport &o)
{
    exact_mode = exact_mode && o.exact_mode;
    max_deviation = std::max(max_deviation, o.max_deviation);
    checked += o.checked;
    skipped += o.skipped;
    failures += o.failures;
    for (const auto &k : o.offending)
        if (offending.size() < kMaxOffending) offending.push_back(k);
    if (keep_records) records.insert(records.end(), o.records.begin(), o.records.end());
    notes.insert(notes.end(), o.notes.begin(), o.notes.end());
}

bool VerificationReport::pass() const { return failures == 0; }

} // namespace logtensor
