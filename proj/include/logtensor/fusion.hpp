#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include <logtensor/report.hpp>

namespace logtensor {

using ModuleVector = std::vector<std::uint64_t>;

/// Fusion rules N^{M_j}_{M_a M_b} over irreducibles. Construction rejects tables
/// violating the unit laws.
class FusionTable {
public:
    using Entry = std::tuple<std::size_t, std::size_t, std::size_t, std::uint64_t>; // (j, a, b, value)

    FusionTable(std::vector<std::string> labels, std::size_t unit, const std::vector<Entry> &entries);

    std::size_t rank() const { return labels_.size(); }
    std::size_t unit() const { return unit_; }
    const std::vector<std::string> &labels() const { return labels_; }
    std::size_t index(const std::string &label) const;
    std::uint64_t operator()(std::size_t j, std::size_t a, std::size_t b) const { return n_[(j * rank() + a) * rank() + b]; }
    std::vector<Entry> entries() const;

    ModuleVector irreducible(std::size_t i) const;
    ModuleVector parse_vector(const std::string &s) const; // "sigma+2*eps" or "[1,0,2]"
    std::string format(const ModuleVector &v) const;

private:
    std::vector<std::string> labels_;
    std::size_t unit_;
    std::vector<std::uint64_t> n_;
};

// z<n> (1 <= n <= 6), ising, fibonacci, ising-corrupted
FusionTable bundled_table(const std::string &name);
std::vector<std::string> bundled_table_names();

ModuleVector fuse(const ModuleVector &a, const ModuleVector &b, const FusionTable &T);
ModuleVector add(const ModuleVector &a, const ModuleVector &b);

enum class Side { left, right };
ModuleVector triple_decompose(const ModuleVector &w1, const ModuleVector &w2, const ModuleVector &w3,
                              const FusionTable &T, Side side);

struct AssocViolation {
    std::size_t w1, w2, w3, j;
    std::uint64_t left, right;
    friend bool operator==(const AssocViolation &, const AssocViolation &) = default;
};

struct AssocResult {
    VerificationReport report;
    std::vector<AssocViolation> violations;
};
AssocResult assoc_multiplicity_check(const FusionTable &T);

VerificationReport unit_law_check(const FusionTable &T);
// fuse(a + a', b) = fuse(a, b) + fuse(a', b) and the mirror, plus left = right triples on random vectors
VerificationReport bilinearity_check(const FusionTable &T, std::uint64_t seed, unsigned trials);

// W2 ->> W3 (componentwise W2 >= W3): fuse(W, W2) >= fuse(W, W3) componentwise
VerificationReport quotient_multiplicity_check(const ModuleVector &w2, const ModuleVector &w3, const ModuleVector &w,
                                               const FusionTable &T);

} // namespace logtensor
