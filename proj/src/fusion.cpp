#include <logtensor/fusion.hpp>

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace logtensor {

FusionTable::FusionTable(std::vector<std::string> labels, std::size_t unit, const std::vector<Entry> &entries)
    : labels_(std::move(labels)), unit_(unit)
{
    const std::size_t k = labels_.size();
    if (k == 0) throw std::invalid_argument("fusion table: no labels");
    if (unit_ >= k) throw std::invalid_argument("fusion table: unit index out of range");
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (labels_[i] == labels_[j]) throw std::invalid_argument("fusion table: duplicate label " + labels_[i]);
    n_.assign(k * k * k, 0);
    for (const auto &[j, a, b, v] : entries) {
        if (j >= k || a >= k || b >= k) throw std::invalid_argument("fusion table: entry index out of range");
        n_[(j * k + a) * k + b] = v;
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const std::uint64_t want = i == j ? 1 : 0;
            if ((*this)(j, unit_, i) != want || (*this)(j, i, unit_) != want)
                throw std::invalid_argument("fusion table: unit law fails at " + labels_[i] + ", " + labels_[j]);
        }
}

std::size_t FusionTable::index(const std::string &label) const
{
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw std::invalid_argument("unknown label " + label);
    return std::size_t(it - labels_.begin());
}

std::vector<FusionTable::Entry> FusionTable::entries() const
{
    std::vector<Entry> out;
    const std::size_t k = rank();
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b)
                if (auto v = (*this)(j, a, b)) out.emplace_back(j, a, b, v);
    return out;
}

ModuleVector FusionTable::irreducible(std::size_t i) const
{
    ModuleVector v(rank(), 0);
    v.at(i) = 1;
    return v;
}

ModuleVector FusionTable::parse_vector(const std::string &s) const
{
    ModuleVector v(rank(), 0);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw std::invalid_argument("bad module vector " + s);
        std::stringstream in(s.substr(1, s.size() - 2));
        std::string tok;
        std::size_t i = 0;
        while (std::getline(in, tok, ',')) {
            if (i >= rank()) throw std::invalid_argument("module vector too long: " + s);
            v[i++] = std::stoull(tok);
        }
        if (i != rank()) throw std::invalid_argument("module vector length mismatch: " + s);
        return v;
    }
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, '+')) {
        std::uint64_t mult = 1;
        if (auto star = tok.find('*'); star != std::string::npos) {
            mult = std::stoull(tok.substr(0, star));
            tok = tok.substr(star + 1);
        }
        v[index(tok)] += mult;
    }
    return v;
}

std::string FusionTable::format(const ModuleVector &v) const
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i]) continue;
        if (!out.empty()) out += " + ";
        if (v[i] != 1) out += std::to_string(v[i]) + "*";
        out += labels_[i];
    }
    return out.empty() ? "0" : out;
}

FusionTable bundled_table(const std::string &name)
{
    if (name.size() == 2 && name[0] == 'z' && name[1] >= '1' && name[1] <= '6') {
        const std::size_t n = std::size_t(name[1] - '0');
        std::vector<std::string> labels;
        std::vector<FusionTable::Entry> e;
        for (std::size_t a = 0; a < n; ++a) labels.push_back(std::to_string(a));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) e.emplace_back((a + b) % n, a, b, 1);
        return FusionTable(labels, 0, e);
    }
    if (name == "ising" || name == "ising-corrupted") {
        // 0 = 1, 1 = eps, 2 = sigma
        std::vector<FusionTable::Entry> e;
        for (std::size_t i = 0; i < 3; ++i) {
            e.emplace_back(i, 0, i, 1);
            if (i) e.emplace_back(i, i, 0, 1);
        }
        e.emplace_back(0, 1, 1, 1);
        e.emplace_back(2, 1, 2, 1);
        e.emplace_back(2, 2, 1, 1);
        e.emplace_back(0, 2, 2, 1);
        e.emplace_back(1, 2, 2, 1);
        if (name == "ising-corrupted") e.emplace_back(2, 2, 2, 1);
        return FusionTable({"1", "eps", "sigma"}, 0, e);
    }
    if (name == "fibonacci") {
        return FusionTable({"1", "tau"}, 0,
                           {{0, 0, 0, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {0, 1, 1, 1}, {1, 1, 1, 1}});
    }
    throw std::invalid_argument("unknown bundled table " + name);
}

std::vector<std::string> bundled_table_names()
{
    return {"z1", "z2", "z3", "z4", "z5", "z6", "ising", "fibonacci", "ising-corrupted"};
}

namespace {
void check_length(const ModuleVector &v, const FusionTable &T)
{
    if (v.size() != T.rank())
        throw std::invalid_argument("module vector has length " + std::to_string(v.size()) + ", table rank is " +
                                    std::to_string(T.rank()));
}
} // namespace

ModuleVector fuse(const ModuleVector &a, const ModuleVector &b, const FusionTable &T)
{
    check_length(a, T);
    check_length(b, T);
    const std::size_t k = T.rank();
    ModuleVector out(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < k; ++j) {
            if (!b[j]) continue;
            for (std::size_t c = 0; c < k; ++c) out[c] += a[i] * b[j] * T(c, i, j);
        }
    }
    return out;
}

ModuleVector add(const ModuleVector &a, const ModuleVector &b)
{
    if (a.size() != b.size()) throw std::invalid_argument("module vector length mismatch");
    ModuleVector out(a);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
    return out;
}

ModuleVector triple_decompose(const ModuleVector &w1, const ModuleVector &w2, const ModuleVector &w3,
                              const FusionTable &T, Side side)
{
    return side == Side::left ? fuse(w1, fuse(w2, w3, T), T) : fuse(fuse(w1, w2, T), w3, T);
}

namespace {
ExactComplex diff(std::uint64_t a, std::uint64_t b)
{
    return ExactComplex(Rational(static_cast<long>(a)) - Rational(static_cast<long>(b)));
}

const char *kMultiplicityNote = "multiplicity-level data only; module isomorphisms are not constructed";
} // namespace

AssocResult assoc_multiplicity_check(const FusionTable &T)
{
    AssocResult res;
    res.report.identity = "associativity of fusion multiplicities";
    res.report.tag = "fusionrulerelation";
    res.report.notes.push_back(kMultiplicityNote);
    const std::size_t k = T.rank();
    const auto &L = T.labels();
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            for (std::size_t c = 0; c < k; ++c)
                for (std::size_t j = 0; j < k; ++j) {
                    std::uint64_t left = 0, right = 0;
                    for (std::size_t i = 0; i < k; ++i) {
                        left += T(j, a, i) * T(i, b, c);
                        right += T(i, a, b) * T(j, i, c);
                    }
                    res.report.add("W1=" + L[a] + " W2=" + L[b] + " W3=" + L[c] + " j=" + L[j], diff(left, right));
                    if (left != right) res.violations.push_back({a, b, c, j, left, right});
                }
    return res;
}

VerificationReport unit_law_check(const FusionTable &T)
{
    VerificationReport rep;
    rep.identity = "unit laws of the fusion table";
    rep.tag = "expl-vw/expl-wv";
    const std::size_t k = T.rank();
    const ModuleVector V = T.irreducible(T.unit());
    for (std::size_t i = 0; i < k; ++i) {
        const ModuleVector W = T.irreducible(i);
        const ModuleVector l = fuse(V, W, T), r = fuse(W, V, T);
        for (std::size_t j = 0; j < k; ++j) {
            rep.add("V*" + T.labels()[i] + " j=" + T.labels()[j], diff(l[j], W[j]));
            rep.add(T.labels()[i] + "*V j=" + T.labels()[j], diff(r[j], W[j]));
        }
    }
    return rep;
}

VerificationReport bilinearity_check(const FusionTable &T, std::uint64_t seed, unsigned trials)
{
    VerificationReport rep;
    rep.identity = "bilinearity of fusion and iterated products";
    rep.tag = "tensorproductdistributes";
    rep.notes.push_back(kMultiplicityNote);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> d(0, 3);
    auto random_vector = [&] {
        ModuleVector v(T.rank());
        for (auto &x : v) x = d(rng);
        return v;
    };
    const bool associative = assoc_multiplicity_check(T).violations.empty();
    for (unsigned t = 0; t < trials; ++t) {
        const ModuleVector a = random_vector(), a2 = random_vector(), b = random_vector(), c = random_vector();
        const ModuleVector l1 = fuse(add(a, a2), b, T), r1 = add(fuse(a, b, T), fuse(a2, b, T));
        const ModuleVector l2 = fuse(b, add(a, a2), T), r2 = add(fuse(b, a, T), fuse(b, a2, T));
        const ModuleVector tl = triple_decompose(a, b, c, T, Side::left), tr = triple_decompose(a, b, c, T, Side::right);
        for (std::size_t j = 0; j < T.rank(); ++j) {
            const std::string key = "trial=" + std::to_string(t) + " j=" + T.labels()[j];
            rep.add("left " + key, diff(l1[j], r1[j]));
            rep.add("right " + key, diff(l2[j], r2[j]));
            if (associative) rep.add("triple " + key, diff(tl[j], tr[j]));
        }
    }
    return rep;
}

VerificationReport quotient_multiplicity_check(const ModuleVector &w2, const ModuleVector &w3, const ModuleVector &w,
                                               const FusionTable &T)
{
    check_length(w2, T);
    check_length(w3, T);
    for (std::size_t i = 0; i < w2.size(); ++i)
        if (w2[i] < w3[i]) throw std::invalid_argument("quotient check needs W2 >= W3 componentwise");
    VerificationReport rep;
    rep.identity = "fusion with a quotient does not increase multiplicities";
    rep.tag = "right-exact";
    rep.notes.push_back(kMultiplicityNote);
    const ModuleVector big = fuse(w, w2, T), small = fuse(w, w3, T);
    for (std::size_t j = 0; j < T.rank(); ++j) {
        const std::string key = "j=" + T.labels()[j];
        if (big[j] < small[j])
            rep.add_failure(key, std::to_string(big[j]) + " < " + std::to_string(small[j]));
        else
            rep.add(key, ExactComplex(0));
    }
    return rep;
}

} // namespace logtensor
