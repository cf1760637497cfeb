#include <logtensor/fixtures.hpp>

#include <algorithm>
#include <map>
#include <random>

namespace logtensor {

namespace {

void partitions_of(unsigned n, unsigned max_part, Partition &cur, std::vector<Partition> &out)
{
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (unsigned k = std::min(n, max_part); k >= 1; --k) {
        cur.push_back(k);
        partitions_of(n - k, k, cur, out);
        cur.pop_back();
    }
}

unsigned size_of(const Partition &p)
{
    unsigned s = 0;
    for (unsigned k : p) s += k;
    return s;
}

std::string partition_name(const Partition &p)
{
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s + "]";
}

struct Fock {
    Rational lambda;
    unsigned cutoff = 0;
    std::vector<Partition> parts;
    std::map<Partition, std::size_t> index;

    Fock(Rational l, unsigned c) : lambda(std::move(l)), cutoff(c), parts(partitions_up_to(c))
    {
        for (std::size_t i = 0; i < parts.size(); ++i) index.emplace(parts[i], i);
    }

    SparseMatrix alpha(long k) const
    {
        SparseMatrix m;
        if (k == 0) return identity_matrix(parts.size()).scaled(ExactComplex(lambda));
        for (std::size_t i = 0; i < parts.size(); ++i) {
            Partition p = parts[i];
            if (k < 0) {
                if (size_of(p) + unsigned(-k) > cutoff) continue;
                p.insert(std::upper_bound(p.begin(), p.end(), unsigned(-k), std::greater<>()), unsigned(-k));
                m.add(index.at(p), i, ExactComplex(1));
            } else {
                auto mult = std::count(p.begin(), p.end(), unsigned(k));
                if (mult == 0) continue;
                p.erase(std::find(p.begin(), p.end(), unsigned(k)));
                m.add(index.at(p), i, ExactComplex(k * long(mult)));
            }
        }
        return m;
    }

    SparseMatrix sugawara(int j) const
    {
        SparseMatrix r;
        if (j == -1) {
            r += alpha(-1) * alpha(0);
            for (long k = 1; k <= long(cutoff); ++k) r += alpha(-k - 1) * alpha(k);
        } else if (j == 1) {
            r += alpha(0) * alpha(1);
            for (long s = 1; s <= long(cutoff); ++s) r += alpha(-s) * alpha(s + 1);
        } else {
            throw std::invalid_argument("sugawara: j must be -1 or 1");
        }
        return r;
    }
};

SparseMatrix exp_nilpotent(const SparseMatrix &X, std::size_t dim)
{
    SparseMatrix out = identity_matrix(dim);
    SparseMatrix term = identity_matrix(dim);
    for (unsigned j = 1; ; ++j) {
        term = (X * term).scaled(ExactComplex(Rational(1) / Rational(j)));
        if (term.empty()) break;
        if (j > dim) throw std::runtime_error("exp of a non-nilpotent matrix");
        out += term;
    }
    return out;
}

// Y(a, x) for every a of A as a matrix B -> C; the x-power of each entry is implied
std::vector<SparseMatrix> heis_matrices(const Fock &A, const Fock &B, const Fock &C)
{
    const Rational &lambda = A.lambda;
    SparseMatrix plus, minus;
    for (long n = 1; n <= long(B.cutoff); ++n) plus += B.alpha(n).scaled(ExactComplex(-lambda / n));
    for (long n = 1; n <= long(C.cutoff); ++n) minus += C.alpha(-n).scaled(ExactComplex(lambda / n));
    SparseMatrix shift;
    for (std::size_t i = 0; i < B.parts.size(); ++i) {
        auto it = C.index.find(B.parts[i]);
        if (it != C.index.end()) shift.add(it->second, i, ExactComplex(1));
    }

    std::vector<SparseMatrix> Y(A.parts.size());
    Y[0] = exp_nilpotent(minus, C.parts.size()) * shift * exp_nilpotent(plus, B.parts.size());
    for (std::size_t ai = 1; ai < A.parts.size(); ++ai) {
        Partition rest = A.parts[ai];
        const unsigned k = rest.front();
        rest.erase(rest.begin());
        const SparseMatrix &prev = Y[A.index.at(rest)];
        SparseMatrix y;
        for (long s = k; s <= long(C.cutoff); ++s)
            y += (C.alpha(-s) * prev).scaled(binomial(ExactComplex(s - 1), k - 1));
        for (long n = 0; n <= long(B.cutoff); ++n)
            y += (prev * B.alpha(n)).scaled(binomial(ExactComplex(-n - 1), k - 1));
        Y[ai] = std::move(y);
    }
    return Y;
}

std::shared_ptr<GeneralizedModule> fock_shell(const Fock &F)
{
    auto M = std::make_shared<GeneralizedModule>();
    M->label = "M(" + to_string(F.lambda) + ")";
    M->group.moduli = {0};
    const Rational base = F.lambda * F.lambda / 2;
    for (const auto &p : F.parts)
        M->basis.push_back({Grade{F.lambda}, ExactComplex(base + size_of(p)), partition_name(p)});
    M->weight_hi = base + F.cutoff;
    M->Lm1 = F.sugawara(-1);
    M->L1 = F.sugawara(1);
    return M;
}

Fock fock_of(const GeneralizedModule &M)
{
    const Rational lambda = fock_momentum(M);
    const Rational level = M.weight_hi - lambda * lambda / 2;
    if (!is_integer(level) || level < 0) throw std::invalid_argument(M.label + " is not a Fock module");
    Fock F(lambda, unsigned(to_long(level)));
    if (F.parts.size() != M.dim()) throw std::invalid_argument(M.label + " is not a Fock module");
    return F;
}

} // namespace

std::vector<Partition> partitions_up_to(unsigned cutoff)
{
    std::vector<Partition> out;
    Partition cur;
    for (unsigned n = 0; n <= cutoff; ++n) partitions_of(n, n, cur, out);
    return out;
}

std::shared_ptr<const VertexAlgebra> heisenberg_algebra()
{
    static const std::shared_ptr<const VertexAlgebra> V = [] {
        Fock F(Rational(0), 2);
        auto shell = fock_shell(F);
        auto A = std::make_shared<VertexAlgebra>();
        A->label = "Heisenberg";
        A->basis = shell->basis;
        A->L1 = shell->L1;
        A->vacuum = 0;
        A->omega = SparseVector{{F.index.at({1, 1}), ExactComplex(rational(1, 2))}};
        return A;
    }();
    return V;
}

Rational fock_momentum(const GeneralizedModule &M)
{
    if (M.group.moduli != std::vector<unsigned>{0} || M.basis.empty())
        throw std::invalid_argument(M.label + " is not a Fock module");
    return M.basis.front().grade.front();
}

unsigned fock_cutoff(const Rational &lambda, const Rational &wt_hi)
{
    Rational level = floor(wt_hi - lambda * lambda / 2);
    if (level < 0) throw std::invalid_argument("weight window below the lowest weight");
    if (level > kMaxFockCutoff) throw ResourceGuard("Fock cutoff " + to_string(level) + " exceeds 10");
    return unsigned(to_long(level));
}

ModulePtr build_fock(const Rational &lambda, unsigned cutoff)
{
    if (cutoff > kMaxFockCutoff) throw ResourceGuard("Fock cutoff " + std::to_string(cutoff) + " exceeds 10");
    Fock F(lambda, cutoff);
    auto M = fock_shell(F);
    M->algebra = heisenberg_algebra();
    Fock V(Rational(0), 2);
    auto Y = heis_matrices(V, F, F);
    for (std::size_t v = 0; v < Y.size(); ++v) {
        const long lv = long(size_of(V.parts[v]));
        for (const auto &[k, val] : Y[v].by_column()) {
            auto [b, c] = k;
            // x^{|c|-|v|-|b|} = x^{-m-1}
            long m = lv + long(size_of(F.parts[b])) - long(size_of(F.parts[c])) - 1;
            M->modes[{v, m}].add(c, b, val);
        }
    }
    return M;
}

SparseMatrix fock_alpha(const GeneralizedModule &M, long k) { return fock_of(M).alpha(k); }

SparseMatrix fock_sugawara(const GeneralizedModule &M, int j) { return fock_of(M).sugawara(j); }

LogIntwOp heis_intw(const ModulePtr &A, const ModulePtr &B, const ModulePtr &C)
{
    Fock FA = fock_of(*A), FB = fock_of(*B), FC = fock_of(*C);
    if (FC.lambda != FA.lambda + FB.lambda) throw std::invalid_argument("heis_intw: momenta do not add");
    auto Y = heis_matrices(FA, FB, FC);
    LogIntwOp op{A, B, C, {}};
    const Rational lm = FA.lambda * FB.lambda;
    for (std::size_t a = 0; a < Y.size(); ++a) {
        const long la = long(size_of(FA.parts[a]));
        for (const auto &[k, val] : Y[a].by_column()) {
            auto [b, c] = k;
            Rational e = lm + long(size_of(FC.parts[c])) - la - long(size_of(FB.parts[b]));
            op.data[{a, b}].emplace(c, LogSeries::monomial(Var::x, ExactComplex(e), 0, val));
        }
    }
    return op;
}

LogIntwOp heis_intw(const Rational &lambda, const Rational &mu, const Rational &wt_hi)
{
    return heis_intw(build_fock(lambda, fock_cutoff(lambda, wt_hi)), build_fock(mu, fock_cutoff(mu, wt_hi)),
                     build_fock(lambda + mu, fock_cutoff(lambda + mu, wt_hi)));
}

// ---------------------------------------------------------------- trivial algebra

std::shared_ptr<const VertexAlgebra> trivial_algebra()
{
    static const std::shared_ptr<const VertexAlgebra> V = [] {
        auto A = std::make_shared<VertexAlgebra>();
        A->label = "C1";
        A->basis = {{Grade{}, ExactComplex(0), "1"}};
        A->vacuum = 0;
        return A;
    }();
    return V;
}

namespace {
void attach_trivial(GeneralizedModule &M)
{
    M.algebra = trivial_algebra();
    M.modes[{0, -1}] = identity_matrix(M.dim());
}
} // namespace

ModulePtr trivial_module(const std::string &label, const std::vector<ExactComplex> &weights)
{
    auto M = std::make_shared<GeneralizedModule>();
    M->label = label;
    for (std::size_t i = 0; i < weights.size(); ++i)
        M->basis.push_back({Grade{}, weights[i], label + "." + std::to_string(i)});
    if (!weights.empty()) {
        M->weight_hi = weights.front().re();
        for (const auto &w : weights) M->weight_hi = std::max(M->weight_hi, w.re());
    }
    attach_trivial(*M);
    return M;
}

ModulePtr trivial_vacuum_module()
{
    auto M = std::make_shared<GeneralizedModule>();
    M->label = "C1";
    M->basis = trivial_algebra()->basis;
    attach_trivial(*M);
    return M;
}

ModulePtr jordan_module(const std::string &label, const Rational &h, unsigned r, unsigned levels)
{
    if (r == 0) throw std::invalid_argument("nilpotency index must be positive");
    auto M = std::make_shared<GeneralizedModule>();
    M->label = label;
    auto idx = [r](unsigned l, unsigned j) { return std::size_t(l) * r + j; };
    for (unsigned l = 0; l <= levels; ++l)
        for (unsigned j = 0; j < r; ++j)
            M->basis.push_back({Grade{}, ExactComplex(h + l), label + "(" + std::to_string(l) + "," + std::to_string(j) + ")"});
    M->weight_hi = h + levels;
    for (unsigned l = 0; l <= levels; ++l) {
        for (unsigned j = 0; j < r; ++j) {
            if (j + 1 < r) M->N.add(idx(l, j + 1), idx(l, j), ExactComplex(1));
            if (l + 1 <= levels) M->Lm1.add(idx(l + 1, j), idx(l, j), ExactComplex(1));
            if (l >= 1) {
                M->L1.add(idx(l - 1, j), idx(l, j), ExactComplex(Rational(l) * (2 * h + l - 1)));
                if (j + 1 < r) M->L1.add(idx(l - 1, j + 1), idx(l, j), ExactComplex(2 * long(l)));
            }
        }
    }
    attach_trivial(*M);
    return M;
}

LogIntwOp random_log_family(const ModulePtr &W1, const ModulePtr &W2, const ModulePtr &W3,
                            std::uint64_t seed, unsigned support)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> num(-4, 4), den(1, 3);
    std::map<PairKey, SparseVector> T;
    for (unsigned i = 0; i < support; ++i) {
        std::size_t a = rng() % W1->dim(), b = rng() % W2->dim(), c = rng() % W3->dim();
        long n = num(rng);
        if (n == 0) n = 1;
        T[{a, b}][c] += ExactComplex(rational(n, den(rng)));
    }
    for (auto it = T.begin(); it != T.end();) {
        for (auto jt = it->second.begin(); jt != it->second.end();)
            jt = jt->second.is_zero() ? it->second.erase(jt) : std::next(jt);
        it = it->second.empty() ? T.erase(it) : std::next(it);
    }

    // D(T) = N3 T - T(N1 x 1) - T(1 x N2)
    auto D = [&](const std::map<PairKey, SparseVector> &S) {
        std::map<PairKey, SparseVector> out;
        auto acc = [&out](PairKey k, const SparseVector &v, const ExactComplex &c) {
            auto &dst = out[k];
            for (const auto &[i, x] : v) {
                dst[i] += c * x;
                if (dst[i].is_zero()) dst.erase(i);
            }
        };
        for (const auto &[k, v] : S) {
            auto [a, b] = k;
            acc(k, W3->N.apply(v), ExactComplex(1));
            // T(a,b) feeds key (a',b) through the entry N1[a,a']
            for (const auto &[key, x] : W1->N.by_column())
                if (key.second == a) acc({key.first, b}, v, -x);
            for (const auto &[key, x] : W2->N.by_column())
                if (key.second == b) acc({a, key.first}, v, -x);
        }
        for (auto it = out.begin(); it != out.end();) it = it->second.empty() ? out.erase(it) : std::next(it);
        return out;
    };
    LogIntwOp Y{W1, W2, W3, {}};
    auto cur = T;
    const std::size_t cap = W1->dim() + W2->dim() + W3->dim() + 1;
    for (unsigned k = 0; !cur.empty(); ++k) {
        if (k > cap) throw std::runtime_error("random family: D is not nilpotent");
        const ExactComplex inv(Rational(1) / factorial(k));
        for (const auto &[key, v] : cur) {
            auto [a, b] = key;
            for (const auto &[c, x] : v) {
                ExactComplex e = W3->weight(c) - W1->weight(a) - W2->weight(b);
                auto &slot = Y.data[key][c];
                slot += LogSeries::monomial(Var::x, e, k, x * inv);
            }
        }
        cur = D(cur);
    }
    for (auto &[key, vec] : Y.data)
        for (auto it = vec.begin(); it != vec.end();) it = it->second.is_zero() ? vec.erase(it) : std::next(it);
    for (auto it = Y.data.begin(); it != Y.data.end();) it = it->second.empty() ? Y.data.erase(it) : std::next(it);
    return Y;
}

RandomFamily random_log_family(const JordanFamily &spec)
{
    std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
    auto h = [&rng]() { return rational(long(rng() % 7), 3); };
    std::string tag = "J" + std::to_string(spec.seed);
    auto W1 = jordan_module(tag + ".1", h(), spec.r, spec.levels);
    auto W2 = jordan_module(tag + ".2", h(), spec.r, spec.levels);
    auto W3 = jordan_module(tag + ".3", h(), spec.r, spec.levels);
    RandomFamily f;
    f.Y = random_log_family(W1, W2, W3, rng(), spec.support);
    f.max_logpower = 3 * (spec.r - 1);
    return f;
}

} // namespace logtensor
