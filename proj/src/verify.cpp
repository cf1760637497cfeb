#include <logtensor/verify.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

namespace logtensor {

SparseVector basis_vector(std::size_t i) { return {{i, ExactComplex(1)}}; }

namespace {

template <class K> K field(const ExactComplex &c);
template <> ExactComplex field<ExactComplex>(const ExactComplex &c) { return c; }
template <> NumericComplex field<NumericComplex>(const ExactComplex &c) { return c.numeric(); }

template <class K> K ipow(const K &b, long e)
{
    if constexpr (std::is_same_v<K, ExactComplex>)
        return pow(b, e);
    else
        return std::pow(b, double(e));
}

template <class K> using Vec = std::map<std::size_t, K>;

template <class K> struct Eval {
    const MapData *I = nullptr;
    std::map<PairKey, Vec<K>> comp;
    K z{};
    double scale = 1.0;
};

std::optional<Eval<ExactComplex>> eval_exact(const MapData &I)
{
    if (!I.bp.exact) return std::nullopt;
    Eval<ExactComplex> E;
    E.I = &I;
    E.z = *I.bp.exact;
    for (const auto &[key, vec] : I.data) {
        auto &dst = E.comp[key];
        for (const auto &[c, s] : vec) {
            auto v = evaluate_exact(s, I.bp);
            if (!v) return std::nullopt;
            if (!v->is_zero()) dst.emplace(c, *v);
            E.scale = std::max(E.scale, std::abs(v->numeric()));
        }
    }
    return E;
}

Eval<NumericComplex> eval_numeric(const MapData &I)
{
    Eval<NumericComplex> E;
    E.I = &I;
    E.z = I.bp.z;
    for (const auto &[key, vec] : I.data) {
        auto &dst = E.comp[key];
        for (const auto &[c, s] : vec) {
            NumericComplex v = evaluate(s, I.bp);
            dst.emplace(c, v);
            E.scale = std::max(E.scale, std::abs(v));
        }
    }
    return E;
}

template <class Fn> VerificationReport dispatch(const MapData &I, Fn &&fn)
{
    if (auto e = eval_exact(I)) return fn(*e);
    return fn(eval_numeric(I));
}

// operators indexed by an integer, with the weight shift each applies
struct Family {
    std::function<SparseMatrix(long)> make;
    std::function<ExactComplex(long)> shift;
    std::map<long, SparseMatrix> cache;

    const SparseMatrix &op(long k)
    {
        auto it = cache.find(k);
        if (it == cache.end()) it = cache.emplace(k, make(k)).first;
        return it->second;
    }
};

Family modes_of(const GeneralizedModule &M, const SparseVector &v, const ExactComplex &wv)
{
    return {[&M, v](long k) { return M.mode(v, k); }, [wv](long k) { return wv - ExactComplex(k + 1); }, {}};
}

Family opposite_of(const GeneralizedModule &M, const SparseVector &v, const ExactComplex &wv)
{
    return {[&M, v](long k) { return opposite_mode(M, v, k); },
            [wv](long k) { return ExactComplex(k + 1) - wv; }, {}};
}

Family sl2_of(const GeneralizedModule &M)
{
    return {[&M](long k) { return M.L(int(k)); }, [](long k) { return ExactComplex(-k); }, {}};
}

enum class Slot { Out, In1, In2 };

template <class K> struct Term {
    Slot slot;
    Family *fam;
    long k;
    K coef;
};

struct Bounds {
    Rational lo1, hi1, lo2, hi2, lo3, hi3;
    explicit Bounds(const MapData &I)
        : lo1(I.W1->weight_lo()), hi1(I.W1->weight_hi), lo2(I.W2->weight_lo()), hi2(I.W2->weight_hi),
          lo3(I.W3->weight_lo()), hi3(I.W3->weight_hi)
    {
    }
};

template <class K> class Kernel {
public:
    explicit Kernel(const Eval<K> &E) : E_(E), I_(*E.I), B_(*E.I) {}

    const Bounds &bounds() const { return B_; }

    void begin_pair(std::size_t a, std::size_t b)
    {
        a_ = a;
        b_ = b;
        auto it = E_.comp.find({a, b});
        Iab_ = it == E_.comp.end() ? Vec<K>{} : it->second;
        cache_.clear();
    }

    // calls sink(c, value) for every available output; returns the number skipped
    template <class Sink> std::size_t run(const std::vector<Term<K>> &terms, Sink &&sink)
    {
        const std::size_t n3 = I_.W3->dim();
        std::optional<Rational> threshold;
        Vec<K> total;
        for (const auto &t : terms) {
            const Rational sh = t.fam->shift(t.k).re();
            if (t.slot == Slot::Out) {
                Rational th = B_.hi3 + sh;
                if (!threshold || th < *threshold) threshold = th;
            } else {
                const Rational src = (t.slot == Slot::In1 ? I_.W1->weight(a_) : I_.W2->weight(b_)).re() + sh;
                const Rational &lo = t.slot == Slot::In1 ? B_.lo1 : B_.lo2;
                const Rational &hi = t.slot == Slot::In1 ? B_.hi1 : B_.hi2;
                if (src < lo) continue;
                if (src > hi) return n3;
            }
            for (const auto &[c, x] : image(t)) {
                auto [it, fresh] = total.try_emplace(c, x * t.coef);
                if (!fresh) it->second += x * t.coef;
            }
        }
        std::size_t skipped = 0;
        for (std::size_t c = 0; c < n3; ++c) {
            if (threshold && I_.W3->weight(c).re() > *threshold) {
                ++skipped;
                continue;
            }
            auto it = total.find(c);
            sink(c, it == total.end() ? K{} : it->second);
        }
        return skipped;
    }

private:
    const Vec<K> &image(const Term<K> &t)
    {
        auto key = std::make_tuple(t.fam, t.k, t.slot);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        Vec<K> v;
        const SparseMatrix &op = t.fam->op(t.k);
        if (t.slot == Slot::Out) {
            v = op.apply(Iab_);
        } else if (t.slot == Slot::In1) {
            for (const auto &[a2, u] : op.apply(basis_vector(a_))) add_scaled(v, {a2, b_}, u);
        } else {
            for (const auto &[b2, u] : op.apply(basis_vector(b_))) add_scaled(v, {a_, b2}, u);
        }
        return cache_.emplace(key, std::move(v)).first->second;
    }

    void add_scaled(Vec<K> &v, PairKey key, const ExactComplex &u)
    {
        auto it = E_.comp.find(key);
        if (it == E_.comp.end()) return;
        for (const auto &[c, x] : it->second) {
            auto [jt, fresh] = v.try_emplace(c, scale_by(x, u));
            if (!fresh) jt->second += scale_by(x, u);
        }
    }

    const Eval<K> &E_;
    const MapData &I_;
    Bounds B_;
    std::size_t a_ = 0, b_ = 0;
    Vec<K> Iab_;
    std::map<std::tuple<Family *, long, Slot>, Vec<K>> cache_;
};

bool is_zero_k(const ExactComplex &x) { return x.is_zero(); }
bool is_zero_k(const NumericComplex &x) { return x == NumericComplex(); }

template <class K> void record(VerificationReport &r, const K &diff, const std::function<std::string()> &key)
{
    if (is_zero_k(diff) && !r.keep_records) {
        ++r.checked;
        if constexpr (std::is_same_v<K, NumericComplex>) r.exact_mode = false;
        return;
    }
    r.add(key(), diff);
}

std::vector<PairKey> input_pairs(const MapData &I, const VerifyOptions &opt)
{
    if (!opt.pairs.empty()) return opt.pairs;
    std::vector<PairKey> out;
    for (std::size_t a = 0; a < I.W1->dim(); ++a)
        for (std::size_t b = 0; b < I.W2->dim(); ++b) out.emplace_back(a, b);
    return out;
}

ExactComplex homogeneous_weight(const VertexAlgebra &V, const SparseVector &v)
{
    if (v.empty()) throw std::invalid_argument("zero vector v");
    const ExactComplex w = V.weight(v.begin()->first);
    for (const auto &[i, c] : v)
        if (V.weight(i) != w) throw std::invalid_argument("v must be homogeneous");
    return w;
}

std::string vector_name(const VertexAlgebra &V, const SparseVector &v)
{
    if (V.omega && v == *V.omega) return "omega";
    if (v.size() == 1 && v.begin()->second.is_one()) return V.basis[v.begin()->first].name;
    std::string s;
    for (const auto &[i, c] : v) s += (s.empty() ? "" : "+") + c.str() + "*" + V.basis[i].name;
    return s;
}

const VertexAlgebra &algebra_of(const MapData &I)
{
    if (!I.W3->algebra) throw std::invalid_argument("modules carry no vertex algebra");
    return *I.W3->algebra;
}

void init_report(VerificationReport &r, const MapData &I, const VerifyOptions &opt, std::string identity,
                 std::string tag, double scale)
{
    r.identity = std::move(identity);
    r.tag = std::move(tag);
    r.tolerance = opt.tolerance;
    r.keep_records = opt.keep_records;
    r.scale = scale;
    r.window = "[" + to_string(I.W3->weight_lo()) + "," + to_string(I.W3->weight_hi) + "]";
}

constexpr long kMaxSumLength = 256;

// terms of LHS - RHS for the P(z) Jacobi coefficient of x0^{-N-1} x1^{-M-1}
template <class K>
std::vector<Term<K>> p_jacobi_terms(long N, long M, const K &z, const ExactComplex &wv, Family &m1, Family &m2,
                                    Family &m3, const Bounds &B, const Rational &wa, const Rational &wb)
{
    std::vector<Term<K>> t;
    const Rational wvr = wv.re();
    for (long i = 0; i < kMaxSumLength; ++i) {
        ExactComplex bin = binomial(ExactComplex(N), unsigned(i));
        if (bin.is_zero()) break;
        long k = M + N - i;
        if (B.hi3 - (wvr - k - 1) < B.lo3) break;
        t.push_back({Slot::Out, &m3, k, field<K>(bin) * ipow(-z, i)});
    }
    for (long i = 0; i < kMaxSumLength; ++i) {
        ExactComplex bin = binomial(ExactComplex(i - M - 1), unsigned(i));
        if (bin.is_zero()) break;
        long k = N + i;
        if (wa + (wvr - k - 1) < B.lo1) break;
        if (i % 2) bin = -bin;
        t.push_back({Slot::In1, &m1, k, -field<K>(bin) * ipow(z, M - i)});
    }
    for (long i = 0; i < kMaxSumLength; ++i) {
        ExactComplex bin = binomial(ExactComplex(N), unsigned(i));
        if (bin.is_zero()) break;
        long k = M + i;
        if (wb + (wvr - k - 1) < B.lo2) break;
        if ((N + i) % 2) bin = -bin;
        t.push_back({Slot::In2, &m2, k, -field<K>(bin) * ipow(z, N - i)});
    }
    return t;
}

// LHS - RHS1 - RHS2 for the Q(z) Jacobi coefficient of x0^{-N-1} x1^{-M-1}
template <class K>
std::vector<Term<K>> q_jacobi_terms(long N, long M, const K &z, const ExactComplex &wv, Family &o1, Family &m2,
                                    Family &o3, const Bounds &B, const Rational &wa, const Rational &wb)
{
    std::vector<Term<K>> t;
    const Rational wvr = wv.re();
    for (long i = 0; i < kMaxSumLength; ++i) {
        ExactComplex bin = binomial(ExactComplex(i - M - 1), unsigned(i));
        if (bin.is_zero()) break;
        long k = N + i;
        if (B.hi3 - (k + 1 - wvr) < B.lo3) break;
        if (i % 2) bin = -bin;
        t.push_back({Slot::Out, &o3, k, field<K>(bin) * ipow(z, M - i)});
    }
    for (long i = 0; i < kMaxSumLength; ++i) {
        ExactComplex bin = binomial(ExactComplex(N), unsigned(i));
        if (bin.is_zero()) break;
        long k = N + M - i;
        if (wa + (k + 1 - wvr) < B.lo1) break;
        t.push_back({Slot::In1, &o1, k, -field<K>(bin) * ipow(-z, i)});
    }
    for (long i = 0; i < kMaxSumLength; ++i) {
        ExactComplex bin = binomial(ExactComplex(N), unsigned(i));
        if (bin.is_zero()) break;
        long k = M + i;
        if (wb + (wvr - k - 1) < B.lo2) break;
        if ((N + i) % 2) bin = -bin;
        t.push_back({Slot::In2, &m2, k, field<K>(bin) * ipow(z, N - i)});
    }
    return t;
}

std::string coeff_key(const std::string &head, std::size_t a, std::size_t b, std::size_t c)
{
    std::ostringstream s;
    s << head << " w1=" << a << " w2=" << b << " out=" << c;
    return s.str();
}

template <class K, class TermsFn>
void run_pairs(VerificationReport &r, Kernel<K> &ker, const std::vector<PairKey> &pairs,
               const std::vector<std::string> &heads, TermsFn &&terms_for)
{
    for (const auto &[a, b] : pairs) {
        ker.begin_pair(a, b);
        for (std::size_t h = 0; h < heads.size(); ++h) {
            auto terms = terms_for(h, a, b);
            r.skipped += ker.run(terms, [&](std::size_t c, const K &v) {
                record<K>(r, v, [&] { return coeff_key(heads[h], a, b, c); });
            });
        }
    }
}

struct NM {
    long N, M;
};

std::vector<NM> nm_grid(const VerifyOptions &opt)
{
    std::vector<NM> g;
    for (long N = opt.n_lo; N <= opt.n_hi; ++N)
        for (long M = opt.m_lo; M <= opt.m_hi; ++M) g.push_back({N, M});
    return g;
}

} // namespace

VerificationReport verify_P_jacobi(const PzMap &I, const SparseVector &v, const VerifyOptions &opt)
{
    return dispatch(I, [&](const auto &E) {
        using K = std::decay_t<decltype(E.z)>;
        const auto &V = algebra_of(I);
        const ExactComplex wv = homogeneous_weight(V, v);
        VerificationReport r;
        init_report(r, I, opt, "P(z) Jacobi identity, v = " + vector_name(V, v), "im:def", E.scale);
        Family m1 = modes_of(*I.W1, v, wv), m2 = modes_of(*I.W2, v, wv), m3 = modes_of(*I.W3, v, wv);
        Kernel<K> ker(E);
        const auto grid = nm_grid(opt);
        std::vector<std::string> heads;
        for (auto [N, M] : grid) heads.push_back("N=" + std::to_string(N) + " M=" + std::to_string(M));
        run_pairs(r, ker, input_pairs(I, opt), heads, [&](std::size_t h, std::size_t a, std::size_t b) {
            return p_jacobi_terms<K>(grid[h].N, grid[h].M, E.z, wv, m1, m2, m3, ker.bounds(),
                                     I.W1->weight(a).re(), I.W2->weight(b).re());
        });
        return r;
    });
}

VerificationReport verify_Q_jacobi(const QzMap &J, const SparseVector &v, const VerifyOptions &opt)
{
    return dispatch(J, [&](const auto &E) {
        using K = std::decay_t<decltype(E.z)>;
        const auto &V = algebra_of(J);
        const ExactComplex wv = homogeneous_weight(V, v);
        VerificationReport r;
        init_report(r, J, opt, "Q(z) Jacobi identity, v = " + vector_name(V, v), "imq:def", E.scale);
        Family o1 = opposite_of(*J.W1, v, wv), m2 = modes_of(*J.W2, v, wv), o3 = opposite_of(*J.W3, v, wv);
        Kernel<K> ker(E);
        const auto grid = nm_grid(opt);
        std::vector<std::string> heads;
        for (auto [N, M] : grid) heads.push_back("N=" + std::to_string(N) + " M=" + std::to_string(M));
        run_pairs(r, ker, input_pairs(J, opt), heads, [&](std::size_t h, std::size_t a, std::size_t b) {
            return q_jacobi_terms<K>(grid[h].N, grid[h].M, E.z, wv, o1, m2, o3, ker.bounds(),
                                     J.W1->weight(a).re(), J.W2->weight(b).re());
        });
        return r;
    });
}

VerificationReport verify_P_sl2(const PzMap &I, int j, Sl2Form form, const VerifyOptions &opt)
{
    if (j < -1 || j > 1) throw std::invalid_argument("j must be -1, 0 or 1");
    return dispatch(I, [&](const auto &E) {
        using K = std::decay_t<decltype(E.z)>;
        VerificationReport r;
        init_report(r, I, opt, "sl(2) relation L(" + std::to_string(j) + ")", form == Sl2Form::Lj ? "im:Lj" : "im:Lj2",
                    E.scale);
        Family l1 = sl2_of(*I.W1), l2 = sl2_of(*I.W2), l3 = sl2_of(*I.W3);
        Kernel<K> ker(E);
        const std::string head = "j=" + std::to_string(j);
        run_pairs(r, ker, input_pairs(I, opt), {head}, [&](std::size_t, std::size_t, std::size_t) {
            std::vector<Term<K>> t;
            const K one = field<K>(ExactComplex(1));
            if (form == Sl2Form::Lj) {
                t.push_back({Slot::Out, &l3, j, one});
                t.push_back({Slot::In2, &l2, j, -one});
                for (int i = 0; i <= j + 1; ++i)
                    t.push_back({Slot::In1, &l1, j - i, -field<K>(binomial(ExactComplex(j + 1), unsigned(i))) * ipow(E.z, i)});
            } else {
                t.push_back({Slot::In1, &l1, j, one});
                for (int i = 0; i <= j + 1; ++i) {
                    K c = field<K>(binomial(ExactComplex(j + 1), unsigned(i))) * ipow(-E.z, i);
                    t.push_back({Slot::Out, &l3, j - i, -c});
                    t.push_back({Slot::In2, &l2, j - i, c});
                }
            }
            return t;
        });
        return r;
    });
}

VerificationReport verify_Q_sl2(const QzMap &J, int j, const VerifyOptions &opt)
{
    if (j < -1 || j > 1) throw std::invalid_argument("j must be -1, 0 or 1");
    return dispatch(J, [&](const auto &E) {
        using K = std::decay_t<decltype(E.z)>;
        VerificationReport r;
        init_report(r, J, opt, "Q(z) sl(2) relation L(" + std::to_string(-j) + ")", "imq:Lj", E.scale);
        Family l1 = sl2_of(*J.W1), l2 = sl2_of(*J.W2), l3 = sl2_of(*J.W3);
        Kernel<K> ker(E);
        const std::string head = "j=" + std::to_string(j);
        run_pairs(r, ker, input_pairs(J, opt), {head}, [&](std::size_t, std::size_t, std::size_t) {
            std::vector<Term<K>> t;
            t.push_back({Slot::Out, &l3, -j, field<K>(ExactComplex(1))});
            for (int i = 0; i <= j + 1; ++i) {
                K c = field<K>(binomial(ExactComplex(j + 1), unsigned(i))) * ipow(-E.z, i);
                t.push_back({Slot::In1, &l1, -j + i, -c});
                t.push_back({Slot::In2, &l2, j - i, c});
            }
            return t;
        });
        return r;
    });
}

VerificationReport conformal_residue_P(const PzMap &I, int j, const VerifyOptions &opt)
{
    const auto &V = algebra_of(I);
    if (!V.omega) throw std::invalid_argument("the algebra has no conformal vector");
    const SparseVector w = *V.omega;
    return dispatch(I, [&](const auto &E) {
        using K = std::decay_t<decltype(E.z)>;
        const ExactComplex wv = homogeneous_weight(V, w);
        VerificationReport r;
        init_report(r, I, opt, "conformal residue of the Jacobi identity, j = " + std::to_string(j), "im:def",
                    E.scale);
        Family m1 = modes_of(*I.W1, w, wv), m2 = modes_of(*I.W2, w, wv), m3 = modes_of(*I.W3, w, wv);
        Kernel<K> ker(E);
        run_pairs(r, ker, input_pairs(I, opt), {"j=" + std::to_string(j)},
                  [&](std::size_t, std::size_t a, std::size_t b) {
                      return p_jacobi_terms<K>(0, j + 1, E.z, wv, m1, m2, m3, ker.bounds(), I.W1->weight(a).re(),
                                               I.W2->weight(b).re());
                  });
        return r;
    });
}

VerificationReport conformal_residue_Q(const QzMap &J, int j, const VerifyOptions &opt)
{
    const auto &V = algebra_of(J);
    if (!V.omega) throw std::invalid_argument("the algebra has no conformal vector");
    const SparseVector w = *V.omega;
    return dispatch(J, [&](const auto &E) {
        using K = std::decay_t<decltype(E.z)>;
        const ExactComplex wv = homogeneous_weight(V, w);
        VerificationReport r;
        init_report(r, J, opt, "conformal residue of the Q(z) Jacobi identity, j = " + std::to_string(j),
                    "imq:def", E.scale);
        Family o1 = opposite_of(*J.W1, w, wv), m2 = modes_of(*J.W2, w, wv), o3 = opposite_of(*J.W3, w, wv);
        Kernel<K> ker(E);
        run_pairs(r, ker, input_pairs(J, opt), {"j=" + std::to_string(j)},
                  [&](std::size_t, std::size_t a, std::size_t b) {
                      return q_jacobi_terms<K>(j + 1, 0, E.z, wv, o1, m2, o3, ker.bounds(), J.W1->weight(a).re(),
                                               J.W2->weight(b).re());
                  });
        return r;
    });
}

VerificationReport verify_elm(const PzMap &I, const SparseVector &v, long m, const VerifyOptions &opt)
{
    return dispatch(I, [&](const auto &E) {
        using K = std::decay_t<decltype(E.z)>;
        const auto &V = algebra_of(I);
        const ExactComplex wv = homogeneous_weight(V, v);
        VerificationReport r;
        init_report(r, I, opt, "module action on tensor elements, v = " + vector_name(V, v), "elm", E.scale);
        Family m1 = modes_of(*I.W1, v, wv), m2 = modes_of(*I.W2, v, wv), m3 = modes_of(*I.W3, v, wv);
        Kernel<K> ker(E);
        const Bounds &B = ker.bounds();
        run_pairs(r, ker, input_pairs(I, opt), {"m=" + std::to_string(m)},
                  [&](std::size_t, std::size_t a, std::size_t) {
                      const K one = field<K>(ExactComplex(1));
                      std::vector<Term<K>> t{{Slot::Out, &m3, m, one}, {Slot::In2, &m2, m, -one}};
                      const Rational wa = I.W1->weight(a).re();
                      for (long i = 0; i < kMaxSumLength; ++i) {
                          ExactComplex bin = binomial(ExactComplex(m), unsigned(i));
                          if (bin.is_zero()) break;
                          if (wa + (wv.re() - i - 1) < B.lo1) break;
                          t.push_back({Slot::In1, &m1, i, -field<K>(bin) * ipow(E.z, m - i)});
                      }
                      return t;
                  });
        return r;
    });
}

bool records_identical(const VerificationReport &a, const VerificationReport &b)
{
    return a.records == b.records && a.checked == b.checked && a.skipped == b.skipped;
}

} // namespace logtensor
