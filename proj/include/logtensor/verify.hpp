#pragma once

#include <string>
#include <vector>

#include <logtensor/intertwining.hpp>
#include <logtensor/report.hpp>

namespace logtensor {

struct VerifyOptions {
    double tolerance = 1e-9;
    long n_lo = -3, n_hi = 3; // coefficient of x0^{-N-1}
    long m_lo = -3, m_hi = 3; // coefficient of x1^{-M-1}
    bool keep_records = false;
    std::vector<PairKey> pairs; // empty: every stored input pair
};

enum class Sl2Form { Lj, Lj2 };

VerificationReport verify_P_jacobi(const PzMap &I, const SparseVector &v, const VerifyOptions &opt);
VerificationReport verify_Q_jacobi(const QzMap &J, const SparseVector &v, const VerifyOptions &opt);

VerificationReport verify_P_sl2(const PzMap &I, int j, Sl2Form form, const VerifyOptions &opt);
VerificationReport verify_Q_sl2(const QzMap &J, int j, const VerifyOptions &opt);

// Res_x0 Res_x1 x1^{j+1} of the Jacobi identity at v = omega, keyed like the sl(2) report
VerificationReport conformal_residue_P(const PzMap &I, int j, const VerifyOptions &opt);
VerificationReport conformal_residue_Q(const QzMap &J, int j, const VerifyOptions &opt);

// v_m I(w1 (x) w2) = I(w1 (x) v_m w2) + sum_i C(m,i) z^{m-i} I(v_i w1 (x) w2)
VerificationReport verify_elm(const PzMap &I, const SparseVector &v, long m, const VerifyOptions &opt);

// same keys, same exact-zero flags, same magnitudes
bool records_identical(const VerificationReport &a, const VerificationReport &b);

SparseVector basis_vector(std::size_t i);

} // namespace logtensor
