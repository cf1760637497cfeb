#pragma once

#include <cstddef>

#include <logtensor/intertwining.hpp>
#include <logtensor/report.hpp>

namespace logtensor {

// Omega_r(Z)(a,x)b = e^{x L(-1)} Z(b, e^{(2r+1) pi i} x) a; type (W3; W1 W2) -> (W3; W2 W1)
LogIntwOp omega_r(const LogIntwOp &Z, long r);

// type (W3; W1 W2) -> (W1'; W3' W2)
LogIntwOp b_r(const LogIntwOp &Y, long r);

// A_{r2} realised as Omega_s^{-1} B_{r2-2s-1} Omega_s^{-1}
LogIntwOp a_r(const LogIntwOp &Z, long r2, long s);

// Omega_{r3} A_{r2} Omega_{r3} = B_r for (r2, r3) = (r+1, 0) and (r+3, 1)
VerificationReport check_b_factorizations(const LogIntwOp &Y, long r);

struct RankResult {
    std::size_t domain_dim = 0;
    std::size_t rank = 0;
};
// B_r on every unit coefficient entry compatible with the weight law, log powers <= max_logpower
RankResult b_r_rank(const ModulePtr &W1, const ModulePtr &W2, const ModulePtr &W3, long r, unsigned max_logpower);

// p with -(log z^{-1} + 2 pi i p) = log z, principal logs
long mu_branch(NumericComplex z);

QzMap mu(const PzMap &I);         // Q-map at (z^{-1}, p)
PzMap mu_inverse(const QzMap &J); // P-map at (z, 0)
PzMap rebase(const PzMap &I, long p);

VerificationReport check_mu_roundtrip(const PzMap &I, double tol);

} // namespace logtensor
