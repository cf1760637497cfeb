#pragma once

#include <map>
#include <optional>

#include <logtensor/intertwining.hpp>
#include <logtensor/report.hpp>

namespace logtensor {

struct UnitResult {
    std::map<std::size_t, SeriesVector> eta; // e_b -> eta(e_b)
    std::optional<SparseMatrix> matrix;      // set when every component is a constant
    VerificationReport report;
};

// I of type (W3; V W), V the algebra viewed as a module
UnitResult unit_eta_left(const PzMap &I, double tol = 1e-9);
// I of type (W3; W V)
UnitResult unit_eta_right(const PzMap &I, double tol = 1e-9);

// I(u (x) w) = f(Y_W(u, z) w)
PzMap planted_left(const ModulePtr &V, const ModulePtr &W, const ModulePtr &W3, const SparseMatrix &f,
                   const BranchPoint &bp);
// I(w (x) u) = f(e^{z L(-1)} Y_W(u, -z) w)
PzMap planted_right(const ModulePtr &V, const ModulePtr &W, const ModulePtr &W3, const SparseMatrix &f,
                    const BranchPoint &bp);

} // namespace logtensor
