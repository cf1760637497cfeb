#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <logtensor/intertwining.hpp>
#include <logtensor/module.hpp>

namespace logtensor {

/// Thrown when a request exceeds a fixed resource bound.
struct ResourceGuard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr unsigned kMaxFockCutoff = 10;

using Partition = std::vector<unsigned>; // parts, non-increasing

// all partitions of size <= cutoff; by size, then reverse lexicographic
std::vector<Partition> partitions_up_to(unsigned cutoff);

// rank-one Heisenberg VOA truncated at weight 2: 1, a(-1)1, a(-2)1, a(-1)^2 1
std::shared_ptr<const VertexAlgebra> heisenberg_algebra();

// Fock module M(lambda) on partitions of size <= cutoff
ModulePtr build_fock(const Rational &lambda, unsigned cutoff);
// largest level whose weight lambda^2/2 + level fits below wt_hi
unsigned fock_cutoff(const Rational &lambda, const Rational &wt_hi);
Rational fock_momentum(const GeneralizedModule &M);

// Heisenberg oscillator a_k on a Fock module (k = 0 acts by the momentum)
SparseMatrix fock_alpha(const GeneralizedModule &M, long k);
// Sugawara L(-1), L(1) assembled from oscillators
SparseMatrix fock_sugawara(const GeneralizedModule &M, int j);

// Y of type (M(l+m); M(l) M(m)) on the given truncated modules
LogIntwOp heis_intw(const ModulePtr &A, const ModulePtr &B, const ModulePtr &C);
LogIntwOp heis_intw(const Rational &lambda, const Rational &mu, const Rational &wt_hi);

// the one-dimensional algebra C1
std::shared_ptr<const VertexAlgebra> trivial_algebra();
// weight-h module with L(+-1) = 0 and semisimple L(0)
ModulePtr trivial_module(const std::string &label, const std::vector<ExactComplex> &weights);
// the algebra C1 as a module over itself
ModulePtr trivial_vacuum_module();

// eps-deformed truncated Verma module over C[eps]/(eps^r), levels 0..levels
ModulePtr jordan_module(const std::string &label, const Rational &h, unsigned r, unsigned levels);

struct JordanFamily {
    unsigned r = 2;             // nilpotency index
    std::uint64_t seed = 0;
    unsigned support = 50;      // number of random constant-term entries
    unsigned levels = 1;
};

struct RandomFamily {
    LogIntwOp Y;
    unsigned max_logpower = 0;
};

// deterministic from the seed; satisfies the L(0) relation and weight law
RandomFamily random_log_family(const JordanFamily &spec);
// same construction over given modules (trivial algebra)
LogIntwOp random_log_family(const ModulePtr &W1, const ModulePtr &W2, const ModulePtr &W3,
                            std::uint64_t seed, unsigned support);

} // namespace logtensor
