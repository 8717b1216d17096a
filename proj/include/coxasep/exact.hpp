#pragma once

#include <utility>
#include <vector>

#include "coxasep/asep.hpp"
#include "coxasep/markov_ops.hpp"

namespace coxasep {

/// Certified uniformization data: the Poisson tail beyond the truncation order
/// is bounded by error_bound.
struct SemigroupApprox {
    double uniformization_rate = 0;
    int truncation_order = 0;
    double error_bound = 0;
};

/// Row of exp(tQ) from a point mass, by uniformization. Throws if eps is not
/// reachable within max_terms.
std::pair<std::vector<double>, SemigroupApprox> uniformized_row(const RateMatrix<double>& Q,
                                                                int start, double t, double eps,
                                                                int max_terms = 200000);

/// Dense exp(tQ); rows are stochastic within eps.
std::pair<std::vector<std::vector<double>>, SemigroupApprox> transition_matrix(
    const RateMatrix<double>& Q, double t, double eps, int max_terms = 200000);

/// max_j |(mu Q)_j|; dimension mismatch is an error, a nonzero residual is a result.
Rational check_stationarity(const RateMatrix<Rational>& Q, const std::vector<Rational>& mu);

/// q-exchangeable measure on W pushed through the double-coset class map onto
/// the configuration space indexed by `space` (the stationarity candidate).
std::vector<Rational> pushforward_q_exchangeable(const StateSpace& space,
                                                 const ParabolicSpec& hp,
                                                 const ParabolicSpec& h, const Rational& q);

/// Group-side kernels of the fused-chain structure. lambda expands an A-state
/// q-exchangeably over its D_H fiber; phi projects a B-state to its A-state.
struct FusedStructure {
    StateSpace a_space;  // configurations of the double-coset space
    StateSpace b_space;  // fine color-blind configurations (D_H)
    RateMatrix<Rational> lambda;  // |A| x |B| stochastic
    RateMatrix<Rational> phi;     // |B| x |A| deterministic
    std::vector<SignedPermutation> a_reps;
    std::vector<SignedPermutation> b_reps;
};

FusedStructure fused_structure(const ParabolicSpec& hp, const ParabolicSpec& h,
                               const Rational& q);

/// ProcessSpec of the fine (unit-site) chain matching a fused process:
/// boundary None stays None, both boundary cases refine to Case 1 flips.
ProcessSpec fine_process(const ParabolicSpec& h, const Rational& q, Boundary fused_boundary);

/// Entrywise check of the generator factorization: the fused generator equals
/// lambda * L_fine * phi as finite kernels, exactly under rationals.
struct FactorizationReport {
    bool equal = true;
    Rational max_abs_difference = Rational(0);
    int dimension = 0;
};
FactorizationReport check_generator_factorization(const ParabolicSpec& hp,
                                                  const ParabolicSpec& h, const Rational& q,
                                                  Boundary boundary);

/// Distributional color-position certificate. From the packed state, the
/// time-t law of the double-coset process is compared with its image under
/// group inversion (the position reading of the time-reversed run); the same
/// check is run on the drift-reversed generator.
struct ColposCertificate {
    double time = 0;
    double discrepancy_forward = 0;
    double discrepancy_reversed = 0;
    double eps = 0;
    bool exact_zero = true;  // rational check at fixed shared truncation
};

std::vector<ColposCertificate> certify_colpos(const ProcessSpec& p, const ParabolicSpec& hp,
                                              const ParabolicSpec& h,
                                              const std::vector<double>& times,
                                              double eps = 1e-12, bool rational_check = true);

/// Exhaustive commutativity / fiber / bijectivity verdicts for one square.
struct DiagramReport {
    bool fibers_ok = true;
    bool commutes_ok = true;
    bool bijection_ok = true;
    std::size_t checked = 0;
};

DiagramReport certify_diagrams(const ParabolicSpec& hp, const ParabolicSpec& h);

}  // namespace coxasep
