#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coxasep {

/// One machine-readable verification record: check,instance,residual,eps,ms.
struct CheckRecord {
    std::string check;
    std::string instance;
    double residual = 0;
    double eps = 0;
    long ms = 0;
    bool pass = false;
};

/// Length formula vs Cayley-graph BFS, group orders, Poincare product formula.
std::vector<CheckRecord> verify_coxeter(int max_rank_a = 5, int max_rank_bc = 3);

/// Commutative-diagram squares: S_4 composition pairs and the BC cases.
std::vector<CheckRecord> verify_diagrams();

/// Algebraic color-position identity over random step sequences.
std::vector<CheckRecord> verify_colpos_algebraic(long sequences_per_group = 1000,
                                                 uint64_t seed = 1, int max_rank = 4);

/// Two-generator associativity sweep: case coverage, operator equality, braid.
std::vector<CheckRecord> verify_associativity(uint64_t seed = 1);

/// Exact stationarity of the pushed-forward q-exchangeable measures.
std::vector<CheckRecord> verify_stationarity();

/// Fused generator equals Lambda L Phi entrywise.
std::vector<CheckRecord> verify_factorization();

/// Dynamical color-position certificates via uniformization.
std::vector<CheckRecord> verify_colpos_dynamic();

/// Runs one named suite ("coxeter", "diagrams", "colpos", "associativity",
/// "stationarity", "factorization", "colpos-dynamic", or "all").
std::vector<CheckRecord> run_verify_suite(const std::string& suite, uint64_t seed = 1,
                                          int max_rank = 4);

}  // namespace coxasep
