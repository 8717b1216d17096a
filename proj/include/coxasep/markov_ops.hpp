#pragma once

#include <map>
#include <vector>

#include "coxasep/coxeter.hpp"
#include "coxasep/rational.hpp"

namespace coxasep {

/// Finitely supported vector in the group algebra, canonically ordered.
template <class R>
using GroupVector = std::map<SignedPermutation, R>;

struct StepSpec {
    int gen = 1;
    Rational x = Rational(1, 2);
};

enum class StepOrder { Forward, Reversed };
enum class ActionSide { Left, Right };

namespace detail {

template <class R>
void check_step_range(const R& x, const R& q, bool exact_unchecked) {
    if (exact_unchecked) return;
    if (x < R(0) || x > R(1) || q * x < R(0) || q * x > R(1))
        throw std::domain_error("markov step: x and qx must lie in [0,1]");
}

}  // namespace detail

/// L_{s,x}: (1-x) w + x s w when l(sw) > l(w), else (1-qx) w + qx s w.
template <class R>
GroupVector<R> left_step(const GroupVector<R>& v, int gen, const R& x, const R& q,
                         bool exact_unchecked = false) {
    detail::check_step_range(x, q, exact_unchecked);
    GroupVector<R> out;
    for (const auto& [w, coeff] : v) {
        auto s = SignedPermutation::generator(w.type(), gen);
        auto sw = multiply(s, w);
        R move = length(sw) > length(w) ? x : q * x;
        if (R stay = coeff * (R(1) - move); stay != R(0)) out[w] += stay;
        if (R go = coeff * move; go != R(0)) out[sw] += go;
    }
    return out;
}

/// w L~_{s,x}: (1-x) w + x w s when l(ws) > l(w), else (1-qx) w + qx w s.
template <class R>
GroupVector<R> right_step(const GroupVector<R>& v, int gen, const R& x, const R& q,
                          bool exact_unchecked = false) {
    detail::check_step_range(x, q, exact_unchecked);
    GroupVector<R> out;
    for (const auto& [w, coeff] : v) {
        auto s = SignedPermutation::generator(w.type(), gen);
        auto ws = multiply(w, s);
        R move = length(ws) > length(w) ? x : q * x;
        if (R stay = coeff * (R(1) - move); stay != R(0)) out[w] += stay;
        if (R go = coeff * move; go != R(0)) out[ws] += go;
    }
    return out;
}

/// Coefficient family from delta_e.
///   Forward/Left   : f_n   (L_{s_{i_n},x_n} ... L_{s_{i_1},x_1} e)
///   Reversed/Left  : f~_n  (L_{s_{i_1},x_1} ... L_{s_{i_n},x_n} e)
///   Reversed/Right : g~_n  (e L~_{s_{i_n},x_n} ... L~_{s_{i_1},x_1})
GroupVector<Rational> step_coefficients(CoxeterType type, const std::vector<StepSpec>& steps,
                                        StepOrder order, ActionSide side, const Rational& q);

struct ColposReport {
    bool colpos_holds = true;       // f_n(e->pi) == f~_n(e->pi^{-1})
    bool lr_relation_holds = true;  // g~_n(e->pi) == f~_n(e->pi^{-1})
    Rational max_discrepancy = Rational(0);
};

ColposReport check_colpos(CoxeterType type, const std::vector<StepSpec>& steps,
                          const Rational& q);

/// The six length sign patterns of the two-generator associativity analysis.
int classify_associativity(const SignedPermutation& w, int i, int j);

struct AssociativityReport {
    int case_label = 0;
    bool sides_equal = false;
    bool braid_identity = true;    // s_i w == w s_j, checked in cases 5/6
    bool scalar_identity = true;   // (1-x)y + x(1-qy) == x(1-y) + (1-qx)y
};

AssociativityReport check_associativity(const SignedPermutation& w, int i, int j,
                                        const Rational& x1, const Rational& x2,
                                        const Rational& q);

}  // namespace coxasep
