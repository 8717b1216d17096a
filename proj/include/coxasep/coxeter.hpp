#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "coxasep/rational.hpp"

namespace coxasep {

enum class Family { A, BC };

/// A_{N-1} acts on {1..N} with generators s_1..s_{N-1}; BC_N acts on
/// {-N..-1,1..N} preserving the pairs {-i,i}, with the extra generator s_0.
struct CoxeterType {
    Family family = Family::A;
    int rank = 1;  // N

    bool operator==(const CoxeterType&) const = default;
    auto operator<=>(const CoxeterType&) const = default;

    int first_generator() const { return family == Family::BC ? 0 : 1; }
    std::vector<int> generators() const;
    /// Coxeter matrix entry m_ij (s_0 s_1 has order 4 in type BC).
    int coxeter_m(int i, int j) const;
};

/// Group element in window notation: window[i-1] = w(i). For type BC the
/// window lists w(1..N); w(-i) = -w(i) is implicit.
class SignedPermutation {
public:
    SignedPermutation() = default;
    SignedPermutation(CoxeterType type, std::vector<int> window);

    static SignedPermutation identity(CoxeterType type);
    static SignedPermutation generator(CoxeterType type, int i);

    const CoxeterType& type() const { return type_; }
    int rank() const { return type_.rank; }
    const std::vector<int>& window() const { return window_; }

    /// Image of i under w, for i in {-N..-1,1..N}.
    int operator()(int i) const {
        return i > 0 ? window_[static_cast<size_t>(i) - 1]
                     : -window_[static_cast<size_t>(-i) - 1];
    }

    bool is_identity() const;

    bool operator==(const SignedPermutation&) const = default;
    auto operator<=>(const SignedPermutation&) const = default;

    /// Canonical text form, e.g. "A:3:[2,3,1]" or "BC:2:[-2,1]".
    std::string to_string() const;
    static SignedPermutation parse(const std::string& text);

private:
    CoxeterType type_;
    std::vector<int> window_;
};

/// Composition acting on positions: (a*b)(i) = a(b(i)).
SignedPermutation multiply(const SignedPermutation& a, const SignedPermutation& b);
SignedPermutation inverse(const SignedPermutation& w);

/// Inversion-count length; agrees with Cayley-graph distance from e.
int length(const SignedPermutation& w);

/// A minimal word s_{i_1}...s_{i_l} with product w, by greedy descent.
std::vector<int> reduced_word(const SignedPermutation& w);

/// Parabolic subgroup spec: S(N_1) x ... x S(N_n), plus s_0 when includes_s0.
struct ParabolicSpec {
    CoxeterType ctype;
    std::vector<int> blocks;
    bool includes_s0 = false;

    ParabolicSpec() = default;
    ParabolicSpec(CoxeterType t, std::vector<int> b, bool s0 = false);

    std::vector<int> generators() const;
    static ParabolicSpec trivial(CoxeterType t);
    static ParabolicSpec full(CoxeterType t);
};

inline constexpr std::size_t kEnumerationCap = 10'000'000;

std::size_t group_order(CoxeterType type);
std::vector<SignedPermutation> enumerate_group(CoxeterType type,
                                               std::size_t cap = kEnumerationCap);
/// Closure of the parabolic generators under multiplication.
std::vector<SignedPermutation> enumerate_parabolic(const ParabolicSpec& h,
                                                   std::size_t cap = kEnumerationCap);

enum class Side { Left, Right };

/// side == Right: the unique x in D_H with w in xH and l(w) = l(x) + l(x^{-1}w).
/// side == Left: the mirror statement for the coset Hw.
SignedPermutation min_coset_rep(const SignedPermutation& w, const ParabolicSpec& h,
                                Side side);

/// Minimal-length element of H' w H; lies in D_{H'}^{-1} \cap D_H.
SignedPermutation double_coset_rep(const SignedPermutation& w, const ParabolicSpec& hp,
                                   const ParabolicSpec& h);

std::vector<SignedPermutation> enumerate_dcoset_reps(const ParabolicSpec& hp,
                                                     const ParabolicSpec& h,
                                                     std::size_t cap = kEnumerationCap);

/// Polynomial in q with non-negative integer coefficients.
class QSeries {
public:
    QSeries() = default;
    explicit QSeries(std::vector<long long> coeffs);

    long long coeff(int k) const;
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<long long>& coeffs() const { return coeffs_; }

    void add_term(int k, long long c = 1);
    QSeries operator*(const QSeries& other) const;
    bool operator==(const QSeries&) const = default;

    template <class R>
    R evaluate(const R& q) const {
        R acc(0), pow(1);
        for (long long c : coeffs_) {
            acc += R(c) * pow;
            pow *= q;
        }
        return acc;
    }

    std::string to_string() const;

private:
    std::vector<long long> coeffs_;
};

QSeries poincare_series(const std::vector<SignedPermutation>& set);
/// [m]_q as a polynomial.
QSeries q_integer_series(int m);
/// Product formula over the exponents: 1..N-1 for A_{N-1}, odd 1,3,..,2N-1 for BC_N.
QSeries group_poincare_product(CoxeterType type);

/// P(y) = q^{l(y)} / sum over the set; requires q > 0.
template <class R>
std::map<SignedPermutation, R> q_exchangeable(const std::vector<SignedPermutation>& set,
                                              const R& q) {
    if (!(q > R(0))) throw std::domain_error("q_exchangeable: q must be positive");
    if (set.empty()) throw std::domain_error("q_exchangeable: empty set");
    std::map<SignedPermutation, R> out;
    R norm(0);
    for (const auto& y : set) {
        R w = q_pow(q, length(y));
        out[y] = w;
        norm += w;
    }
    for (auto& [y, p] : out) p /= norm;
    return out;
}

}  // namespace coxasep
