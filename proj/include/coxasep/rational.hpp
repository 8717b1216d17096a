#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace coxasep {

/// Exact scalar used by the verification engine. Simulation paths use double.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational rational(long num, long den = 1) { return Rational(num, den); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) { return r.str(); }

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// [m]_q = 1 + q + ... + q^{m-1}, the q-deformed integer.
template <class R>
R q_int(int m, const R& q) {
    R acc(0), pow(1);
    for (int i = 0; i < m; ++i) {
        acc += pow;
        pow *= q;
    }
    return acc;
}

template <class R>
R q_pow(const R& q, long e) {
    R acc(1);
    for (long i = 0; i < e; ++i) acc *= q;
    return acc;
}

}  // namespace coxasep
