#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "coxasep/exact.hpp"

using namespace coxasep;

namespace {

ProcessSpec dcoset_process(const ParabolicSpec& hp, const ParabolicSpec& h, const Rational& q,
                           Boundary boundary) {
    return ProcessSpec{dcoset_space(hp, h), q, boundary, false};
}

}  // namespace

TEST_CASE("uniformized row: t = 0 is the point mass") {
    RateMatrix<double> q2(2);
    double qv = 0.4;
    q2.add(0, 1, qv);
    q2.add(0, 0, -qv);
    q2.add(1, 0, 1.0);
    q2.add(1, 1, -1.0);
    auto [row, approx] = uniformized_row(q2, 0, 0.0, 1e-12);
    CHECK(row[0] == 1.0);
    CHECK(approx.error_bound == 0.0);
}

TEST_CASE("uniformized row matches the closed-form two-state solution") {
    // generator [[-1, 1], [q, -q]]
    double q = 0.37;
    RateMatrix<double> gen(2);
    gen.add(0, 0, -1.0);
    gen.add(0, 1, 1.0);
    gen.add(1, 0, q);
    gen.add(1, 1, -q);
    for (double t : {0.3, 1.0, 2.5}) {
        auto [row, approx] = uniformized_row(gen, 0, t, 1e-13);
        double lam = 1.0 + q;
        double p01 = (1.0 / lam) * (1.0 - std::exp(-lam * t));
        CHECK(row[1] == doctest::Approx(p01).epsilon(1e-11));
        CHECK(row[0] + row[1] == doctest::Approx(1.0).epsilon(1e-11));
        CHECK(approx.error_bound <= 1e-13);
    }
}

TEST_CASE("transition matrix rows are stochastic on a mid-size generator") {
    CoxeterType bc2{Family::BC, 2};
    ParabolicSpec hp = ParabolicSpec::trivial(bc2), h = ParabolicSpec::trivial(bc2);
    auto p = dcoset_process(hp, h, Rational(1, 2), Boundary::Case1);
    auto [space, gen] = build_generator<double>(p);
    auto [mat, approx] = transition_matrix(gen, 0.7, 1e-12);
    for (const auto& row : mat) {
        double sum = 0;
        for (double v : row) {
            sum += v;
            CHECK(v >= -1e-15);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    }
    // increasing the truncation order shrinks the certified bound
    auto [row1, a1] = uniformized_row(gen, 0, 1.0, 1e-6);
    auto [row2, a2] = uniformized_row(gen, 0, 1.0, 1e-12);
    CHECK(a2.truncation_order > a1.truncation_order);
    CHECK(a2.error_bound < a1.error_bound);
}

TEST_CASE("stationarity: single state and negative control") {
    RateMatrix<Rational> zero(1);
    CHECK(check_stationarity(zero, {Rational(1)}) == Rational(0));

    RateMatrix<Rational> gen(2);  // asymmetric two-state chain
    gen.add(0, 1, Rational(1));
    gen.add(0, 0, Rational(-1));
    gen.add(1, 0, Rational(1, 3));
    gen.add(1, 1, Rational(-1, 3));
    CHECK(check_stationarity(gen, {Rational(1, 2), Rational(1, 2)}) > Rational(0));
    CHECK_THROWS_AS(check_stationarity(gen, {Rational(1)}), std::invalid_argument);
}

TEST_CASE("q-exchangeable pushforward is stationary: BC_2 Case 1") {
    CoxeterType bc2{Family::BC, 2};
    for (const Rational& q : {Rational(1, 2), Rational(1, 3)}) {
        // m = (1,1), N = (1,1): full signed state space with boundary flips
        ParabolicSpec hp(bc2, {1, 1}, false), h(bc2, {1, 1}, false);
        auto p = dcoset_process(hp, h, q, Boundary::Case1);
        auto [space, gen] = build_generator<Rational>(p);
        CHECK(space.size() == 8);
        for (int r = 0; r < gen.n; ++r) CHECK(gen.row_sum(r) == Rational(0));
        auto mu = pushforward_q_exchangeable(space, hp, h, q);
        CHECK(check_stationarity(gen, mu) == Rational(0));
    }
}

TEST_CASE("q-exchangeable pushforward is stationary: BC_2 single fused site") {
    CoxeterType bc2{Family::BC, 2};
    ParabolicSpec hp(bc2, {2}, false), h(bc2, {2}, false);
    auto p = dcoset_process(hp, h, Rational(2, 5), Boundary::Case1);
    auto [space, gen] = build_generator<Rational>(p);
    CHECK(space.size() == 3);  // {1,1}, {1,-1}, {-1,-1}
    auto mu = pushforward_q_exchangeable(space, hp, h, Rational(2, 5));
    CHECK(check_stationarity(gen, mu) == Rational(0));
}

TEST_CASE("q-exchangeable pushforward is stationary: BC_2 Case 2 (both H flavors)") {
    CoxeterType bc2{Family::BC, 2};
    for (bool h_s0 : {false, true}) {
        ParabolicSpec hp(bc2, {1, 1}, true), h(bc2, {1, 1}, h_s0);
        auto p = dcoset_process(hp, h, Rational(1, 2), Boundary::Case2);
        auto [space, gen] = build_generator<Rational>(p);
        auto mu = pushforward_q_exchangeable(space, hp, h, Rational(1, 2));
        CHECK(check_stationarity(gen, mu) == Rational(0));
    }
}

TEST_CASE("q-exchangeable pushforward is stationary: BC_3 instances") {
    CoxeterType bc3{Family::BC, 3};
    {
        ParabolicSpec hp(bc3, {1, 2}, false), h(bc3, {2, 1}, false);
        auto p = dcoset_process(hp, h, Rational(1, 2), Boundary::Case1);
        auto [space, gen] = build_generator<Rational>(p);
        auto mu = pushforward_q_exchangeable(space, hp, h, Rational(1, 2));
        CHECK(check_stationarity(gen, mu) == Rational(0));
    }
    {
        ParabolicSpec hp(bc3, {1, 2}, true), h(bc3, {1, 2}, true);
        auto p = dcoset_process(hp, h, Rational(1, 2), Boundary::Case2);
        auto [space, gen] = build_generator<Rational>(p);
        auto mu = pushforward_q_exchangeable(space, hp, h, Rational(1, 2));
        CHECK(check_stationarity(gen, mu) == Rational(0));
    }
}

TEST_CASE("type A fused chain: pushforward stationary, free chain reversible") {
    CoxeterType a3{Family::A, 3};
    ParabolicSpec hp(a3, {2, 1}), h(a3, {2, 1});
    auto p = dcoset_process(hp, h, Rational(1, 2), Boundary::None);
    auto [space, gen] = build_generator<Rational>(p);
    auto mu = pushforward_q_exchangeable(space, hp, h, Rational(1, 2));
    CHECK(check_stationarity(gen, mu) == Rational(0));
}

TEST_CASE("generator factorization: fused equals Lambda L Phi (type A)") {
    CoxeterType a4{Family::A, 4};
    for (auto caps : {std::vector<int>{2, 1, 1}, std::vector<int>{2, 2}}) {
        for (auto blocks : {std::vector<int>{1, 1, 1, 1}, std::vector<int>{2, 2}}) {
            ParabolicSpec hp(a4, caps), h(a4, blocks);
            auto report =
                check_generator_factorization(hp, h, Rational(1, 2), Boundary::None);
            INFO("caps ", caps.size(), " blocks ", blocks.size());
            CHECK(report.equal);
            CHECK(report.max_abs_difference == Rational(0));
        }
    }
}

TEST_CASE("generator factorization: BC boundary cases") {
    CoxeterType bc2{Family::BC, 2};
    {
        ParabolicSpec hp(bc2, {1, 1}, false), h(bc2, {1, 1}, false);
        auto report = check_generator_factorization(hp, h, Rational(1, 3), Boundary::Case1);
        CHECK(report.equal);
    }
    {
        ParabolicSpec hp(bc2, {1, 1}, true), h(bc2, {1, 1}, true);
        auto report = check_generator_factorization(hp, h, Rational(1, 3), Boundary::Case2);
        CHECK(report.equal);
    }
}

TEST_CASE("commutative diagrams: S_4 compositions") {
    CoxeterType a4{Family::A, 4};
    for (auto blocks : {std::vector<int>{2, 2}, std::vector<int>{3, 1}, std::vector<int>{2, 1, 1}}) {
        ParabolicSpec hp(a4, {2, 2}), h(a4, blocks);
        auto report = certify_diagrams(hp, h);
        CHECK(report.fibers_ok);
        CHECK(report.commutes_ok);
        CHECK(report.bijection_ok);
    }
}

TEST_CASE("commutative diagrams: BC_2 all four cases") {
    CoxeterType bc2{Family::BC, 2};
    for (bool hp0 : {false, true})
        for (bool h0 : {false, true}) {
            ParabolicSpec hp(bc2, {1, 1}, hp0), h(bc2, {1, 1}, h0);
            auto report = certify_diagrams(hp, h);
            CHECK(report.fibers_ok);
            CHECK(report.commutes_ok);
            CHECK(report.bijection_ok);
        }
}

TEST_CASE("color-position certificate: S_3 free chain") {
    CoxeterType a3{Family::A, 3};
    ParabolicSpec triv = ParabolicSpec::trivial(a3);
    auto p = dcoset_process(triv, triv, Rational(1, 2), Boundary::None);
    auto certs = certify_colpos(p, triv, triv, {0.0, 0.5, 1.0, 2.0});
    for (const auto& cert : certs) {
        CHECK(cert.discrepancy_forward <= 1e-10);
        CHECK(cert.discrepancy_reversed <= 1e-10);
        CHECK(cert.exact_zero);
    }
}

TEST_CASE("color-position certificate: BC_2 Case 2 mirror chain") {
    CoxeterType bc2{Family::BC, 2};
    ParabolicSpec hh(bc2, {1, 1}, true);
    auto p = dcoset_process(hh, hh, Rational(1, 2), Boundary::Case2);
    auto certs = certify_colpos(p, hh, hh, {0.5, 1.0, 2.0});
    for (const auto& cert : certs) {
        CHECK(cert.discrepancy_forward <= 1e-10);
        CHECK(cert.discrepancy_reversed <= 1e-10);
        CHECK(cert.exact_zero);
    }
}

TEST_CASE("color-position certificate rejects one-sided parabolic pairs") {
    CoxeterType a3{Family::A, 3};
    ParabolicSpec hp(a3, {2, 1}), h(a3, {1, 2});
    auto p = dcoset_process(hp, h, Rational(1, 2), Boundary::None);
    CHECK_THROWS_AS(certify_colpos(p, hp, h, {1.0}), std::domain_error);
}
