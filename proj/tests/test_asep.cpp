#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "coxasep/asep.hpp"
#include "coxasep/exact.hpp"

using namespace coxasep;

namespace {

ParticleConfig packed(const ParabolicSpec& hp, const ParabolicSpec& h) {
    return dcoset_to_config(SignedPermutation::identity(hp.ctype), hp, h, ThetaVariant::One);
}

// chi-square statistic against expected probabilities
double chi_square(const std::map<std::vector<int>, long>& counts,
                  const std::vector<std::pair<std::vector<int>, double>>& expected, long n) {
    double stat = 0;
    for (const auto& [key, prob] : expected) {
        double exp_count = prob * static_cast<double>(n);
        auto it = counts.find(key);
        double obs = it == counts.end() ? 0.0 : static_cast<double>(it->second);
        if (exp_count > 0) stat += (obs - exp_count) * (obs - exp_count) / exp_count;
    }
    return stat;
}

}  // namespace

TEST_CASE("bulk_rate: isolated particle rates") {
    // m = 1, species 2 = particle above species 1 = hole
    CoxeterType a2{Family::A, 2};
    LatticeSpec spec(a2, {1, 1}, {1, 1});
    ParticleConfig c(spec);
    c.add(1, 2, 1);
    c.add(2, 1, 1);
    Rational q(1, 2);
    CHECK(bulk_rate(c, 1, 2, 1, SwapDirection::RightOverLeft, q) == Rational(1));
    CHECK(bulk_rate(c, 1, 2, 1, SwapDirection::LeftOverRight, q) == Rational(0));
    ParticleConfig d(spec);
    d.add(1, 1, 1);
    d.add(2, 2, 1);
    CHECK(bulk_rate(d, 1, 2, 1, SwapDirection::LeftOverRight, q) == q);
    CHECK_THROWS_AS(bulk_rate(c, 1, 1, 2, SwapDirection::RightOverLeft, q), std::domain_error);
}

TEST_CASE("bulk_rate: q-integer multiplicities at q = 1 limit shape") {
    // [2]_q/[2]_q factors collapse; with m_x = 2 and k = 2 the rate uses [2]_q
    CoxeterType a4{Family::A, 4};
    LatticeSpec spec(a4, {2, 2}, {2, 2});
    ParticleConfig c(spec);
    c.add(1, 2, 2);
    c.add(2, 1, 2);
    Rational one(1);
    // at q = 1 every q-integer is the plain integer
    CHECK(bulk_rate(c, 1, 2, 1, SwapDirection::RightOverLeft, one) == Rational(2 * 2, 2 * 2));
}

TEST_CASE("bulk_rate: hand-evaluated display with a spectator species") {
    // m = (2,2), site x holds {i=2, s=3}, site x+1 holds {j=1, j=1}
    CoxeterType a4{Family::A, 4};
    LatticeSpec spec(a4, {2, 2}, {2, 1, 1});
    ParticleConfig c(spec);
    c.add(1, 2, 1);
    c.add(1, 3, 1);
    c.add(2, 1, 2);
    Rational q(1, 3);
    Rational m2 = q_int(2, q);
    // q^{k_x^{(3)}} [1]_q/[2]_q * q^0 [2]_q/[2]_q
    CHECK(bulk_rate(c, 1, 2, 1, SwapDirection::RightOverLeft, q) ==
          q * Rational(1) / m2 * (m2 / m2));
}

TEST_CASE("boundary rates, Case 1 single site") {
    CoxeterType bc2{Family::BC, 2};
    ParabolicSpec hp(bc2, {1, 1}, false), h(bc2, {1, 1}, false);
    ProcessSpec p{dcoset_space(hp, h), Rational(1, 2), Boundary::Case1, false};
    // species -2 alone at site 1 flips at rate 1; species +2 at rate q
    ParticleConfig c(p.lattice);
    c.add(1, -2, 1);
    c.add(2, 1, 1);
    auto flips = boundary_transitions<Rational>(c, p);
    REQUIRE(flips.size() == 1);
    CHECK(flips[0].rate == Rational(1));
    CHECK(flips[0].target.count(1, 2) == 1);
    ParticleConfig d(p.lattice);
    d.add(1, 2, 1);
    d.add(2, 1, 1);
    auto flips2 = boundary_transitions<Rational>(d, p);
    REQUIRE(flips2.size() == 1);
    CHECK(flips2[0].rate == Rational(1, 2));
}

TEST_CASE("Case 2 transitions keep the mirror pairing atomically") {
    CoxeterType bc2{Family::BC, 2};
    ParabolicSpec hh(bc2, {1, 1}, true);
    ProcessSpec p{dcoset_space(hh, hh), Rational(1, 2), Boundary::Case2, false};
    for (const auto& state : enumerate_space(p.lattice))
        for (const auto& tr : transitions<Rational>(state, p)) {
            tr.target.validate();
            for (int s : p.lattice.species_labels())
                if (s > 0) CHECK(tr.target.count(1, s) == tr.target.count(1, -s));
        }
}

TEST_CASE("Case 2 three-state chain has the hand-computed rates") {
    CoxeterType bc2{Family::BC, 2};
    ParabolicSpec hh(bc2, {1, 1}, true);
    ProcessSpec p{dcoset_space(hh, hh), Rational(1, 2), Boundary::Case2, false};
    auto [space, gen] = build_generator<Rational>(p);
    REQUIRE(space.size() == 3);
    Rational q(1, 2);
    // states sorted canonically; locate them by content
    ParticleConfig c1(p.lattice), c2(p.lattice), c3(p.lattice);
    c1.add(1, 0, 2), c1.add(2, 1, 1);
    c2.add(1, 0, 2), c2.add(2, -1, 1);
    c3.add(1, 1, 1), c3.add(1, -1, 1), c3.add(2, 0, 1);
    int i1 = space.at(c1), i2 = space.at(c2), i3 = space.at(c3);
    CHECK(gen.get(i3, i1) == Rational(1) / q_int(2, q));
    CHECK(gen.get(i3, i2) == q * q / q_int(2, q));
    CHECK(gen.get(i1, i3) == q);
    CHECK(gen.get(i2, i3) == Rational(1));
}

TEST_CASE("generator rows sum to zero, off-diagonals non-negative") {
    CoxeterType bc2{Family::BC, 2};
    ParabolicSpec hp(bc2, {1, 1}, false), h(bc2, {1, 1}, false);
    ProcessSpec p{dcoset_space(hp, h), Rational(2, 5), Boundary::Case1, false};
    auto [space, gen] = build_generator<Rational>(p);
    for (int r = 0; r < gen.n; ++r) {
        CHECK(gen.row_sum(r) == Rational(0));
        for (const auto& [c, v] : gen.rows[static_cast<size_t>(r)])
            if (c != r) CHECK(v >= Rational(0));
    }
}

TEST_CASE("two-site single-particle generator is [[-1,1],[q,-q]]") {
    CoxeterType a2{Family::A, 2};
    LatticeSpec spec(a2, {1, 1}, {1, 1});
    ProcessSpec p{spec, Rational(1, 2), Boundary::None, false};
    auto [space, gen] = build_generator<Rational>(p);
    REQUIRE(space.size() == 2);
    ParticleConfig right(spec);  // particle (species 2) on the right site
    right.add(1, 1, 1), right.add(2, 2, 1);
    ParticleConfig left(spec);
    left.add(1, 2, 1), left.add(2, 1, 1);
    int il = space.at(left), ir = space.at(right);
    CHECK(gen.get(il, ir) == Rational(1));
    CHECK(gen.get(il, il) == Rational(-1));
    CHECK(gen.get(ir, il) == Rational(1, 2));
    CHECK(gen.get(ir, ir) == Rational(-1, 2));
}

TEST_CASE("conservation laws") {
    CoxeterType bc2{Family::BC, 2};
    // bulk + Case 2 preserve every signed species count; Case 1 preserves |i| counts
    ParabolicSpec hp(bc2, {1, 1}, false), h(bc2, {1, 1}, false);
    ProcessSpec p{dcoset_space(hp, h), Rational(1, 2), Boundary::Case1, false};
    for (const auto& state : enumerate_space(p.lattice))
        for (const auto& tr : transitions<Rational>(state, p)) {
            for (int a = 1; a <= 2; ++a) {
                int before = 0, after = 0;
                for (int x = 1; x <= 2; ++x) {
                    before += state.count(x, a) + state.count(x, -a);
                    after += tr.target.count(x, a) + tr.target.count(x, -a);
                }
                CHECK(before == after);
            }
            if (tr.event.kind == EventDesc::Kind::BulkSwap) {
                for (int s : p.lattice.species_labels()) {
                    int before = 0, after = 0;
                    for (int x = 1; x <= 2; ++x) {
                        before += state.count(x, s);
                        after += tr.target.count(x, s);
                    }
                    CHECK(before == after);
                }
            }
        }
}

TEST_CASE("site split law and lambda_expand") {
    Rational q(1, 3);
    auto law = site_split_law({1, 2}, q);
    REQUIRE(law.size() == 2);
    CHECK(law.at({1, 2}) == Rational(1) / (Rational(1) + q));
    CHECK(law.at({2, 1}) == q / (Rational(1) + q));
    // repeated species collapse to a single ordering
    auto rep = site_split_law({1, 1}, q);
    REQUIRE(rep.size() == 1);
    CHECK(rep.begin()->second == Rational(1));

    // fuse(lambda_expand(c)) == c, and empirical frequencies match within 3 sigma
    CoxeterType a3{Family::A, 3};
    LatticeSpec spec(a3, {2, 1}, {1, 1, 1});
    ParticleConfig c(spec);
    c.add(1, 1, 1), c.add(1, 2, 1), c.add(2, 3, 1);
    Rng rng(99);
    long n = 100000, descending = 0;
    for (long trial = 0; trial < n; ++trial) {
        auto fine = lambda_expand(c, q, rng);
        CHECK(fuse_sites(fine, spec.site_caps, false) == c);
        if (fine.count(1, 2) == 1) ++descending;  // ordering (2,1) on the fused block
    }
    double pexp = to_double(q / (Rational(1) + q));
    double sigma = std::sqrt(pexp * (1 - pexp) * static_cast<double>(n));
    CHECK(std::abs(static_cast<double>(descending) - pexp * static_cast<double>(n)) <
          3 * sigma);
}

TEST_CASE("lambda_expand on a single-particle site is deterministic") {
    CoxeterType a2{Family::A, 2};
    LatticeSpec spec(a2, {1, 1}, {1, 1});
    ParticleConfig c(spec);
    c.add(1, 2, 1), c.add(2, 1, 1);
    Rng rng(5);
    CHECK(lambda_expand(c, Rational(1, 2), rng) == c);
}

TEST_CASE("simulate: horizon zero returns the initial state") {
    CoxeterType a2{Family::A, 2};
    LatticeSpec spec(a2, {1, 1}, {1, 1});
    ProcessSpec p{spec, Rational(1, 2), Boundary::None, false};
    ParticleConfig c(spec);
    c.add(1, 2, 1), c.add(2, 1, 1);
    Rng rng(1);
    auto [final, rec] = simulate(p, c, 0.0, rng);
    CHECK(final == c);
    CHECK(rec.events.empty());
}

TEST_CASE("two-state master equation matches simulation within 3 sigma") {
    CoxeterType a2{Family::A, 2};
    LatticeSpec spec(a2, {1, 1}, {1, 1});
    ProcessSpec p{spec, Rational(1, 2), Boundary::None, false};
    ParticleConfig left(spec);
    left.add(1, 2, 1), left.add(2, 1, 1);
    double t = 1.0, lam = 1.5;
    double p_right = (1.0 / lam) * (1.0 - std::exp(-lam * t));  // stationary 1/(1+q) route
    long n = 100000, hits = 0;
    for (long trial = 0; trial < n; ++trial) {
        Rng rng(42, static_cast<uint64_t>(trial));
        auto [final, rec] = simulate(p, left, t, rng);
        if (final.count(2, 2) == 1) ++hits;
    }
    double sigma = std::sqrt(p_right * (1 - p_right) * static_cast<double>(n));
    CHECK(std::abs(static_cast<double>(hits) - p_right * static_cast<double>(n)) < 3 * sigma);
}

TEST_CASE("graphical and Gillespie schedulers agree distributionally (chi-square)") {
    CoxeterType bc2{Family::BC, 2};
    ParabolicSpec hh(bc2, {1, 1}, true);
    ProcessSpec p{dcoset_space(hh, hh), Rational(1, 2), Boundary::Case2, false};
    auto space = make_state_space(p.lattice);
    auto init = packed(hh, hh);
    const double t = 0.8;
    const long n = 40000;
    std::map<std::vector<int>, long> counts_g, counts_d;
    for (long trial = 0; trial < n; ++trial) {
        Rng r1(7, static_cast<uint64_t>(trial)), r2(8, static_cast<uint64_t>(trial));
        counts_g[simulate(p, init, t, r1).first.flat()]++;
        counts_d[simulate_gillespie(p, init, t, r2).flat()]++;
    }
    // exact reference via uniformization
    auto [sspace, gen] = build_generator<double>(p);
    auto [row, approx] = uniformized_row(gen, sspace.at(init), t, 1e-12);
    std::vector<std::pair<std::vector<int>, double>> expected;
    for (int i = 0; i < sspace.size(); ++i)
        expected.push_back({sspace.states[static_cast<size_t>(i)].flat(),
                            row[static_cast<size_t>(i)]});
    // 3 states -> 2 dof; chi-square 1% critical value 9.21
    CHECK(chi_square(counts_g, expected, n) < 9.21);
    CHECK(chi_square(counts_d, expected, n) < 9.21);
}

TEST_CASE("replay reproduces the simulation and reversal is an involution") {
    CoxeterType bc2{Family::BC, 2};
    ParabolicSpec hp(bc2, {1, 1}, false), h(bc2, {1, 1}, false);
    ProcessSpec p{dcoset_space(hp, h), Rational(1, 2), Boundary::Case1, false};
    auto init = packed(hp, h);
    Rng rng(123);
    auto [final, rec] = simulate(p, init, 2.0, rng);
    CHECK(replay(rec, init, p) == final);

    // empty record
    GraphicalRecord empty;
    CHECK(reverse_replay(empty, init, p) == init);

    // reflecting the clock record twice reproduces the forward replay
    GraphicalRecord reflected;
    reflected.horizon = rec.horizon;
    reflected.num_clocks = rec.num_clocks;
    for (auto it = rec.events.rbegin(); it != rec.events.rend(); ++it)
        reflected.events.push_back({rec.horizon - it->time, it->clock, it->mark});
    CHECK(reverse_replay(reflected, init, p) == final);

    // serialization round-trip is bit-exact
    auto parsed = GraphicalRecord::parse(rec.serialize());
    CHECK(parsed.events.size() == rec.events.size());
    CHECK(replay(parsed, init, p) == final);
    for (size_t i = 0; i < rec.events.size(); ++i) {
        CHECK(parsed.events[i].time == rec.events[i].time);
        CHECK(parsed.events[i].mark == rec.events[i].mark);
    }
}

TEST_CASE("process spec validation") {
    CoxeterType a2{Family::A, 2};
    LatticeSpec spec(a2, {1, 1}, {1, 1});
    ProcessSpec bad{spec, Rational(3, 2), Boundary::None, false};
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    ProcessSpec bad2{spec, Rational(1, 2), Boundary::Case1, false};
    CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
}

TEST_CASE("frozen lattice has a zero generator") {
    // all particles of one species: no admissible swaps anywhere
    CoxeterType a4{Family::A, 4};
    LatticeSpec spec(a4, {2, 2}, {4});
    ProcessSpec p{spec, Rational(1, 2), Boundary::None, false};
    auto [space, gen] = build_generator<Rational>(p);
    REQUIRE(space.size() == 1);
    for (int r = 0; r < gen.n; ++r)
        for (const auto& [c, v] : gen.rows[static_cast<size_t>(r)]) CHECK(v == Rational(0));
}
