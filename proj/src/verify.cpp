#include "coxasep/verify.hpp"

#include <chrono>
#include <map>
#include <set>

#include "coxasep/exact.hpp"
#include "coxasep/rng.hpp"

namespace coxasep {

namespace {

using Clock = std::chrono::steady_clock;

long elapsed_ms(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

std::string type_name(CoxeterType t) {
    return (t.family == Family::A ? "A" : "BC") + std::to_string(t.rank);
}

std::string composition_name(const std::vector<int>& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

std::map<SignedPermutation, int> bfs_distances(CoxeterType type) {
    std::map<SignedPermutation, int> dist;
    std::vector<SignedPermutation> queue{SignedPermutation::identity(type)};
    dist[queue.front()] = 0;
    for (size_t head = 0; head < queue.size(); ++head) {
        auto cur = queue[head];
        int d = dist[cur];
        for (int i : type.generators()) {
            auto next = multiply(cur, SignedPermutation::generator(type, i));
            if (dist.emplace(next, d + 1).second) queue.push_back(std::move(next));
        }
    }
    return dist;
}

Rational random_rational(Rng& rng) {
    long den = 2 + static_cast<long>(rng.next_u64() % 62);
    long num = static_cast<long>(rng.next_u64() % static_cast<uint64_t>(den + 1));
    return Rational(num, den);
}

}  // namespace

std::vector<CheckRecord> verify_coxeter(int max_rank_a, int max_rank_bc) {
    std::vector<CheckRecord> records;
    std::vector<CoxeterType> types;
    for (int n = 2; n <= max_rank_a; ++n) types.push_back({Family::A, n});
    for (int n = 2; n <= max_rank_bc; ++n) types.push_back({Family::BC, n});
    for (auto t : types) {
        auto start = Clock::now();
        auto dist = bfs_distances(t);
        long mismatches = 0;
        for (const auto& [w, d] : dist)
            if (length(w) != d) ++mismatches;
        bool order_ok = dist.size() == group_order(t);
        bool series_ok = true;
        {
            std::vector<SignedPermutation> all;
            all.reserve(dist.size());
            for (const auto& [w, d] : dist) all.push_back(w);
            series_ok = poincare_series(all) == group_poincare_product(t);
        }
        CheckRecord rec;
        rec.check = "coxeter-length-bfs";
        rec.instance = type_name(t);
        rec.residual = static_cast<double>(mismatches) + (order_ok ? 0 : 1) + (series_ok ? 0 : 1);
        rec.pass = mismatches == 0 && order_ok && series_ok;
        rec.ms = elapsed_ms(start);
        records.push_back(rec);
    }
    return records;
}

std::vector<CheckRecord> verify_diagrams() {
    std::vector<CheckRecord> records;
    auto run = [&](const ParabolicSpec& hp, const ParabolicSpec& h, const std::string& name) {
        auto start = Clock::now();
        auto report = certify_diagrams(hp, h);
        CheckRecord rec;
        rec.check = "diagram-squares";
        rec.instance = name;
        rec.pass = report.fibers_ok && report.commutes_ok && report.bijection_ok;
        rec.residual = rec.pass ? 0 : 1;
        rec.ms = elapsed_ms(start);
        records.push_back(rec);
    };

    CoxeterType a4{Family::A, 4};
    std::vector<std::vector<int>> comps{{2, 2}, {3, 1}, {2, 1, 1}};
    for (const auto& caps : comps)
        for (const auto& blocks : comps)
            run(ParabolicSpec(a4, caps), ParabolicSpec(a4, blocks),
                "A4:m=" + composition_name(caps) + ":N=" + composition_name(blocks));

    CoxeterType bc2{Family::BC, 2};
    const char* case_names[] = {"a", "c", "b", "d"};
    int idx = 0;
    for (bool hp0 : {false, true})
        for (bool h0 : {false, true})
            run(ParabolicSpec(bc2, {1, 1}, hp0), ParabolicSpec(bc2, {1, 1}, h0),
                std::string("BC2:case-") + case_names[idx++]);

    CoxeterType bc3{Family::BC, 3};
    for (bool hp0 : {false, true})
        for (bool h0 : {false, true})
            run(ParabolicSpec(bc3, {2, 1}, hp0), ParabolicSpec(bc3, {1, 2}, h0),
                std::string("BC3:m=(2,1):N=(1,2):s0=") + (hp0 ? "m" : "") + (h0 ? "N" : ""));
    return records;
}

std::vector<CheckRecord> verify_colpos_algebraic(long sequences_per_group, uint64_t seed,
                                                 int max_rank) {
    std::vector<CheckRecord> records;
    std::vector<CoxeterType> types{{Family::A, 3}, {Family::A, 4}, {Family::BC, 2}};
    for (auto t : types) {
        if (t.family == Family::A && t.rank > max_rank) continue;
        auto start = Clock::now();
        Rng rng(seed, static_cast<uint64_t>(t.rank) + (t.family == Family::BC ? 100 : 0));
        auto gens = t.generators();
        Rational worst(0);
        bool pass = true;
        const Rational qs[] = {Rational(1, 3), Rational(1, 2), Rational(2, 3)};
        for (long trial = 0; trial < sequences_per_group; ++trial) {
            const Rational& q = qs[trial % 3];
            size_t n = 1 + rng.next_u64() % 6;
            std::vector<StepSpec> steps;
            for (size_t k = 0; k < n; ++k)
                steps.push_back({gens[rng.next_u64() % gens.size()], random_rational(rng)});
            auto report = check_colpos(t, steps, q);
            worst = std::max(worst, report.max_discrepancy);
            if (!report.colpos_holds || !report.lr_relation_holds) pass = false;
        }
        CheckRecord rec;
        rec.check = "colpos-algebraic";
        rec.instance = type_name(t) + ":n=" + std::to_string(sequences_per_group);
        rec.residual = to_double(worst);
        rec.pass = pass && worst == Rational(0);
        rec.ms = elapsed_ms(start);
        records.push_back(rec);
    }
    return records;
}

std::vector<CheckRecord> verify_associativity(uint64_t seed) {
    std::vector<CheckRecord> records;
    for (CoxeterType t : {CoxeterType{Family::A, 4}, CoxeterType{Family::BC, 2}}) {
        auto start = Clock::now();
        Rng rng(seed, static_cast<uint64_t>(t.rank));
        std::set<int> seen;
        bool pass = true;
        long failures = 0;
        for (const auto& w : enumerate_group(t))
            for (int i : t.generators())
                for (int j : t.generators())
                    for (int rep = 0; rep < 5; ++rep) {
                        auto r = check_associativity(w, i, j, random_rational(rng),
                                                     random_rational(rng), Rational(1, 2));
                        seen.insert(r.case_label);
                        if (!r.sides_equal || !r.braid_identity || !r.scalar_identity) {
                            pass = false;
                            ++failures;
                        }
                    }
        if (seen != std::set<int>{1, 2, 3, 4, 5, 6}) pass = false;
        CheckRecord rec;
        rec.check = "associativity-cases";
        rec.instance = type_name(t);
        rec.residual = static_cast<double>(failures);
        rec.pass = pass;
        rec.ms = elapsed_ms(start);
        records.push_back(rec);
    }
    return records;
}

std::vector<CheckRecord> verify_stationarity() {
    std::vector<CheckRecord> records;
    struct Instance {
        ParabolicSpec hp, h;
        Boundary boundary;
        std::string name;
    };
    CoxeterType bc2{Family::BC, 2}, bc3{Family::BC, 3};
    std::vector<Instance> instances{
        {ParabolicSpec(bc2, {1, 1}), ParabolicSpec(bc2, {1, 1}), Boundary::Case1,
         "BC2:case1:m=(1,1)"},
        {ParabolicSpec(bc2, {2}), ParabolicSpec(bc2, {2}), Boundary::Case1,
         "BC2:case1:m=(2)"},
        {ParabolicSpec(bc2, {1, 1}, true), ParabolicSpec(bc2, {1, 1}), Boundary::Case2,
         "BC2:case2:mirror"},
        {ParabolicSpec(bc2, {1, 1}, true), ParabolicSpec(bc2, {1, 1}, true), Boundary::Case2,
         "BC2:case2:mirror-zero"},
        {ParabolicSpec(bc3, {1, 2}), ParabolicSpec(bc3, {2, 1}), Boundary::Case1,
         "BC3:case1:m=(1,2)"},
        {ParabolicSpec(bc3, {1, 2}, true), ParabolicSpec(bc3, {1, 2}, true), Boundary::Case2,
         "BC3:case2:mirror-zero"},
    };
    for (const auto& inst : instances) {
        auto start = Clock::now();
        const Rational q(1, 2);
        ProcessSpec p{dcoset_space(inst.hp, inst.h), q, inst.boundary, false};
        auto [space, gen] = build_generator<Rational>(p);
        auto mu = pushforward_q_exchangeable(space, inst.hp, inst.h, q);
        Rational residual = check_stationarity(gen, mu);
        CheckRecord rec;
        rec.check = "stationarity-q-exchangeable";
        rec.instance = inst.name;
        rec.residual = to_double(residual);
        rec.pass = residual == Rational(0);
        rec.ms = elapsed_ms(start);
        records.push_back(rec);
    }
    return records;
}

std::vector<CheckRecord> verify_factorization() {
    std::vector<CheckRecord> records;
    auto run = [&](const ParabolicSpec& hp, const ParabolicSpec& h, Boundary boundary,
                   const std::string& name) {
        auto start = Clock::now();
        auto report = check_generator_factorization(hp, h, Rational(1, 2), boundary);
        CheckRecord rec;
        rec.check = "generator-factorization";
        rec.instance = name;
        rec.residual = to_double(report.max_abs_difference);
        rec.pass = report.equal;
        rec.ms = elapsed_ms(start);
        records.push_back(rec);
    };
    CoxeterType a4{Family::A, 4};
    for (auto caps : {std::vector<int>{2, 1, 1}, std::vector<int>{2, 2}})
        for (auto blocks : {std::vector<int>{1, 1, 1, 1}, std::vector<int>{2, 2}})
            run(ParabolicSpec(a4, caps), ParabolicSpec(a4, blocks), Boundary::None,
                "A4:m=" + composition_name(caps) + ":N=" + composition_name(blocks));
    CoxeterType bc2{Family::BC, 2};
    run(ParabolicSpec(bc2, {1, 1}), ParabolicSpec(bc2, {1, 1}), Boundary::Case1, "BC2:case1");
    run(ParabolicSpec(bc2, {1, 1}, true), ParabolicSpec(bc2, {1, 1}, true), Boundary::Case2,
        "BC2:case2");
    return records;
}

std::vector<CheckRecord> verify_colpos_dynamic() {
    std::vector<CheckRecord> records;
    const std::vector<double> times{0.5, 1.0, 2.0};
    auto run = [&](const ParabolicSpec& hh, Boundary boundary, const std::string& name) {
        auto start = Clock::now();
        ProcessSpec p{dcoset_space(hh, hh), Rational(1, 2), boundary, false};
        auto certs = certify_colpos(p, hh, hh, times, 1e-12);
        double worst = 0;
        bool exact = true;
        double eps = 0;
        for (const auto& cert : certs) {
            worst = std::max(worst,
                             std::max(cert.discrepancy_forward, cert.discrepancy_reversed));
            eps = std::max(eps, cert.eps);
            exact = exact && cert.exact_zero;
        }
        CheckRecord rec;
        rec.check = "colpos-dynamic";
        rec.instance = name;
        rec.residual = worst;
        rec.eps = eps;
        rec.pass = worst <= 1e-10 && exact;
        rec.ms = elapsed_ms(start);
        records.push_back(rec);
    };
    CoxeterType a3{Family::A, 3};
    run(ParabolicSpec::trivial(a3), Boundary::None, "A3:free");
    CoxeterType bc2{Family::BC, 2};
    run(ParabolicSpec(bc2, {1, 1}, true), Boundary::Case2, "BC2:case2");
    CoxeterType bc3{Family::BC, 3};
    run(ParabolicSpec(bc3, {1, 1, 1}, true), Boundary::Case2, "BC3:case2");
    return records;
}

std::vector<CheckRecord> run_verify_suite(const std::string& suite, uint64_t seed,
                                          int max_rank) {
    std::vector<CheckRecord> records;
    auto append = [&](std::vector<CheckRecord> part) {
        records.insert(records.end(), part.begin(), part.end());
    };
    bool all = suite == "all";
    bool known = all;
    if (all || suite == "coxeter") {
        append(verify_coxeter(std::max(max_rank, 2) > 5 ? 5 : std::max(max_rank, 2)));
        known = true;
    }
    if (all || suite == "diagrams") {
        append(verify_diagrams());
        known = true;
    }
    if (all || suite == "colpos") {
        append(verify_colpos_algebraic(1000, seed, max_rank));
        known = true;
    }
    if (all || suite == "associativity") {
        append(verify_associativity(seed));
        known = true;
    }
    if (all || suite == "stationarity") {
        append(verify_stationarity());
        known = true;
    }
    if (all || suite == "factorization") {
        append(verify_factorization());
        known = true;
    }
    if (all || suite == "colpos-dynamic") {
        append(verify_colpos_dynamic());
        known = true;
    }
    if (!known) throw std::invalid_argument("unknown verify suite: " + suite);
    return records;
}

}  // namespace coxasep
