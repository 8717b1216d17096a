#include "coxasep/exact.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace coxasep {

std::pair<std::vector<double>, SemigroupApprox> uniformized_row(const RateMatrix<double>& Q,
                                                                int start, double t, double eps,
                                                                int max_terms) {
    if (t < 0) throw std::domain_error("uniformized_row: negative time");
    if (eps <= 0) throw std::domain_error("uniformized_row: eps must be positive");
    const int n = Q.n;
    if (start < 0 || start >= n) throw std::out_of_range("uniformized_row: bad start state");

    double lam = 0;
    for (int r = 0; r < n; ++r) lam = std::max(lam, -Q.get(r, r));

    std::vector<double> point(static_cast<size_t>(n), 0.0);
    point[static_cast<size_t>(start)] = 1.0;
    if (lam == 0 || t == 0) return {point, SemigroupApprox{lam, 0, 0.0}};

    auto step = [&](const std::vector<double>& x) {
        std::vector<double> out = x;  // identity part of P = I + Q/lam
        for (int r = 0; r < n; ++r) {
            if (x[static_cast<size_t>(r)] == 0) continue;
            for (const auto& [col, val] : Q.rows[static_cast<size_t>(r)])
                out[static_cast<size_t>(col)] += x[static_cast<size_t>(r)] * val / lam;
        }
        return out;
    };

    std::vector<double> result(static_cast<size_t>(n), 0.0);
    std::vector<double> v = point;
    double log_w = -lam * t;
    double covered = 0;
    int k = 0;
    while (true) {
        double w = std::exp(log_w);
        for (int i = 0; i < n; ++i) result[static_cast<size_t>(i)] += w * v[static_cast<size_t>(i)];
        covered += w;
        if (1.0 - covered <= eps)
            return {result, SemigroupApprox{lam, k, std::max(0.0, 1.0 - covered)}};
        if (++k > max_terms)
            throw std::runtime_error("uniformized_row: eps unattainable under the term cap");
        v = step(v);
        log_w += std::log(lam * t) - std::log(static_cast<double>(k));
    }
}

std::pair<std::vector<std::vector<double>>, SemigroupApprox> transition_matrix(
    const RateMatrix<double>& Q, double t, double eps, int max_terms) {
    std::vector<std::vector<double>> rows;
    SemigroupApprox worst{0, 0, 0};
    for (int r = 0; r < Q.n; ++r) {
        auto [row, approx] = uniformized_row(Q, r, t, eps, max_terms);
        rows.push_back(std::move(row));
        worst.uniformization_rate = approx.uniformization_rate;
        worst.truncation_order = std::max(worst.truncation_order, approx.truncation_order);
        worst.error_bound = std::max(worst.error_bound, approx.error_bound);
    }
    return {rows, worst};
}

Rational check_stationarity(const RateMatrix<Rational>& Q, const std::vector<Rational>& mu) {
    if (static_cast<int>(mu.size()) != Q.n)
        throw std::invalid_argument("check_stationarity: dimension mismatch");
    auto flow = Q.apply_left(mu);
    Rational worst(0);
    for (const auto& f : flow) worst = std::max(worst, abs(f));
    return worst;
}

std::vector<Rational> pushforward_q_exchangeable(const StateSpace& space,
                                                 const ParabolicSpec& hp,
                                                 const ParabolicSpec& h, const Rational& q) {
    std::vector<Rational> mu(static_cast<size_t>(space.size()), Rational(0));
    Rational norm(0);
    for (const auto& w : enumerate_group(hp.ctype)) {
        auto rep = double_coset_rep(w, hp, h);
        auto c = dcoset_to_config(rep, hp, h, ThetaVariant::One);
        Rational weight = q_pow(q, length(w));
        mu[static_cast<size_t>(space.at(c))] += weight;
        norm += weight;
    }
    for (auto& m : mu) m /= norm;
    return mu;
}

ProcessSpec fine_process(const ParabolicSpec& h, const Rational& q, Boundary fused_boundary) {
    const auto t = h.ctype;
    LatticeSpec fine(t, std::vector<int>(static_cast<size_t>(t.rank), 1), h.blocks,
                     h.includes_s0 ? Flavor::Zero : Flavor::Plain);
    Boundary fine_boundary = fused_boundary == Boundary::None ? Boundary::None : Boundary::Case1;
    return ProcessSpec{fine, q, fine_boundary, false};
}

FusedStructure fused_structure(const ParabolicSpec& hp, const ParabolicSpec& h,
                               const Rational& q) {
    FusedStructure fs;
    fs.a_space = make_state_space(dcoset_space(hp, h));
    const auto t = hp.ctype;
    LatticeSpec fine(t, std::vector<int>(static_cast<size_t>(t.rank), 1), h.blocks,
                     h.includes_s0 ? Flavor::Zero : Flavor::Plain);
    fs.b_space = make_state_space(fine);

    fs.a_reps.resize(static_cast<size_t>(fs.a_space.size()));
    for (const auto& rep : enumerate_dcoset_reps(hp, h)) {
        auto c = dcoset_to_config(rep, hp, h, ThetaVariant::One);
        fs.a_reps[static_cast<size_t>(fs.a_space.at(c))] = rep;
    }

    fs.b_reps.resize(static_cast<size_t>(fs.b_space.size()));
    fs.lambda = RateMatrix<Rational>(fs.a_space.size());
    fs.phi = RateMatrix<Rational>(fs.b_space.size());
    auto hgens = h.generators();
    for (const auto& w : enumerate_group(t)) {
        bool min_right = true;  // w in D_H: no right descent along the H generators
        for (int i : hgens)
            if (length(multiply(w, SignedPermutation::generator(t, i))) < length(w)) {
                min_right = false;
                break;
            }
        if (!min_right) continue;
        auto b_cfg = project_colors(theta1(w), h.blocks, h.includes_s0);
        int b_idx = fs.b_space.at(b_cfg);
        fs.b_reps[static_cast<size_t>(b_idx)] = w;
        auto a_cfg = dcoset_to_config(double_coset_rep(w, hp, h), hp, h, ThetaVariant::One);
        int a_idx = fs.a_space.at(a_cfg);
        fs.lambda.add(a_idx, b_idx, q_pow(q, length(w)));
        fs.phi.add(b_idx, a_idx, Rational(1));
    }
    for (int r = 0; r < fs.lambda.n; ++r) {
        Rational total = fs.lambda.row_sum(r);
        for (auto& [col, val] : fs.lambda.rows[static_cast<size_t>(r)]) val /= total;
    }
    return fs;
}

FactorizationReport check_generator_factorization(const ParabolicSpec& hp,
                                                  const ParabolicSpec& h, const Rational& q,
                                                  Boundary boundary) {
    auto fs = fused_structure(hp, h, q);
    ProcessSpec fused{dcoset_space(hp, h), q, boundary, false};
    auto [a_space, fused_gen] = build_generator<Rational>(fused);
    auto [b_space, fine_gen] = build_generator<Rational>(fine_process(h, q, boundary));

    FactorizationReport report;
    report.dimension = a_space.size();
    for (int a = 0; a < a_space.size(); ++a) {
        // row of Lambda * L * Phi
        std::vector<Rational> row(static_cast<size_t>(fs.b_space.size()), Rational(0));
        for (const auto& [b, w] : fs.lambda.rows[static_cast<size_t>(a)])
            row[static_cast<size_t>(b)] = w;
        row = fine_gen.apply_left(row);
        std::vector<Rational> composed(static_cast<size_t>(a_space.size()), Rational(0));
        for (int b = 0; b < fs.b_space.size(); ++b) {
            if (row[static_cast<size_t>(b)] == 0) continue;
            for (const auto& [aa, one] : fs.phi.rows[static_cast<size_t>(b)])
                composed[static_cast<size_t>(aa)] += row[static_cast<size_t>(b)] * one;
        }
        for (int a2 = 0; a2 < a_space.size(); ++a2) {
            Rational diff = abs(fused_gen.get(a, a2) - composed[static_cast<size_t>(a2)]);
            if (diff != 0) report.equal = false;
            report.max_abs_difference = std::max(report.max_abs_difference, diff);
        }
    }
    return report;
}

std::vector<ColposCertificate> certify_colpos(const ProcessSpec& p, const ParabolicSpec& hp,
                                              const ParabolicSpec& h,
                                              const std::vector<double>& times, double eps,
                                              bool rational_check) {
    p.validate();
    if (p.lattice != dcoset_space(hp, h))
        throw std::invalid_argument("certify_colpos: process lattice does not match (H',H)");

    auto space = make_state_space(p.lattice);
    auto reps = enumerate_dcoset_reps(hp, h);

    // group inversion must act on the representative set (take H' = H)
    std::vector<int> inv_index(static_cast<size_t>(space.size()), -1);
    for (const auto& rep : reps) {
        auto idx = space.at(dcoset_to_config(rep, hp, h, ThetaVariant::One));
        auto vrep = double_coset_rep(inverse(rep), hp, h);
        if (vrep != inverse(rep))
            throw std::domain_error("certify_colpos: representatives are not inverse-closed");
        inv_index[static_cast<size_t>(idx)] =
            space.at(dcoset_to_config(vrep, hp, h, ThetaVariant::One));
    }

    int start = space.at(
        dcoset_to_config(SignedPermutation::identity(p.lattice.ctype), hp, h, ThetaVariant::One));

    auto [sspace, gen] = build_generator<double>(p);
    ProcessSpec reversed = p;
    reversed.drift_reversed = !p.drift_reversed;
    auto [rspace, rgen] = build_generator<double>(reversed);

    std::vector<ColposCertificate> certs;
    int max_order = 0;
    for (double t : times) {
        ColposCertificate cert;
        cert.time = t;
        auto [row, approx] = uniformized_row(gen, start, t, eps);
        auto [rrow, rapprox] = uniformized_row(rgen, start, t, eps);
        for (int i = 0; i < space.size(); ++i) {
            int j = inv_index[static_cast<size_t>(i)];
            cert.discrepancy_forward =
                std::max(cert.discrepancy_forward,
                         std::abs(row[static_cast<size_t>(i)] - row[static_cast<size_t>(j)]));
            cert.discrepancy_reversed =
                std::max(cert.discrepancy_reversed,
                         std::abs(rrow[static_cast<size_t>(i)] - rrow[static_cast<size_t>(j)]));
        }
        cert.eps = std::max(approx.error_bound, rapprox.error_bound);
        max_order = std::max(max_order, std::max(approx.truncation_order,
                                                 rapprox.truncation_order));
        certs.push_back(cert);
    }

    if (rational_check && !certs.empty()) {
        // Shared fixed truncation: every power of the uniformized kernel is
        // checked for exact invariance under the inversion map.
        for (ProcessSpec variant : {p, reversed}) {
            auto [vspace, vq] = build_generator<Rational>(variant);
            Rational lam(0);
            for (int r = 0; r < vq.n; ++r) lam = std::max(lam, -vq.get(r, r));
            std::vector<Rational> v(static_cast<size_t>(vq.n), Rational(0));
            v[static_cast<size_t>(start)] = Rational(1);
            bool ok = true;
            for (int k = 0; k <= max_order && ok; ++k) {
                for (int i = 0; i < vq.n; ++i)
                    if (v[static_cast<size_t>(i)] !=
                        v[static_cast<size_t>(inv_index[static_cast<size_t>(i)])]) {
                        ok = false;
                        break;
                    }
                if (k == max_order) break;
                auto flow = vq.apply_left(v);
                for (int i = 0; i < vq.n; ++i)
                    v[static_cast<size_t>(i)] += flow[static_cast<size_t>(i)] / lam;
            }
            if (!ok)
                for (auto& cert : certs) cert.exact_zero = false;
        }
    }
    return certs;
}

DiagramReport certify_diagrams(const ParabolicSpec& hp, const ParabolicSpec& h) {
    DiagramReport report;
    const auto t = hp.ctype;
    auto all = enumerate_group(t);
    auto hset = enumerate_parabolic(h);

    auto theta1_prime = [&](const SignedPermutation& s) {
        return project_colors(theta1(s), h.blocks, h.includes_s0);
    };
    auto theta2_prime = [&](const SignedPermutation& s) {
        return project_colors(theta2(s), h.blocks, h.includes_s0);
    };

    // Column commutativity W -> D_H -> D_{H',H} against the projections.
    for (const auto& w : all) {
        auto sigma = min_coset_rep(w, h, Side::Right);
        if (theta1_prime(w) != theta1_prime(sigma)) report.commutes_ok = false;
        auto sigma2 = min_coset_rep(w, h, Side::Left);
        if (theta2_prime(w) != theta2_prime(sigma2)) report.commutes_ok = false;
        ++report.checked;
    }

    // Fiber property and the fused square on D_H / D_H^{-1}.
    std::map<ParticleConfig, std::set<ParticleConfig>> fibers1, fibers2;
    for (const auto& w : all) {
        fibers1[theta1_prime(w)].insert(theta1(w));
        fibers2[theta2_prime(w)].insert(theta2(w));
    }
    for (const auto& w : all) {
        bool min_right = true, min_left = true;
        for (int i : h.generators()) {
            auto s = SignedPermutation::generator(t, i);
            if (length(multiply(w, s)) < length(w)) min_right = false;
            if (length(multiply(s, w)) < length(w)) min_left = false;
        }
        if (min_right) {
            std::set<ParticleConfig> coset;
            for (const auto& b : hset) coset.insert(theta1(multiply(w, b)));
            if (coset != fibers1.at(theta1_prime(w))) report.fibers_ok = false;
            // fused square: Phi(theta_1'(sigma)) == theta_1''(double coset rep)
            auto fused = fuse_sites(theta1_prime(w), hp.blocks, hp.includes_s0);
            auto rep = double_coset_rep(w, hp, h);
            if (fused != dcoset_to_config(rep, hp, h, ThetaVariant::One))
                report.commutes_ok = false;
            ++report.checked;
        }
        if (min_left) {
            std::set<ParticleConfig> coset;
            for (const auto& b : hset) coset.insert(theta2(multiply(b, w)));
            if (coset != fibers2.at(theta2_prime(w))) report.fibers_ok = false;
            auto fused = fuse_sites(theta2_prime(w), hp.blocks, hp.includes_s0);
            auto rep = double_coset_rep(w, h, hp);
            if (fused != dcoset_to_config(rep, hp, h, ThetaVariant::Two))
                report.commutes_ok = false;
            ++report.checked;
        }
    }

    // Bijectivity of both bottom rows onto the enumerated space.
    auto space = enumerate_space(dcoset_space(hp, h));
    std::set<ParticleConfig> full(space.begin(), space.end());
    for (ThetaVariant variant : {ThetaVariant::One, ThetaVariant::Two}) {
        auto reps = variant == ThetaVariant::One ? enumerate_dcoset_reps(hp, h)
                                                 : enumerate_dcoset_reps(h, hp);
        std::set<ParticleConfig> image;
        for (const auto& r : reps) {
            if (!image.insert(dcoset_to_config(r, hp, h, variant)).second)
                report.bijection_ok = false;
            ++report.checked;
        }
        if (image != full) report.bijection_ok = false;
    }
    return report;
}

}  // namespace coxasep
