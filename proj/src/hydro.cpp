#include "coxasep/hydro.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "coxasep/exact.hpp"

namespace coxasep::hydro {

void EngineBase::reset(const EngineParams& params,
                       const std::vector<std::vector<int>>& occupancy) {
    params_ = params;
    if (static_cast<int>(occupancy.size()) != params.num_species)
        throw std::invalid_argument("engine reset: species count mismatch");
    counts_ = occupancy;
    for (const auto& row : counts_)
        if (static_cast<int>(row.size()) != params.num_sites)
            throw std::invalid_argument("engine reset: site count mismatch");
    for (int x = 0; x < params.num_sites; ++x) {
        int tot = 0;
        for (int s = 0; s < params.num_species; ++s)
            tot += counts_[static_cast<size_t>(s)][static_cast<size_t>(x)];
        if (tot != params.m) throw std::invalid_argument("engine reset: site occupancy != m");
    }

    const double q = params.q;
    qint_.assign(static_cast<size_t>(params.m) + 1, 0.0);
    double pw = 1;
    for (int k = 1; k <= params.m; ++k) {
        qint_[static_cast<size_t>(k)] = qint_[static_cast<size_t>(k) - 1] + pw;
        pw *= q;
    }
    qpow_.assign(static_cast<size_t>(2 * params.m) + 2, 1.0);
    for (size_t e = 1; e < qpow_.size(); ++e) qpow_[e] = qpow_[e - 1] * q;
    inv_m2_ = 1.0 / (qint_[static_cast<size_t>(params.m)] * qint_[static_cast<size_t>(params.m)]);

    pairs_.clear();
    for (int i = 1; i < params.num_species; ++i)
        for (int j = 0; j < i; ++j) pairs_.push_back({i, j});

    slots_.assign(static_cast<size_t>(params.num_sites - 1) * pairs_.size() * 2, 0.0);
    for (int slot = 0; slot < num_slots(); ++slot)
        slots_[static_cast<size_t>(slot)] = compute_slot(slot);
    rebuild();
}

double EngineBase::compute_slot(int slot) const {
    const int per_bond = static_cast<int>(pairs_.size()) * 2;
    const int bond = slot / per_bond;
    const int rest = slot % per_bond;
    const auto [i, j] = pairs_[static_cast<size_t>(rest / 2)];
    const bool left = rest % 2;
    const int x = bond, x1 = bond + 1;

    auto n = [&](int s, int site) {
        return counts_[static_cast<size_t>(s)][static_cast<size_t>(site)];
    };
    auto above = [&](int s, int site) {
        int acc = 0;
        for (int u = s + 1; u < params_.num_species; ++u) acc += n(u, site);
        return acc;
    };
    auto below = [&](int s, int site) {
        int acc = 0;
        for (int u = 0; u < s; ++u) acc += n(u, site);
        return acc;
    };

    if (!left) {  // species i jumps x -> x+1 over species j
        if (n(i, x) == 0 || n(j, x1) == 0) return 0.0;
        return qpow_[static_cast<size_t>(above(i, x) + below(j, x1))] *
               qint_[static_cast<size_t>(n(i, x))] * qint_[static_cast<size_t>(n(j, x1))] *
               inv_m2_;
    }
    // species i jumps x+1 -> x over species j; the reverse display carries q
    if (n(j, x) == 0 || n(i, x1) == 0) return 0.0;
    return qpow_[static_cast<size_t>(1 + above(j, x) + below(i, x1))] *
           qint_[static_cast<size_t>(n(j, x))] * qint_[static_cast<size_t>(n(i, x1))] * inv_m2_;
}

void EngineBase::refresh_bond(int bond) {
    if (bond < 0 || bond >= params_.num_sites - 1) return;
    const int per_bond = static_cast<int>(pairs_.size()) * 2;
    for (int slot = bond * per_bond; slot < (bond + 1) * per_bond; ++slot) {
        double old = slots_[static_cast<size_t>(slot)];
        double next = compute_slot(slot);
        if (next != old) {
            slots_[static_cast<size_t>(slot)] = next;
            slot_changed(slot, old);
        }
    }
}

void EngineBase::apply_slot(int slot) {
    const int per_bond = static_cast<int>(pairs_.size()) * 2;
    const int bond = slot / per_bond;
    const int rest = slot % per_bond;
    const auto [i, j] = pairs_[static_cast<size_t>(rest / 2)];
    const bool left = rest % 2;
    const int from = left ? bond + 1 : bond;
    const int to = left ? bond : bond + 1;
    --counts_[static_cast<size_t>(i)][static_cast<size_t>(from)];
    ++counts_[static_cast<size_t>(i)][static_cast<size_t>(to)];
    --counts_[static_cast<size_t>(j)][static_cast<size_t>(to)];
    ++counts_[static_cast<size_t>(j)][static_cast<size_t>(from)];
    refresh_bond(bond - 1);
    refresh_bond(bond);
    refresh_bond(bond + 1);
}

double EngineBase::run_until(double horizon, Rng& rng, std::vector<EngineEvent>* trace) {
    double t = 0;
    double events = 0;
    while (true) {
        double total = total_rate();
        if (total <= 0) break;
        t += rng.exponential(total);
        if (t > horizon) break;
        int slot = select(rng.uniform() * total);
        if (slot < 0) break;
        apply_slot(slot);
        events += 1;
        if (trace) trace->push_back({t, slot});
    }
    return events;
}

double SerialEngine::total_rate() const {
    double acc = 0;
    for (double v : slots_) acc += v;
    return acc;
}

int SerialEngine::select(double target) const {
    double cum = 0;
    int last_positive = -1;
    for (int slot = 0; slot < num_slots(); ++slot) {
        double v = slots_[static_cast<size_t>(slot)];
        if (v <= 0) continue;
        cum += v;
        last_positive = slot;
        if (target < cum) return slot;
    }
    return last_positive;
}

void SerialEngine::slot_changed(int, double) {}

void FenwickEngine::rebuild() {
    tree_.assign(slots_.size() + 1, 0.0);
    for (int slot = 0; slot < num_slots(); ++slot)
        if (slots_[static_cast<size_t>(slot)] != 0) slot_changed(slot, 0.0);
}

void FenwickEngine::slot_changed(int slot, double old_value) {
    double delta = slots_[static_cast<size_t>(slot)] - old_value;
    for (size_t i = static_cast<size_t>(slot) + 1; i < tree_.size(); i += i & (~i + 1))
        tree_[i] += delta;
}

double FenwickEngine::total_rate() const {
    double acc = 0;
    for (size_t i = tree_.size() - 1; i > 0; i -= i & (~i + 1)) acc += tree_[i];
    return acc;
}

int FenwickEngine::select(double target) const {
    size_t pos = 0;
    size_t mask = 1;
    while (mask * 2 < tree_.size()) mask *= 2;
    double rem = target;
    for (; mask > 0; mask /= 2) {
        size_t next = pos + mask;
        if (next < tree_.size() && tree_[next] <= rem) {
            pos = next;
            rem -= tree_[next];
        }
    }
    int slot = static_cast<int>(pos);
    if (slot >= num_slots()) slot = num_slots() - 1;
    // guard against landing on a zero slot from prefix rounding
    while (slot >= 0 && slots_[static_cast<size_t>(slot)] <= 0) --slot;
    if (slot < 0)
        for (slot = 0; slot < num_slots() && slots_[static_cast<size_t>(slot)] <= 0; ++slot) {
        }
    return slot < num_slots() ? slot : -1;
}

double limit_density(double y, double q, int m) {
    if (!(q > 0 && q < 1)) throw std::domain_error("limit_density: q must lie in (0,1)");
    if (m < 1) throw std::domain_error("limit_density: m must be >= 1");
    const double edge = 1 - q;
    if (y >= edge) return 0.0;
    if (y <= -edge) return static_cast<double>(m);
    return static_cast<double>(m) * 0.5 * (1.0 - y / edge);
}

int default_window(double q, double t) {
    int w = static_cast<int>(std::ceil((1 - q) * t)) +
            static_cast<int>(std::ceil(6 * std::sqrt(t)));
    return std::max(w, 3);
}

namespace {

int resolve_jobs(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

std::vector<std::vector<int>> step_initial(int num_species, int num_sites, int window, int m,
                                           int front, int species) {
    // sites x in [-window, window]; `species` fills x <= front, holes elsewhere
    std::vector<std::vector<int>> occ(static_cast<size_t>(num_species),
                                      std::vector<int>(static_cast<size_t>(num_sites), 0));
    for (int x = -window; x <= window; ++x) {
        int idx = x + window;
        int s = x <= front ? species : 0;
        occ[static_cast<size_t>(s)][static_cast<size_t>(idx)] = m;
    }
    return occ;
}

struct Bin {
    double y_center;
    std::vector<int> sites;
};

std::vector<Bin> make_bins(double y_max, double width, double t, int window) {
    std::vector<Bin> bins;
    int nb = static_cast<int>(std::ceil(2 * y_max / width));
    for (int k = 0; k < nb; ++k) {
        double lo = -y_max + k * width;
        double hi = lo + width;
        Bin bin;
        bin.y_center = 0.5 * (lo + hi);
        int xlo = static_cast<int>(std::ceil(lo * t));
        int xhi = static_cast<int>(std::ceil(hi * t));
        for (int x = xlo; x < xhi; ++x)
            if (x >= -window && x <= window) bin.sites.push_back(x + window);
        if (!bin.sites.empty()) bins.push_back(std::move(bin));
    }
    return bins;
}

void mean_stderr(const std::vector<double>& samples, double& mean, double& err) {
    const double n = static_cast<double>(samples.size());
    mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    err = samples.size() > 1 ? std::sqrt(ss / (n * (n - 1))) : 0.0;
}

}  // namespace

DensityProfile run_hydro(const HydroConfig& config) {
    if (!(config.q > 0 && config.q < 1))
        throw std::domain_error("run_hydro: q must lie in (0,1)");
    if (config.m < 1 || config.trajectories < 1 || config.t < 0)
        throw std::domain_error("run_hydro: bad parameters");
    const int required = default_window(config.q, config.t);
    int window = config.window < 0 ? required : config.window;
    if (window < required)
        throw std::invalid_argument("run_hydro: window too small; minimum half-width is " +
                                    std::to_string(required));
    const int num_sites = 2 * window + 1;
    const double width = config.bin_width > 0 ? config.bin_width : 0.05 * (1 - config.q);
    const double y_max = config.y_max > 0 ? config.y_max : (1 - config.q);
    auto bins = make_bins(y_max, width, std::max(config.t, 1.0), window);

    const long n = config.trajectories;
    std::vector<std::vector<double>> rows(static_cast<size_t>(n),
                                          std::vector<double>(bins.size(), 0.0));
    EngineParams params{config.q, config.m, 2, num_sites};
    auto init = step_initial(2, num_sites, window, config.m, 0, 1);

#pragma omp parallel for schedule(dynamic) num_threads(resolve_jobs(config.jobs))
    for (long traj = 0; traj < n; ++traj) {
        Rng rng(config.seed, static_cast<uint64_t>(traj));
        SerialEngine serial;
        FenwickEngine fenwick;
        EngineBase& engine =
            config.use_reference_engine ? static_cast<EngineBase&>(serial) : fenwick;
        engine.reset(params, init);
        engine.run_until(config.t, rng);
        for (size_t b = 0; b < bins.size(); ++b) {
            double acc = 0;
            for (int site : bins[b].sites) acc += engine.count(1, site);
            rows[static_cast<size_t>(traj)][b] =
                acc / static_cast<double>(bins[b].sites.size());
        }
    }

    DensityProfile profile;
    profile.trajectories = n;
    profile.window = window;
    profile.t = config.t;
    std::vector<double> column(static_cast<size_t>(n));
    for (size_t b = 0; b < bins.size(); ++b) {
        for (long traj = 0; traj < n; ++traj)
            column[static_cast<size_t>(traj)] = rows[static_cast<size_t>(traj)][b];
        double mean, err;
        mean_stderr(column, mean, err);
        profile.y.push_back(bins[b].y_center);
        profile.rho_hat.push_back(mean);
        profile.std_err.push_back(err);
        // limit evaluated where the bin's sites actually sit
        double limit = 0;
        for (int site : bins[b].sites)
            limit += limit_density((site - window) / std::max(config.t, 1.0), config.q,
                                   config.m);
        profile.rho_limit.push_back(limit / static_cast<double>(bins[b].sites.size()));
    }
    return profile;
}

SecondClassStats second_class_counts(const SecondClassConfig& config) {
    if (!(config.q > 0 && config.q < 1))
        throw std::domain_error("second_class_counts: q must lie in (0,1)");
    const int required = default_window(config.q, config.t);
    int window = config.window < 0 ? required : config.window;
    if (window < required)
        throw std::invalid_argument(
            "second_class_counts: window too small; minimum half-width is " +
            std::to_string(required));
    for (int x : config.thresholds)
        if (std::abs(x) >= window)
            throw std::invalid_argument("second_class_counts: threshold outside the window");

    const int num_sites = 2 * window + 1;
    const long n = config.trajectories;
    const size_t nx = config.thresholds.size();

    // deformed step: first-class (2) on x < 0, m second-class (1) at 0, holes right
    std::vector<std::vector<int>> init_direct(
        3, std::vector<int>(static_cast<size_t>(num_sites), 0));
    for (int x = -window; x <= window; ++x) {
        int idx = x + window;
        int s = x < 0 ? 2 : (x == 0 ? 1 : 0);
        init_direct[static_cast<size_t>(s)][static_cast<size_t>(idx)] = config.m;
    }
    auto init_step = step_initial(2, num_sites, window, config.m, 0, 1);

    std::vector<std::vector<double>> direct(static_cast<size_t>(n),
                                            std::vector<double>(nx, 0.0));
    std::vector<std::vector<double>> shifted(static_cast<size_t>(n),
                                             std::vector<double>(nx, 0.0));

#pragma omp parallel for schedule(dynamic) num_threads(resolve_jobs(config.jobs))
    for (long traj = 0; traj < n; ++traj) {
        {
            Rng rng(config.seed, static_cast<uint64_t>(traj));
            FenwickEngine engine;
            engine.reset(EngineParams{config.q, config.m, 3, num_sites}, init_direct);
            engine.run_until(config.t, rng);
            for (size_t k = 0; k < nx; ++k) {
                int acc = 0;
                for (int x = -window; x <= config.thresholds[k]; ++x)
                    acc += engine.count(1, x + window);
                direct[static_cast<size_t>(traj)][k] = acc;
            }
        }
        {
            Rng rng(config.seed ^ 0x5DEECE66DULL, static_cast<uint64_t>(traj));
            FenwickEngine engine;
            engine.reset(EngineParams{config.q, config.m, 2, num_sites}, init_step);
            engine.run_until(config.t, rng);
            // the law started from 1_{y <= x} m at the origin equals the step law at -x
            for (size_t k = 0; k < nx; ++k)
                shifted[static_cast<size_t>(traj)][k] =
                    engine.count(1, -config.thresholds[k] + window);
        }
    }

    SecondClassStats stats;
    stats.x = config.thresholds;
    stats.trajectories = n;
    stats.t = config.t;
    std::vector<double> column(static_cast<size_t>(n));
    for (size_t k = 0; k < nx; ++k) {
        double mean, err;
        for (long traj = 0; traj < n; ++traj)
            column[static_cast<size_t>(traj)] = direct[static_cast<size_t>(traj)][k];
        mean_stderr(column, mean, err);
        stats.count_direct.push_back(mean);
        stats.stderr_direct.push_back(err);
        for (long traj = 0; traj < n; ++traj)
            column[static_cast<size_t>(traj)] = shifted[static_cast<size_t>(traj)][k];
        mean_stderr(column, mean, err);
        stats.rho0_shifted.push_back(mean);
        stats.stderr_shifted.push_back(err);
    }
    return stats;
}

namespace {

// Duality summand D(eta, x) = q^{m x} (1 - q^{eta_x}) q^{N_{x+1}(eta)}.
double duality_term(const std::vector<int>& eta, int x, double q, int m) {
    const int L = static_cast<int>(eta.size());
    int tail = 0;
    for (int y = x + 1; y <= L; ++y) tail += eta[static_cast<size_t>(y) - 1];
    return std::pow(q, m * x) * (1.0 - std::pow(q, eta[static_cast<size_t>(x) - 1])) *
           std::pow(q, tail);
}

// Single-species occupancy chain on L sites with capacities m: the two
// q-deformed jump displays specialised to particles over holes.
std::pair<std::vector<std::vector<int>>, RateMatrix<double>> occupancy_generator(
    int L, int m, int total, double q) {
    std::vector<std::vector<int>> states;
    std::vector<int> work(static_cast<size_t>(L), 0);
    std::function<void(int, int)> rec = [&](int site, int left) {
        if (site == L) {
            if (left == 0) states.push_back(work);
            return;
        }
        for (int k = std::min(m, left); k >= 0; --k) {
            work[static_cast<size_t>(site)] = k;
            rec(site + 1, left - k);
        }
        work[static_cast<size_t>(site)] = 0;
    };
    rec(0, total);
    std::sort(states.begin(), states.end());
    std::map<std::vector<int>, int> index;
    for (size_t s = 0; s < states.size(); ++s) index[states[s]] = static_cast<int>(s);

    double qm = 0, pw = 1;
    for (int k = 0; k < m; ++k) {
        qm += pw;
        pw *= q;
    }
    auto qint = [&](int k) {
        double acc = 0, p = 1;
        for (int r = 0; r < k; ++r) {
            acc += p;
            p *= q;
        }
        return acc;
    };
    RateMatrix<double> gen(static_cast<int>(states.size()));
    for (size_t s = 0; s < states.size(); ++s) {
        const auto& eta = states[s];
        double out = 0;
        for (int x = 0; x + 1 < L; ++x) {
            int k = eta[static_cast<size_t>(x)], k1 = eta[static_cast<size_t>(x) + 1];
            if (k > 0 && k1 < m) {  // particle x -> x+1
                double rate = qint(k) * qint(m - k1) / (qm * qm);
                auto to = eta;
                --to[static_cast<size_t>(x)];
                ++to[static_cast<size_t>(x) + 1];
                gen.add(static_cast<int>(s), index.at(to), rate);
                out += rate;
            }
            if (k1 > 0 && k < m) {  // particle x+1 -> x
                double rate = std::pow(q, 1 + k + (m - k1)) * qint(m - k) * qint(k1) / (qm * qm);
                auto to = eta;
                ++to[static_cast<size_t>(x)];
                --to[static_cast<size_t>(x) + 1];
                gen.add(static_cast<int>(s), index.at(to), rate);
                out += rate;
            }
        }
        gen.add(static_cast<int>(s), static_cast<int>(s), -out);
    }
    return {std::move(states), std::move(gen)};
}

// Walker chain on {1..L}: right rate 1/[m]_q, left rate q^m/[m]_q, the
// single-particle case of the occupancy chain.
RateMatrix<double> walker_generator(int L, double q, int m) {
    double qm = 0, pw = 1;
    for (int k = 0; k < m; ++k) {
        qm += pw;
        pw *= q;
    }
    const double right = 1.0 / qm;
    const double left = std::pow(q, m) / qm;
    RateMatrix<double> gen(L);
    for (int x = 0; x < L; ++x) {
        double out = 0;
        if (x + 1 < L) {
            gen.add(x, x + 1, right);
            out += right;
        }
        if (x > 0) {
            gen.add(x, x - 1, left);
            out += left;
        }
        gen.add(x, x, -out);
    }
    return gen;
}

}  // namespace

DualityReport check_duality(const DualityConfig& config) {
    const int L = config.window;
    const int m = config.m;
    const double q = config.q;
    if (!(q > 0 && q < 1)) throw std::domain_error("check_duality: q must lie in (0,1)");
    if (L < 2) throw std::domain_error("check_duality: window must have at least 2 sites");
    if (config.i < 1 || config.i > L) throw std::domain_error("check_duality: bad site index");
    std::vector<int> eta = config.eta0;
    if (eta.empty()) {
        eta.assign(static_cast<size_t>(L), 0);
        for (int x = 1; x <= (L + 1) / 2; ++x) eta[static_cast<size_t>(x) - 1] = m;
    }
    if (static_cast<int>(eta.size()) != L)
        throw std::invalid_argument("check_duality: eta0 size must match the window");
    int total = 0;
    for (int v : eta) {
        if (v < 0 || v > m)
            throw std::invalid_argument("check_duality: eta0 entries must lie in [0,m]");
        total += v;
    }

    auto tail_from = [&](const std::vector<int>& occ, int from) {
        int acc = 0;
        for (int y = from; y <= L; ++y) acc += occ[static_cast<size_t>(y) - 1];
        return acc;
    };

    DualityReport report;
    report.exact = config.exact;

    if (config.exact) {
        auto [states, gen] = occupancy_generator(L, m, total, q);
        std::map<std::vector<int>, int> index;
        for (size_t s = 0; s < states.size(); ++s) index[states[s]] = static_cast<int>(s);
        auto [row, approx] = uniformized_row(gen, index.at(eta), config.t, config.eps);
        double lhs = 0;
        for (size_t s = 0; s < states.size(); ++s)
            lhs += row[s] * std::pow(q, tail_from(states[s], config.i));
        report.lhs = lhs;
        report.eps = approx.error_bound;

        auto wgen = walker_generator(L, q, m);
        double rhs = std::pow(q, total);
        for (int k = 1; k < config.i; ++k) {
            auto [wrow, wapprox] = uniformized_row(wgen, k - 1, config.t, config.eps);
            double expect = 0;
            for (int x = 1; x <= L; ++x)
                expect += wrow[static_cast<size_t>(x) - 1] * duality_term(eta, x, q, m);
            rhs += std::pow(q, -m * k) * expect;
            report.eps = std::max(report.eps, wapprox.error_bound);
        }
        report.rhs = rhs;
        return report;
    }

    const long n = config.trajectories;
    std::vector<double> lhs_samples(static_cast<size_t>(n));
    EngineParams params{q, m, 2, L};
    std::vector<std::vector<int>> init(2, std::vector<int>(static_cast<size_t>(L), 0));
    for (int x = 1; x <= L; ++x) {
        init[1][static_cast<size_t>(x) - 1] = eta[static_cast<size_t>(x) - 1];
        init[0][static_cast<size_t>(x) - 1] = m - eta[static_cast<size_t>(x) - 1];
    }
#pragma omp parallel for schedule(dynamic) num_threads(resolve_jobs(config.jobs))
    for (long traj = 0; traj < n; ++traj) {
        Rng rng(config.seed, static_cast<uint64_t>(traj));
        FenwickEngine engine;
        engine.reset(params, init);
        engine.run_until(config.t, rng);
        int tail = 0;
        for (int x = config.i; x <= L; ++x) tail += engine.count(1, x - 1);
        lhs_samples[static_cast<size_t>(traj)] = std::pow(q, tail);
    }
    mean_stderr(lhs_samples, report.lhs, report.lhs_err);

    double qm = 0, pw = 1;
    for (int k = 0; k < m; ++k) {
        qm += pw;
        pw *= q;
    }
    const double right = 1.0 / qm, left = std::pow(q, m) / qm;
    report.rhs = std::pow(q, total);
    double var = 0;
    for (int k = 1; k < config.i; ++k) {
        std::vector<double> samples(static_cast<size_t>(n));
#pragma omp parallel for schedule(static) num_threads(resolve_jobs(config.jobs))
        for (long traj = 0; traj < n; ++traj) {
            Rng rng(config.seed ^ (0xABCD1234ULL + static_cast<uint64_t>(k)),
                    static_cast<uint64_t>(traj));
            int x = k;
            double t = 0;
            while (true) {
                double rr = x < L ? right : 0.0;
                double rl = x > 1 ? left : 0.0;
                double tot = rr + rl;
                if (tot <= 0) break;
                t += rng.exponential(tot);
                if (t > config.t) break;
                x = rng.uniform() * tot < rr ? x + 1 : x - 1;
            }
            samples[static_cast<size_t>(traj)] = duality_term(eta, x, q, m);
        }
        double mean, err;
        mean_stderr(samples, mean, err);
        double weight = std::pow(q, -m * k);
        report.rhs += weight * mean;
        var += weight * weight * err * err;
    }
    report.rhs_err = std::sqrt(var);
    return report;
}

}  // namespace coxasep::hydro
