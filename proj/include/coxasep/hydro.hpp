#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coxasep/rng.hpp"

namespace coxasep::hydro {

/// Window-local multi-species ASEP(q,m) kernel. Species 0 are holes; higher
/// species displace lower. Rates follow the q-deformed jump rate display (the
/// engines are cross-checked against the reference bulk_rate in tests).
struct EngineParams {
    double q = 0.5;
    int m = 1;
    int num_species = 2;  // including holes
    int num_sites = 0;
};

struct EngineEvent {
    double time;
    int slot;
};

class EngineBase {
public:
    void reset(const EngineParams& params, const std::vector<std::vector<int>>& occupancy);
    int count(int species, int site) const {
        return counts_[static_cast<size_t>(species)][static_cast<size_t>(site)];
    }
    const std::vector<int>& species_row(int species) const {
        return counts_[static_cast<size_t>(species)];
    }
    int num_slots() const { return static_cast<int>(slots_.size()); }
    double slot_rate(int slot) const { return slots_[static_cast<size_t>(slot)]; }

protected:
    double compute_slot(int slot) const;
    void apply_slot(int slot);
    void refresh_bond(int bond);  // recompute the slots of one bond

    EngineParams params_;
    std::vector<std::vector<int>> counts_;       // [species][site]
    std::vector<std::pair<int, int>> pairs_;     // ordered species pairs i > j
    std::vector<double> slots_;                  // per-bond, per-pair, per-direction
    std::vector<double> qint_, qpow_;
    double inv_m2_ = 1;
    virtual void slot_changed(int slot, double old_value) = 0;
    virtual void rebuild() = 0;

public:
    virtual ~EngineBase() = default;
    virtual double total_rate() const = 0;
    virtual int select(double target) const = 0;  // first slot with prefix > target

    /// Advance to the horizon; optionally record the event sequence.
    double run_until(double horizon, Rng& rng, std::vector<EngineEvent>* trace = nullptr);
};

/// Reference scheduler: linear scan, total recomputed by direct summation.
class SerialEngine final : public EngineBase {
public:
    double total_rate() const override;
    int select(double target) const override;

protected:
    void slot_changed(int slot, double old_value) override;
    void rebuild() override {}
};

/// Fenwick-tree scheduler: O(log n) updates and prefix selection.
class FenwickEngine final : public EngineBase {
public:
    double total_rate() const override;
    int select(double target) const override;

protected:
    void slot_changed(int slot, double old_value) override;
    void rebuild() override;

private:
    std::vector<double> tree_;
};

/// m d(y): the rarefaction-fan density along rays y = x/t.
double limit_density(double y, double q, int m);

/// Window half-width from the design rule ceil((1-q)t) + ceil(6 sqrt(t)).
int default_window(double q, double t);

struct HydroConfig {
    double q = 0.5;
    int m = 1;
    double t = 200;
    long trajectories = 2000;
    uint64_t seed = 1;
    int window = -1;        // -1: design rule
    double bin_width = -1;  // -1: 0.05 (1-q)
    double y_max = -1;      // -1: the fan edge 1-q
    int jobs = 0;           // 0: all threads
    bool use_reference_engine = false;
};

struct DensityProfile {
    std::vector<double> y;
    std::vector<double> rho_hat;
    std::vector<double> std_err;
    std::vector<double> rho_limit;
    long trajectories = 0;
    int window = 0;
    double t = 0;
};

DensityProfile run_hydro(const HydroConfig& config);

struct SecondClassConfig {
    double q = 0.5;
    int m = 1;
    double t = 10;
    long trajectories = 10000;
    uint64_t seed = 1;
    std::vector<int> thresholds{0};
    int window = -1;
    int jobs = 0;
};

struct SecondClassStats {
    std::vector<int> x;
    std::vector<double> count_direct, stderr_direct;
    std::vector<double> rho0_shifted, stderr_shifted;
    long trajectories = 0;
    double t = 0;
};

/// Two-sided second-class estimate: direct counts from the deformed step
/// initial data next to the density of the shifted single-species step.
SecondClassStats second_class_counts(const SecondClassConfig& config);

struct DualityConfig {
    double q = 0.5;
    int m = 1;
    double t = 1.0;
    int window = 3;
    int i = 2;                  // site index of N_i, 1-based
    std::vector<int> eta0;      // initial occupancies; empty = left half filled
    long trajectories = 100000; // Monte Carlo path
    uint64_t seed = 1;
    int jobs = 0;
    bool exact = true;          // uniformization instead of Monte Carlo
    double eps = 1e-12;
};

struct DualityReport {
    double lhs = 0, lhs_err = 0;
    double rhs = 0, rhs_err = 0;
    bool exact = false;
    double eps = 0;
};

/// Observable duality check: E[q^{N_i(eta_t)}] against the dual-walker sum.
DualityReport check_duality(const DualityConfig& config);

}  // namespace coxasep::hydro
