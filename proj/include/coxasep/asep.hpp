#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coxasep/particle.hpp"
#include "coxasep/ratematrix.hpp"
#include "coxasep/rational.hpp"
#include "coxasep/rng.hpp"

namespace coxasep {

/// None: closed finite segment. Case1: s_0 not in H' (sign flips at site 1).
/// Case2: s_0 in H' (mirror site, no flux through the left boundary).
enum class Boundary { None, Case1, Case2 };

struct ProcessSpec {
    LatticeSpec lattice;
    Rational q = Rational(1, 2);
    Boundary boundary = Boundary::None;
    /// Time-reversed dynamics: the asymmetry prefix q moves to the opposite
    /// jump direction (and to the opposite flip sign in Case 1).
    bool drift_reversed = false;

    void validate() const;
};

enum class SwapDirection { RightOverLeft, LeftOverRight };

/// Jump rate across bond (x, x+1) for species i and j < i. RightOverLeft moves
/// i from x to x+1; LeftOverRight moves i from x+1 to x and carries the extra
/// factor q. Occupancy shortfalls give rate zero; i <= j is a domain error.
template <class R>
R bulk_rate(const ParticleConfig& c, int x, int i, int j, SwapDirection dir, const R& q);

struct EventDesc {
    enum class Kind { BulkSwap, BoundaryFlip };
    Kind kind = Kind::BulkSwap;
    int site = 1;  // left site of the bond, or 1 for boundary flips
    int hi = 0;    // species i (swaps) or the flipped species j (flips)
    int lo = 0;    // species j < i (swaps only)
    SwapDirection dir = SwapDirection::RightOverLeft;

    bool operator==(const EventDesc&) const = default;
    auto operator<=>(const EventDesc&) const = default;
};

template <class R>
struct Transition {
    ParticleConfig target;
    R rate;
    EventDesc event;
};

/// All transitions out of c, canonically ordered (clock-major). Case 2 swaps
/// across bond 1 apply the instantaneous mirror replacement atomically.
template <class R>
std::vector<Transition<R>> transitions(const ParticleConfig& c, const ProcessSpec& p);

/// The boundary events only (empty for Boundary::None).
template <class R>
std::vector<Transition<R>> boundary_transitions(const ParticleConfig& c, const ProcessSpec& p);

/// Sparse generator over the enumerated flavor space; rows sum to zero.
template <class R>
std::pair<StateSpace, RateMatrix<R>> build_generator(const ProcessSpec& p,
                                                     std::size_t cap = kEnumerationCap);

/// Exact law of the q-exchangeable split of one fused site: keys are the
/// orderings (left to right), weights proportional to q^{inversions}.
std::map<std::vector<int>, Rational> site_split_law(const std::vector<int>& multiset,
                                                    const Rational& q);

/// Lambda: split every fused site q-exchangeably onto unit sites. Plain and
/// Zero flavors; mirror splits are served by the group-side fiber expansion
/// in the exact engine.
ParticleConfig lambda_expand(const ParticleConfig& c, const Rational& q, Rng& rng);

/// One Poisson-clock ring of the graphical construction.
struct TrajectoryEvent {
    double time = 0;
    int clock = 0;    // 0 = boundary clock (Case 1), otherwise bond index
    double mark = 0;  // uniform mark deciding the swap at this ring
};

struct GraphicalRecord {
    double horizon = 0;
    int num_clocks = 0;
    std::vector<TrajectoryEvent> events;  // strictly increasing times in [0, horizon]

    std::string serialize() const;
    static GraphicalRecord parse(const std::string& text);
};

/// Continuous-time simulation by per-clock Poisson processes at rate 1+q with
/// uniform marks; returns the final state and the full clock record.
std::pair<ParticleConfig, GraphicalRecord> simulate(const ProcessSpec& p,
                                                    const ParticleConfig& init, double horizon,
                                                    Rng& rng);

/// Gillespie scheduler (state-dependent total rate); distributionally identical
/// to the graphical construction, without a replayable record.
ParticleConfig simulate_gillespie(const ProcessSpec& p, const ParticleConfig& init,
                                  double horizon, Rng& rng);

/// Deterministic forward replay of a clock record.
ParticleConfig replay(const GraphicalRecord& rec, const ParticleConfig& init,
                      const ProcessSpec& p);

/// Replay with every clock reflected at the horizon (t -> T - t).
ParticleConfig reverse_replay(const GraphicalRecord& rec, const ParticleConfig& init,
                              const ProcessSpec& p);

/// Clock count for the graphical construction of p.
int num_clocks(const ProcessSpec& p);

extern template Rational bulk_rate<Rational>(const ParticleConfig&, int, int, int,
                                             SwapDirection, const Rational&);
extern template double bulk_rate<double>(const ParticleConfig&, int, int, int, SwapDirection,
                                         const double&);
extern template std::vector<Transition<Rational>> transitions<Rational>(const ParticleConfig&,
                                                                        const ProcessSpec&);
extern template std::vector<Transition<double>> transitions<double>(const ParticleConfig&,
                                                                    const ProcessSpec&);
extern template std::vector<Transition<Rational>> boundary_transitions<Rational>(
    const ParticleConfig&, const ProcessSpec&);
extern template std::vector<Transition<double>> boundary_transitions<double>(
    const ParticleConfig&, const ProcessSpec&);
extern template std::pair<StateSpace, RateMatrix<Rational>> build_generator<Rational>(
    const ProcessSpec&, std::size_t);
extern template std::pair<StateSpace, RateMatrix<double>> build_generator<double>(
    const ProcessSpec&, std::size_t);

}  // namespace coxasep
