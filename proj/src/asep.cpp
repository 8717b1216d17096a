#include "coxasep/asep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace coxasep {

void ProcessSpec::validate() const {
    if (!(q > Rational(0) && q < Rational(1)))
        throw std::domain_error("ProcessSpec: q must lie in (0,1)");
    if (boundary != Boundary::None && lattice.ctype.family != Family::BC)
        throw std::invalid_argument("ProcessSpec: boundary dynamics require type BC");
    if (boundary == Boundary::Case2 && !flavor_has_mirror(lattice.flavor))
        throw std::invalid_argument("ProcessSpec: Case 2 requires a mirror flavor");
    if (boundary != Boundary::Case2 && flavor_has_mirror(lattice.flavor))
        throw std::invalid_argument("ProcessSpec: mirror flavors evolve under Case 2");
}

template <class R>
R bulk_rate(const ParticleConfig& c, int x, int i, int j, SwapDirection dir, const R& q) {
    if (i <= j) throw std::domain_error("bulk_rate: requires species i > j");
    const auto& spec = c.spec();
    const auto labels = spec.species_labels();
    const R denom = q_int(spec.effective_cap(x), q) * q_int(spec.effective_cap(x + 1), q);

    auto partial = [&](int site, auto pred) {
        long e = 0;
        for (int s : labels)
            if (pred(s)) e += c.count(site, s);
        return e;
    };

    if (dir == SwapDirection::RightOverLeft) {
        if (c.count(x, i) < 1 || c.count(x + 1, j) < 1) return R(0);
        long e1 = partial(x, [&](int s) { return s > i; });
        long e2 = partial(x + 1, [&](int s) { return s < j; });
        return q_pow(q, e1 + e2) * q_int(c.count(x, i), q) * q_int(c.count(x + 1, j), q) / denom;
    }
    if (c.count(x + 1, i) < 1 || c.count(x, j) < 1) return R(0);
    long e1 = partial(x, [&](int s) { return s > j; });
    long e2 = partial(x + 1, [&](int s) { return s < i; });
    return q * q_pow(q, e1 + e2) * q_int(c.count(x, j), q) * q_int(c.count(x + 1, i), q) / denom;
}

namespace {

template <class R>
R process_q(const ProcessSpec& p) {
    if constexpr (std::is_same_v<R, Rational>)
        return p.q;
    else
        return to_double(p.q);
}

template <class R>
void append_bond_transitions(const ParticleConfig& c, const ProcessSpec& p, int x,
                             std::vector<Transition<R>>& out) {
    const R q = process_q<R>(p);
    const bool mirror_bond = p.boundary == Boundary::Case2 && x == 1;
    const auto labels = c.spec().species_labels();
    for (int i : labels) {
        for (int j : labels) {
            if (j >= i) break;
            for (SwapDirection dir :
                 {SwapDirection::RightOverLeft, SwapDirection::LeftOverRight}) {
                R rate = bulk_rate(c, x, i, j, dir, q);
                if (rate == R(0)) continue;
                if (p.drift_reversed)
                    rate = dir == SwapDirection::RightOverLeft ? R(rate * q) : R(rate / q);
                ParticleConfig next = c;
                const bool i_leaves_left = dir == SwapDirection::RightOverLeft;
                const int leaving = i_leaves_left ? i : j;   // x -> x+1
                const int arriving = i_leaves_left ? j : i;  // x+1 -> x
                next.add(x, leaving, -1);
                next.add(x + 1, leaving, +1);
                next.add(x + 1, arriving, -1);
                next.add(x, arriving, +1);
                if (mirror_bond) {
                    next.add(1, -leaving, -1);
                    next.add(1, -arriving, +1);
                }
                out.push_back({std::move(next), rate,
                               EventDesc{EventDesc::Kind::BulkSwap, x, i, j, dir}});
            }
        }
    }
}

template <class R>
void append_boundary_transitions(const ParticleConfig& c, const ProcessSpec& p,
                                 std::vector<Transition<R>>& out) {
    if (p.boundary != Boundary::Case1) return;
    const R q = process_q<R>(p);
    const auto labels = c.spec().species_labels();
    const R denom = q_int(c.spec().effective_cap(1), q);
    for (int j : labels) {
        if (j == 0 || c.count(1, j) < 1) continue;
        long e = 0;
        for (int r : labels)
            if (r < j) e += c.count(1, r);
        R rate = q_pow(q, e) * q_int(c.count(1, j), q) / denom;
        if ((j > 0) != p.drift_reversed) rate *= q;
        ParticleConfig next = c;
        next.add(1, j, -1);
        next.add(1, -j, +1);
        out.push_back({std::move(next), rate,
                       EventDesc{EventDesc::Kind::BoundaryFlip, 1, j, -j,
                                 SwapDirection::RightOverLeft}});
    }
}

template <class R>
std::vector<Transition<R>> transitions_at_clock(const ParticleConfig& c, const ProcessSpec& p,
                                                int clock) {
    std::vector<Transition<R>> out;
    if (clock == 0)
        append_boundary_transitions(c, p, out);
    else
        append_bond_transitions(c, p, clock, out);
    return out;
}

std::vector<int> clock_ids(const ProcessSpec& p) {
    std::vector<int> ids;
    if (p.boundary == Boundary::Case1) ids.push_back(0);
    for (int x = 1; x < p.lattice.num_sites(); ++x) ids.push_back(x);
    return ids;
}

}  // namespace

template <class R>
std::vector<Transition<R>> transitions(const ParticleConfig& c, const ProcessSpec& p) {
    p.validate();
    std::vector<Transition<R>> out;
    for (int clock : clock_ids(p)) {
        auto part = transitions_at_clock<R>(c, p, clock);
        out.insert(out.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
    }
    return out;
}

template <class R>
std::vector<Transition<R>> boundary_transitions(const ParticleConfig& c, const ProcessSpec& p) {
    p.validate();
    std::vector<Transition<R>> out;
    append_boundary_transitions(c, p, out);
    return out;
}

StateSpace make_state_space(const LatticeSpec& spec, std::size_t cap) {
    StateSpace space;
    space.spec = spec;
    space.states = enumerate_space(spec, cap);
    for (size_t i = 0; i < space.states.size(); ++i)
        space.index[space.states[i].flat()] = static_cast<int>(i);
    return space;
}

template <class R>
std::pair<StateSpace, RateMatrix<R>> build_generator(const ProcessSpec& p, std::size_t cap) {
    p.validate();
    StateSpace space = make_state_space(p.lattice, cap);
    RateMatrix<R> gen(space.size());
    for (int s = 0; s < space.size(); ++s) {
        R total(0);
        for (const auto& tr : transitions<R>(space.states[static_cast<size_t>(s)], p)) {
            tr.target.validate();
            gen.add(s, space.at(tr.target), tr.rate);
            total += tr.rate;
        }
        gen.add(s, s, -total);
    }
    return {std::move(space), std::move(gen)};
}

std::map<std::vector<int>, Rational> site_split_law(const std::vector<int>& multiset,
                                                    const Rational& q) {
    std::vector<int> word = multiset;
    std::sort(word.begin(), word.end());
    std::map<std::vector<int>, Rational> law;
    Rational norm(0);
    do {
        long inv = 0;
        for (size_t a = 0; a < word.size(); ++a)
            for (size_t b = a + 1; b < word.size(); ++b)
                if (word[a] > word[b]) ++inv;
        Rational w = q_pow(q, inv);
        law[word] = w;
        norm += w;
    } while (std::next_permutation(word.begin(), word.end()));
    for (auto& [k, v] : law) v /= norm;
    return law;
}

ParticleConfig lambda_expand(const ParticleConfig& c, const Rational& q, Rng& rng) {
    const auto& spec = c.spec();
    if (flavor_has_mirror(spec.flavor))
        throw std::invalid_argument("lambda_expand: mirror flavors are not splittable sitewise");
    LatticeSpec fine(spec.ctype, std::vector<int>(static_cast<size_t>(spec.total()), 1),
                     spec.species_blocks, spec.flavor);
    ParticleConfig out(fine);
    int unit = 1;
    for (int x = 1; x <= spec.num_sites(); ++x) {
        std::vector<int> multiset;
        for (int s : spec.species_labels())
            for (int k = 0; k < c.count(x, s); ++k) multiset.push_back(s);
        auto law = site_split_law(multiset, q);
        double u = rng.uniform(), cum = 0;
        const std::vector<int>* chosen = &law.begin()->first;
        for (const auto& [word, prob] : law) {
            cum += to_double(prob);
            chosen = &word;
            if (u < cum) break;
        }
        for (int s : *chosen) out.add(unit++, s, 1);
    }
    return out;
}

namespace {

// One ring of one clock. Per-clock total rates are bounded by 1 + q, the
// constant clock intensity, so the leftover mass is the no-op probability.
void apply_ring(ParticleConfig& state, const ProcessSpec& p, int clock, double mark) {
    auto options = transitions_at_clock<double>(state, p, clock);
    const double cap = 1.0 + to_double(p.q);
    double cum = 0;
    for (auto& tr : options) {
        cum += tr.rate / cap;
        if (mark < cum) {
            state = std::move(tr.target);
            return;
        }
    }
    if (cum > 1.0 + 1e-9) throw std::logic_error("apply_ring: clock rate bound violated");
}

}  // namespace

int num_clocks(const ProcessSpec& p) { return static_cast<int>(clock_ids(p).size()); }

std::pair<ParticleConfig, GraphicalRecord> simulate(const ProcessSpec& p,
                                                    const ParticleConfig& init, double horizon,
                                                    Rng& rng) {
    p.validate();
    if (horizon < 0) throw std::domain_error("simulate: negative horizon");
    init.validate();
    GraphicalRecord rec;
    rec.horizon = horizon;
    auto clocks = clock_ids(p);
    rec.num_clocks = static_cast<int>(clocks.size());
    ParticleConfig state = init;
    if (clocks.empty() || horizon == 0) return {state, rec};
    const double total = static_cast<double>(clocks.size()) * (1.0 + to_double(p.q));
    double t = 0;
    while (true) {
        t += rng.exponential(total);
        if (t > horizon) break;
        int clock = clocks[static_cast<size_t>(rng.next_u64() % clocks.size())];
        double mark = rng.uniform();
        apply_ring(state, p, clock, mark);
        rec.events.push_back({t, clock, mark});
    }
    return {state, rec};
}

ParticleConfig simulate_gillespie(const ProcessSpec& p, const ParticleConfig& init,
                                  double horizon, Rng& rng) {
    p.validate();
    init.validate();
    ParticleConfig state = init;
    double t = 0;
    while (true) {
        auto options = transitions<double>(state, p);
        double total = 0;
        for (const auto& tr : options) total += tr.rate;
        if (total <= 0) break;
        t += rng.exponential(total);
        if (t > horizon) break;
        double u = rng.uniform() * total, cum = 0;
        bool applied = false;
        for (auto& tr : options) {
            cum += tr.rate;
            if (u < cum) {
                state = std::move(tr.target);
                applied = true;
                break;
            }
        }
        if (!applied) state = std::move(options.back().target);
    }
    return state;
}

ParticleConfig replay(const GraphicalRecord& rec, const ParticleConfig& init,
                      const ProcessSpec& p) {
    ParticleConfig state = init;
    for (const auto& ev : rec.events) apply_ring(state, p, ev.clock, ev.mark);
    return state;
}

ParticleConfig reverse_replay(const GraphicalRecord& rec, const ParticleConfig& init,
                              const ProcessSpec& p) {
    ParticleConfig state = init;
    for (auto it = rec.events.rbegin(); it != rec.events.rend(); ++it)
        apply_ring(state, p, it->clock, it->mark);
    return state;
}

std::string GraphicalRecord::serialize() const {
    std::ostringstream os;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", horizon);
    os << "coxasep-traj v1 horizon=" << buf << " clocks=" << num_clocks << '\n';
    for (const auto& ev : events) {
        std::snprintf(buf, sizeof buf, "%a", ev.time);
        os << buf << ' ' << ev.clock << ' ';
        std::snprintf(buf, sizeof buf, "%a", ev.mark);
        os << buf << '\n';
    }
    return os.str();
}

GraphicalRecord GraphicalRecord::parse(const std::string& text) {
    std::istringstream is(text);
    std::string tag, version, field;
    is >> tag >> version >> field;
    GraphicalRecord rec;
    if (tag != "coxasep-traj" || version != "v1" || field.rfind("horizon=", 0) != 0)
        throw std::invalid_argument("GraphicalRecord::parse: bad header");
    rec.horizon = std::strtod(field.c_str() + 8, nullptr);
    is >> field;
    if (field.rfind("clocks=", 0) != 0)
        throw std::invalid_argument("GraphicalRecord::parse: bad header");
    rec.num_clocks = std::stoi(field.substr(7));
    std::string tstr, mstr;
    int clock;
    while (is >> tstr >> clock >> mstr)
        rec.events.push_back({std::strtod(tstr.c_str(), nullptr), clock,
                              std::strtod(mstr.c_str(), nullptr)});
    return rec;
}

template Rational bulk_rate<Rational>(const ParticleConfig&, int, int, int, SwapDirection,
                                      const Rational&);
template double bulk_rate<double>(const ParticleConfig&, int, int, int, SwapDirection,
                                  const double&);
template std::vector<Transition<Rational>> transitions<Rational>(const ParticleConfig&,
                                                                 const ProcessSpec&);
template std::vector<Transition<double>> transitions<double>(const ParticleConfig&,
                                                             const ProcessSpec&);
template std::vector<Transition<Rational>> boundary_transitions<Rational>(const ParticleConfig&,
                                                                          const ProcessSpec&);
template std::vector<Transition<double>> boundary_transitions<double>(const ParticleConfig&,
                                                                      const ProcessSpec&);
template std::pair<StateSpace, RateMatrix<Rational>> build_generator<Rational>(
    const ProcessSpec&, std::size_t);
template std::pair<StateSpace, RateMatrix<double>> build_generator<double>(const ProcessSpec&,
                                                                           std::size_t);

}  // namespace coxasep
