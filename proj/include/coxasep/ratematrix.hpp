#pragma once

#include <map>
#include <utility>
#include <vector>

#include "coxasep/particle.hpp"

namespace coxasep {

/// Enumerated state space of a finite chain with a config <-> index dictionary.
struct StateSpace {
    LatticeSpec spec;
    std::vector<ParticleConfig> states;
    std::map<std::vector<int>, int> index;

    int at(const ParticleConfig& c) const {
        auto it = index.find(c.flat());
        if (it == index.end()) throw std::out_of_range("StateSpace: unknown configuration");
        return it->second;
    }
    int size() const { return static_cast<int>(states.size()); }
};

StateSpace make_state_space(const LatticeSpec& spec, std::size_t cap = kEnumerationCap);

/// Sparse generator (or kernel) of a finite-state chain. Diagonal included.
template <class T>
struct RateMatrix {
    int n = 0;
    std::vector<std::vector<std::pair<int, T>>> rows;

    explicit RateMatrix(int dim = 0) : n(dim), rows(static_cast<size_t>(dim)) {}

    void add(int r, int c, const T& v) {
        if (v == T(0)) return;
        for (auto& [col, val] : rows[static_cast<size_t>(r)])
            if (col == c) {
                val += v;
                return;
            }
        rows[static_cast<size_t>(r)].emplace_back(c, v);
    }

    T get(int r, int c) const {
        for (const auto& [col, val] : rows[static_cast<size_t>(r)])
            if (col == c) return val;
        return T(0);
    }

    T row_sum(int r) const {
        T acc(0);
        for (const auto& [col, val] : rows[static_cast<size_t>(r)]) acc += val;
        return acc;
    }

    /// v <- v * M (row vector times matrix).
    std::vector<T> apply_left(const std::vector<T>& v) const {
        std::vector<T> out(static_cast<size_t>(n), T(0));
        for (int r = 0; r < n; ++r) {
            const T& vr = v[static_cast<size_t>(r)];
            if (vr == T(0)) continue;
            for (const auto& [col, val] : rows[static_cast<size_t>(r)])
                out[static_cast<size_t>(col)] += vr * val;
        }
        return out;
    }
};

}  // namespace coxasep
