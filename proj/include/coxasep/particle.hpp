#pragma once

#include <string>
#include <vector>

#include "coxasep/coxeter.hpp"

namespace coxasep {

/// Plain: species +-1..+-n (positive only in type A).
/// Zero: species shifted down one, 0,+-1..+-(n-1); block 1 becomes species 0.
/// Mirror: site 1 holds 2*m_1 particles in (j,-j) pairs.
/// MirrorZero: both.
enum class Flavor { Plain, Zero, Mirror, MirrorZero };

bool flavor_has_zero(Flavor f);
bool flavor_has_mirror(Flavor f);

struct LatticeSpec {
    CoxeterType ctype;
    std::vector<int> site_caps;       // m_1..m_L
    std::vector<int> species_blocks;  // N_1..N_n
    Flavor flavor = Flavor::Plain;

    LatticeSpec() = default;
    LatticeSpec(CoxeterType t, std::vector<int> caps, std::vector<int> blocks,
                Flavor fl = Flavor::Plain);

    int num_sites() const { return static_cast<int>(site_caps.size()); }
    int num_blocks() const { return static_cast<int>(species_blocks.size()); }
    int total() const;  // N

    /// Species labels carried by configurations of this flavor, ascending.
    std::vector<int> species_labels() const;
    /// Capacity of a site including the mirror doubling at site 1.
    int effective_cap(int site) const;

    bool operator==(const LatticeSpec&) const = default;
    auto operator<=>(const LatticeSpec&) const = default;
};

/// Occupation numbers k_x^{(i)} over sites 1..L and signed species labels.
class ParticleConfig {
public:
    ParticleConfig() = default;
    explicit ParticleConfig(LatticeSpec spec);  // empty counts

    const LatticeSpec& spec() const { return spec_; }
    int count(int site, int species) const;
    void set_count(int site, int species, int value);
    void add(int site, int species, int delta);

    int site_total(int site) const;
    /// Number of particles of species i or -i over the whole lattice
    /// (mirror site counted half, matching the space constraints).
    void validate() const;

    std::vector<int> flat() const;  // canonical key
    std::string to_string() const;  // site-major, species-sorted

    bool operator==(const ParticleConfig&) const = default;
    auto operator<=>(const ParticleConfig&) const = default;

private:
    int species_index(int species) const;
    LatticeSpec spec_;
    std::vector<std::vector<int>> counts_;  // [site][species index]
};

/// All configurations of the space described by spec (independent combinatorial
/// enumeration; used as the oracle against the theta bijections).
std::vector<ParticleConfig> enumerate_space(const LatticeSpec& spec,
                                            std::size_t cap = kEnumerationCap);

/// Fine lattice spec (unit sites, unit blocks) for the given group.
LatticeSpec fine_spec(CoxeterType t);

/// theta_1(w): a particle of species w^{-1}(x) at site x.
ParticleConfig theta1(const SignedPermutation& w);
/// theta_2(w): a particle of species w(x) at site x; theta_2(w) = theta_1(w^{-1}).
ParticleConfig theta2(const SignedPermutation& w);

/// Color-blind projection Pi_N. zero_block merges the +-first-block to species 0
/// (the partitions of the type-BC commutative-diagram cases with s_0 in H).
ParticleConfig project_colors(const ParticleConfig& fine, const std::vector<int>& blocks,
                              bool zero_block = false);

/// Site-fusing projection Phi_m. mirror doubles site 1 into (j,-j) pairs
/// (the cases with s_0 in H').
ParticleConfig fuse_sites(const ParticleConfig& c, const std::vector<int>& caps,
                          bool mirror = false);

enum class ThetaVariant { One, Two };

/// Target space of the double-coset bijection for the given parabolic pair.
LatticeSpec dcoset_space(const ParabolicSpec& hp, const ParabolicSpec& h);

/// theta_1'' (variant One, x in D_{H',H}) or theta_2'' (variant Two, x in D_{H,H'}).
ParticleConfig dcoset_to_config(const SignedPermutation& x, const ParabolicSpec& hp,
                                const ParabolicSpec& h, ThetaVariant variant);

/// Two-sided inverse of dcoset_to_config.
SignedPermutation config_to_dcoset(const ParticleConfig& c, const ParabolicSpec& hp,
                                   const ParabolicSpec& h, ThetaVariant variant);

}  // namespace coxasep
