#include "coxasep/particle.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <sstream>

namespace coxasep {

bool flavor_has_zero(Flavor f) { return f == Flavor::Zero || f == Flavor::MirrorZero; }
bool flavor_has_mirror(Flavor f) { return f == Flavor::Mirror || f == Flavor::MirrorZero; }

LatticeSpec::LatticeSpec(CoxeterType t, std::vector<int> caps, std::vector<int> blocks,
                         Flavor fl)
    : ctype(t), site_caps(std::move(caps)), species_blocks(std::move(blocks)), flavor(fl) {
    if (ctype.family == Family::A && flavor != Flavor::Plain)
        throw std::invalid_argument("LatticeSpec: zero/mirror flavors require type BC");
    int sm = std::accumulate(site_caps.begin(), site_caps.end(), 0);
    int sn = std::accumulate(species_blocks.begin(), species_blocks.end(), 0);
    if (sm != sn) throw std::invalid_argument("LatticeSpec: sum m_x != sum N_i");
    if (sm != ctype.rank) throw std::invalid_argument("LatticeSpec: total != rank");
    for (int v : site_caps)
        if (v <= 0) throw std::invalid_argument("LatticeSpec: site capacities must be positive");
    for (int v : species_blocks)
        if (v <= 0) throw std::invalid_argument("LatticeSpec: species blocks must be positive");
}

int LatticeSpec::total() const {
    return std::accumulate(site_caps.begin(), site_caps.end(), 0);
}

std::vector<int> LatticeSpec::species_labels() const {
    const int n = num_blocks();
    std::vector<int> labels;
    if (ctype.family == Family::A) {
        for (int i = 1; i <= n; ++i) labels.push_back(i);
    } else if (flavor_has_zero(flavor)) {
        for (int i = -(n - 1); i <= n - 1; ++i) labels.push_back(i);
    } else {
        for (int i = -n; i <= n; ++i)
            if (i != 0) labels.push_back(i);
    }
    return labels;
}

int LatticeSpec::effective_cap(int site) const {
    int cap = site_caps[static_cast<size_t>(site) - 1];
    if (flavor_has_mirror(flavor) && site == 1) cap *= 2;
    return cap;
}

ParticleConfig::ParticleConfig(LatticeSpec spec) : spec_(std::move(spec)) {
    counts_.assign(static_cast<size_t>(spec_.num_sites()),
                   std::vector<int>(spec_.species_labels().size(), 0));
}

int ParticleConfig::species_index(int species) const {
    const int n = spec_.num_blocks();
    if (spec_.ctype.family == Family::A) {
        if (species < 1 || species > n) throw std::out_of_range("species out of range");
        return species - 1;
    }
    if (flavor_has_zero(spec_.flavor)) {
        if (std::abs(species) > n - 1) throw std::out_of_range("species out of range");
        return species + n - 1;
    }
    if (species == 0 || std::abs(species) > n) throw std::out_of_range("species out of range");
    return species < 0 ? species + n : n + species - 1;
}

int ParticleConfig::count(int site, int species) const {
    return counts_[static_cast<size_t>(site) - 1][static_cast<size_t>(species_index(species))];
}

void ParticleConfig::set_count(int site, int species, int value) {
    counts_[static_cast<size_t>(site) - 1][static_cast<size_t>(species_index(species))] = value;
}

void ParticleConfig::add(int site, int species, int delta) {
    counts_[static_cast<size_t>(site) - 1][static_cast<size_t>(species_index(species))] += delta;
}

int ParticleConfig::site_total(int site) const {
    const auto& row = counts_[static_cast<size_t>(site) - 1];
    return std::accumulate(row.begin(), row.end(), 0);
}

void ParticleConfig::validate() const {
    const auto& spec = spec_;
    const int L = spec.num_sites();
    const int n = spec.num_blocks();
    const bool zero = flavor_has_zero(spec.flavor);
    const bool mirror = flavor_has_mirror(spec.flavor);

    for (int x = 1; x <= L; ++x) {
        if (site_total(x) != spec.effective_cap(x))
            throw std::domain_error("ParticleConfig: site occupancy != capacity");
        for (int v : counts_[static_cast<size_t>(x) - 1])
            if (v < 0) throw std::domain_error("ParticleConfig: negative count");
    }
    if (mirror) {
        for (int s : spec.species_labels())
            if (s > 0 && count(1, s) != count(1, -s))
                throw std::domain_error("ParticleConfig: mirror site is not sign-paired");
        if (zero && count(1, 0) % 2 != 0)
            throw std::domain_error("ParticleConfig: mirror site species-0 count must be even");
    }
    // species-block totals, mirror site counted half
    auto block_total = [&](int i) {  // particles of species i or -i
        int tot2 = 0;  // twice the total, to keep integers with the mirror halving
        for (int x = 1; x <= L; ++x) {
            int c = count(x, i) + (i != 0 && spec.ctype.family == Family::BC ? count(x, -i) : 0);
            tot2 += (mirror && x == 1) ? c : 2 * c;
        }
        return tot2;
    };
    if (zero) {
        if (block_total(0) != 2 * spec.species_blocks[0])
            throw std::domain_error("ParticleConfig: species-0 total != N_1");
        for (int i = 1; i <= n - 1; ++i)
            if (block_total(i) != 2 * spec.species_blocks[static_cast<size_t>(i)])
                throw std::domain_error("ParticleConfig: species total != N_{i+1}");
    } else {
        for (int i = 1; i <= n; ++i)
            if (block_total(i) != 2 * spec.species_blocks[static_cast<size_t>(i) - 1])
                throw std::domain_error("ParticleConfig: species total != N_i");
    }
}

std::vector<int> ParticleConfig::flat() const {
    std::vector<int> out;
    for (const auto& row : counts_) out.insert(out.end(), row.begin(), row.end());
    return out;
}

std::string ParticleConfig::to_string() const {
    std::ostringstream os;
    auto labels = spec_.species_labels();
    for (int x = 1; x <= spec_.num_sites(); ++x) {
        if (x > 1) os << '|';
        bool first = true;
        for (int s : labels)
            for (int c = 0; c < count(x, s); ++c) {
                if (!first) os << ',';
                first = false;
                os << s;
            }
    }
    return os.str();
}

std::vector<ParticleConfig> enumerate_space(const LatticeSpec& spec, std::size_t cap) {
    const int L = spec.num_sites();
    const bool zero = flavor_has_zero(spec.flavor);
    const bool mirror = flavor_has_mirror(spec.flavor);
    // remaining per-block particle budgets
    std::vector<int> rem(spec.species_blocks.begin(), spec.species_blocks.end());
    std::vector<ParticleConfig> out;
    ParticleConfig work(spec);

    // block of a species label (0-based)
    auto block_of = [&](int s) { return zero ? std::abs(s) : std::abs(s) - 1; };
    auto labels = spec.species_labels();

    std::function<void(int)> fill_site = [&](int x) {
        if (x > L) {
            if (std::all_of(rem.begin(), rem.end(), [](int r) { return r == 0; })) {
                out.push_back(work);
                if (out.size() > cap) throw std::length_error("enumerate_space: cap exceeded");
            }
            return;
        }
        const bool pair_site = mirror && x == 1;
        const int slots = spec.site_caps[static_cast<size_t>(x) - 1];
        // choose per-label counts (pair labels s >= 0 resp. s >= 1 on the mirror site)
        std::vector<int> usable;
        for (int s : labels)
            if (!pair_site || s >= (zero ? 0 : 1)) usable.push_back(s);
        std::function<void(size_t, int)> choose = [&](size_t li, int left) {
            if (li == usable.size()) {
                if (left == 0) fill_site(x + 1);
                return;
            }
            int s = usable[li];
            int most = std::min(left, rem[static_cast<size_t>(block_of(s))]);
            for (int k = 0; k <= most; ++k) {
                rem[static_cast<size_t>(block_of(s))] -= k;
                if (pair_site) {
                    work.add(x, s, k);
                    work.add(x, -s, k);  // s == 0 doubles the zero count
                } else {
                    work.add(x, s, k);
                }
                choose(li + 1, left - k);
                if (pair_site) {
                    work.add(x, s, -k);
                    work.add(x, -s, -k);
                } else {
                    work.add(x, s, -k);
                }
                rem[static_cast<size_t>(block_of(s))] += k;
            }
        };
        choose(0, slots);
    };
    fill_site(1);
    std::sort(out.begin(), out.end());
    return out;
}

LatticeSpec fine_spec(CoxeterType t) {
    std::vector<int> ones(static_cast<size_t>(t.rank), 1);
    return LatticeSpec(t, ones, ones, Flavor::Plain);
}

ParticleConfig theta1(const SignedPermutation& w) {
    ParticleConfig c(fine_spec(w.type()));
    auto winv = inverse(w);
    for (int x = 1; x <= w.rank(); ++x) c.add(x, winv(x), 1);
    return c;
}

ParticleConfig theta2(const SignedPermutation& w) {
    ParticleConfig c(fine_spec(w.type()));
    for (int x = 1; x <= w.rank(); ++x) c.add(x, w(x), 1);
    return c;
}

namespace {

// projected species of fine species v under the block partition
int project_species(int v, const std::vector<int>& blocks, bool zero_block, Family family) {
    int a = std::abs(v);
    int cum = 0;
    for (size_t i = 0; i < blocks.size(); ++i) {
        cum += blocks[i];
        if (a <= cum) {
            int idx = static_cast<int>(i) + 1;
            if (family == Family::A) return idx;
            if (zero_block) return i == 0 ? 0 : (v > 0 ? idx - 1 : -(idx - 1));
            return v > 0 ? idx : -idx;
        }
    }
    throw std::out_of_range("project_species: species outside partition");
}

}  // namespace

ParticleConfig project_colors(const ParticleConfig& fine, const std::vector<int>& blocks,
                              bool zero_block) {
    const auto& fs = fine.spec();
    if (fs.num_blocks() != fs.total())
        throw std::invalid_argument("project_colors: input must carry fine species");
    if (std::accumulate(blocks.begin(), blocks.end(), 0) != fs.total())
        throw std::invalid_argument("project_colors: blocks incompatible with species range");
    if (zero_block && fs.ctype.family == Family::A)
        throw std::invalid_argument("project_colors: zero block requires type BC");
    Flavor fl = zero_block ? Flavor::Zero : Flavor::Plain;
    LatticeSpec out_spec(fs.ctype, fs.site_caps, blocks, fl);
    ParticleConfig out(out_spec);
    for (int x = 1; x <= fs.num_sites(); ++x)
        for (int v : fs.species_labels())
            if (int k = fine.count(x, v); k > 0)
                out.add(x, project_species(v, blocks, zero_block, fs.ctype.family), k);
    return out;
}

ParticleConfig fuse_sites(const ParticleConfig& c, const std::vector<int>& caps,
                          bool mirror) {
    const auto& cs = c.spec();
    if (cs.num_sites() != cs.total() ||
        !std::all_of(cs.site_caps.begin(), cs.site_caps.end(), [](int m) { return m == 1; }))
        throw std::invalid_argument("fuse_sites: input must live on unit sites");
    if (std::accumulate(caps.begin(), caps.end(), 0) != cs.total())
        throw std::invalid_argument("fuse_sites: capacities do not sum to source size");
    if (mirror && cs.ctype.family == Family::A)
        throw std::invalid_argument("fuse_sites: mirror requires type BC");
    Flavor fl = flavor_has_zero(cs.flavor)
                    ? (mirror ? Flavor::MirrorZero : Flavor::Zero)
                    : (mirror ? Flavor::Mirror : Flavor::Plain);
    LatticeSpec out_spec(cs.ctype, caps, cs.species_blocks, fl);
    ParticleConfig out(out_spec);
    int fine_site = 1;
    for (size_t x = 0; x < caps.size(); ++x) {
        for (int slot = 0; slot < caps[x]; ++slot, ++fine_site) {
            for (int v : cs.species_labels()) {
                int k = c.count(fine_site, v);
                if (k == 0) continue;
                out.add(static_cast<int>(x) + 1, v, k);
                if (mirror && x == 0) out.add(1, -v, k);  // -0 == 0 doubles species 0
            }
        }
    }
    return out;
}

LatticeSpec dcoset_space(const ParabolicSpec& hp, const ParabolicSpec& h) {
    if (hp.ctype != h.ctype)
        throw std::invalid_argument("dcoset_space: mismatched types");
    Flavor fl = h.includes_s0 ? (hp.includes_s0 ? Flavor::MirrorZero : Flavor::Zero)
                              : (hp.includes_s0 ? Flavor::Mirror : Flavor::Plain);
    return LatticeSpec(hp.ctype, hp.blocks, h.blocks, fl);
}

ParticleConfig dcoset_to_config(const SignedPermutation& x, const ParabolicSpec& hp,
                                const ParabolicSpec& h, ThetaVariant variant) {
    const bool one = variant == ThetaVariant::One;
    auto rep = one ? double_coset_rep(x, hp, h) : double_coset_rep(x, h, hp);
    if (rep != x)
        throw std::domain_error("dcoset_to_config: x is not a distinguished representative");
    ParticleConfig fine = one ? theta1(x) : theta2(x);
    ParticleConfig projected = project_colors(fine, h.blocks, h.includes_s0);
    return fuse_sites(projected, hp.blocks, hp.includes_s0);
}

SignedPermutation config_to_dcoset(const ParticleConfig& c, const ParabolicSpec& hp,
                                   const ParabolicSpec& h, ThetaVariant variant) {
    const auto space = dcoset_space(hp, h);
    if (c.spec() != space)
        throw std::domain_error("config_to_dcoset: configuration is not in the target space");
    c.validate();
    const auto& spec = c.spec();
    const bool zero = flavor_has_zero(spec.flavor);
    const bool mirror = flavor_has_mirror(spec.flavor);
    const int n = spec.num_blocks();

    // next unused magnitude per block
    std::vector<int> next(static_cast<size_t>(n), 0);
    std::vector<int> start(static_cast<size_t>(n), 0);
    for (int i = 1; i < n; ++i)
        start[static_cast<size_t>(i)] =
            start[static_cast<size_t>(i) - 1] + spec.species_blocks[static_cast<size_t>(i) - 1];

    auto fine_value = [&](int s) {
        int block = zero ? std::abs(s) : std::abs(s) - 1;
        int magnitude = start[static_cast<size_t>(block)] + (++next[static_cast<size_t>(block)]);
        return s < 0 ? -magnitude : magnitude;
    };

    std::vector<int> species_word;
    for (int x = 1; x <= spec.num_sites(); ++x) {
        for (int s : spec.species_labels()) {
            int k = c.count(x, s);
            if (mirror && x == 1) {
                if (s < 0) continue;          // positive representative of each pair
                if (s == 0) k /= 2;
            }
            for (int r = 0; r < k; ++r) species_word.push_back(fine_value(s));
        }
    }

    SignedPermutation assignment(spec.ctype, species_word);
    SignedPermutation w = variant == ThetaVariant::One ? inverse(assignment) : assignment;
    SignedPermutation rep = variant == ThetaVariant::One ? double_coset_rep(w, hp, h)
                                                         : double_coset_rep(w, h, hp);
    if (dcoset_to_config(rep, hp, h, variant) != c)
        throw std::domain_error("config_to_dcoset: configuration violates space invariants");
    return rep;
}

}  // namespace coxasep
