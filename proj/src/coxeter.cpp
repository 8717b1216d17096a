#include "coxasep/coxeter.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>

namespace coxasep {

std::vector<int> CoxeterType::generators() const {
    std::vector<int> gens;
    for (int i = first_generator(); i < rank; ++i) gens.push_back(i);
    return gens;
}

int CoxeterType::coxeter_m(int i, int j) const {
    if (i == j) return 1;
    if (i > j) std::swap(i, j);
    if (family == Family::BC && i == 0) return j == 1 ? 4 : 2;
    return j - i == 1 ? 3 : 2;
}

SignedPermutation::SignedPermutation(CoxeterType type, std::vector<int> window)
    : type_(type), window_(std::move(window)) {
    const int n = type_.rank;
    if (static_cast<int>(window_.size()) != n)
        throw std::invalid_argument("SignedPermutation: window size != rank");
    std::vector<bool> seen(static_cast<size_t>(n), false);
    for (int v : window_) {
        int a = std::abs(v);
        if (a < 1 || a > n || seen[static_cast<size_t>(a) - 1])
            throw std::invalid_argument("SignedPermutation: window is not a (signed) permutation");
        if (v < 0 && type_.family == Family::A)
            throw std::invalid_argument("SignedPermutation: negative entry in type A");
        seen[static_cast<size_t>(a) - 1] = true;
    }
}

SignedPermutation SignedPermutation::identity(CoxeterType type) {
    std::vector<int> w(static_cast<size_t>(type.rank));
    std::iota(w.begin(), w.end(), 1);
    return SignedPermutation(type, std::move(w));
}

SignedPermutation SignedPermutation::generator(CoxeterType type, int i) {
    if (i < type.first_generator() || i >= type.rank)
        throw std::invalid_argument("generator index out of range");
    auto w = identity(type);
    std::vector<int> win = w.window();
    if (i == 0) {
        win[0] = -1;
    } else {
        std::swap(win[static_cast<size_t>(i) - 1], win[static_cast<size_t>(i)]);
    }
    return SignedPermutation(type, std::move(win));
}

bool SignedPermutation::is_identity() const {
    for (int i = 1; i <= type_.rank; ++i)
        if (window_[static_cast<size_t>(i) - 1] != i) return false;
    return true;
}

std::string SignedPermutation::to_string() const {
    std::ostringstream os;
    os << (type_.family == Family::A ? "A" : "BC") << ':' << type_.rank << ":[";
    for (size_t i = 0; i < window_.size(); ++i) {
        if (i) os << ',';
        os << window_[i];
    }
    os << ']';
    return os.str();
}

SignedPermutation SignedPermutation::parse(const std::string& text) {
    auto c1 = text.find(':');
    auto c2 = text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::invalid_argument("SignedPermutation::parse: bad format");
    std::string fam = text.substr(0, c1);
    CoxeterType type;
    if (fam == "A")
        type.family = Family::A;
    else if (fam == "BC")
        type.family = Family::BC;
    else
        throw std::invalid_argument("SignedPermutation::parse: unknown family");
    type.rank = std::stoi(text.substr(c1 + 1, c2 - c1 - 1));
    auto lb = text.find('[', c2);
    auto rb = text.find(']', c2);
    if (lb == std::string::npos || rb == std::string::npos)
        throw std::invalid_argument("SignedPermutation::parse: bad window");
    std::vector<int> window;
    std::stringstream ss(text.substr(lb + 1, rb - lb - 1));
    std::string item;
    while (std::getline(ss, item, ',')) window.push_back(std::stoi(item));
    return SignedPermutation(type, std::move(window));
}

SignedPermutation multiply(const SignedPermutation& a, const SignedPermutation& b) {
    if (a.type() != b.type())
        throw std::invalid_argument("multiply: mismatched Coxeter types");
    const int n = a.rank();
    std::vector<int> win(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) win[static_cast<size_t>(i) - 1] = a(b(i));
    return SignedPermutation(a.type(), std::move(win));
}

SignedPermutation inverse(const SignedPermutation& w) {
    const int n = w.rank();
    std::vector<int> win(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) {
        int v = w(i);
        if (v > 0)
            win[static_cast<size_t>(v) - 1] = i;
        else
            win[static_cast<size_t>(-v) - 1] = -i;
    }
    return SignedPermutation(w.type(), std::move(win));
}

int length(const SignedPermutation& w) {
    const int n = w.rank();
    if (w.type().family == Family::A) {
        int inv = 0;
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                if (w(i) > w(j)) ++inv;
        return inv;
    }
    // l(w) = |{-N <= i < j <= N : w(i) > w(j)}| / 2 + |{i >= 1 : w(i) < 0}| / 2
    std::vector<int> seq;
    seq.reserve(static_cast<size_t>(2 * n));
    for (int i = -n; i <= n; ++i) {
        if (i == 0) continue;
        seq.push_back(w(i));
    }
    int inv = 0;
    for (size_t i = 0; i < seq.size(); ++i)
        for (size_t j = i + 1; j < seq.size(); ++j)
            if (seq[i] > seq[j]) ++inv;
    int neg = 0;
    for (int i = 1; i <= n; ++i)
        if (w(i) < 0) ++neg;
    return (inv + neg) / 2;
}

std::vector<int> reduced_word(const SignedPermutation& w) {
    std::vector<int> word;
    SignedPermutation cur = w;
    int len = length(cur);
    while (len > 0) {
        bool moved = false;
        for (int i : cur.type().generators()) {
            auto next = multiply(SignedPermutation::generator(cur.type(), i), cur);
            int nl = length(next);
            if (nl < len) {
                word.push_back(i);
                cur = std::move(next);
                len = nl;
                moved = true;
                break;
            }
        }
        if (!moved) throw std::logic_error("reduced_word: no descent found");
    }
    return word;
}

ParabolicSpec::ParabolicSpec(CoxeterType t, std::vector<int> b, bool s0)
    : ctype(t), blocks(std::move(b)), includes_s0(s0) {
    if (s0 && t.family == Family::A)
        throw std::invalid_argument("ParabolicSpec: s_0 requires type BC");
    int sum = std::accumulate(blocks.begin(), blocks.end(), 0);
    if (sum != t.rank) throw std::invalid_argument("ParabolicSpec: blocks must sum to rank");
    for (int x : blocks)
        if (x <= 0) throw std::invalid_argument("ParabolicSpec: blocks must be positive");
}

std::vector<int> ParabolicSpec::generators() const {
    std::vector<int> gens;
    if (includes_s0) gens.push_back(0);
    int pos = 0;
    for (int b : blocks) {
        for (int i = pos + 1; i < pos + b; ++i) gens.push_back(i);
        pos += b;
    }
    return gens;
}

ParabolicSpec ParabolicSpec::trivial(CoxeterType t) {
    return ParabolicSpec(t, std::vector<int>(static_cast<size_t>(t.rank), 1), false);
}

ParabolicSpec ParabolicSpec::full(CoxeterType t) {
    return ParabolicSpec(t, {t.rank}, t.family == Family::BC);
}

std::size_t group_order(CoxeterType type) {
    std::size_t order = 1;
    for (int i = 2; i <= type.rank; ++i) order *= static_cast<std::size_t>(i);
    if (type.family == Family::BC)
        for (int i = 0; i < type.rank; ++i) order *= 2;
    return order;
}

std::vector<SignedPermutation> enumerate_group(CoxeterType type, std::size_t cap) {
    if (group_order(type) > cap)
        throw std::length_error("enumerate_group: order exceeds enumeration cap");
    const int n = type.rank;
    std::vector<int> base(static_cast<size_t>(n));
    std::iota(base.begin(), base.end(), 1);
    std::vector<SignedPermutation> out;
    out.reserve(group_order(type));
    do {
        if (type.family == Family::A) {
            out.emplace_back(type, base);
        } else {
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                std::vector<int> win = base;
                for (int i = 0; i < n; ++i)
                    if (mask & (1u << i)) win[static_cast<size_t>(i)] = -win[static_cast<size_t>(i)];
                out.emplace_back(type, std::move(win));
            }
        }
    } while (std::next_permutation(base.begin(), base.end()));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<SignedPermutation> enumerate_parabolic(const ParabolicSpec& h, std::size_t cap) {
    std::set<SignedPermutation> seen;
    std::vector<SignedPermutation> queue{SignedPermutation::identity(h.ctype)};
    seen.insert(queue.front());
    auto gens = h.generators();
    for (size_t head = 0; head < queue.size(); ++head) {
        auto cur = queue[head];
        for (int i : gens) {
            auto next = multiply(cur, SignedPermutation::generator(h.ctype, i));
            if (seen.insert(next).second) {
                if (seen.size() > cap)
                    throw std::length_error("enumerate_parabolic: cap exceeded");
                queue.push_back(std::move(next));
            }
        }
    }
    return {seen.begin(), seen.end()};
}

SignedPermutation min_coset_rep(const SignedPermutation& w, const ParabolicSpec& h,
                                Side side) {
    SignedPermutation cur = w;
    int len = length(cur);
    auto gens = h.generators();
    bool moved = true;
    while (moved) {
        moved = false;
        for (int i : gens) {
            auto s = SignedPermutation::generator(cur.type(), i);
            auto next = side == Side::Right ? multiply(cur, s) : multiply(s, cur);
            int nl = length(next);
            if (nl < len) {
                cur = std::move(next);
                len = nl;
                moved = true;
            }
        }
    }
    return cur;
}

SignedPermutation double_coset_rep(const SignedPermutation& w, const ParabolicSpec& hp,
                                   const ParabolicSpec& h) {
    SignedPermutation cur = w;
    int len = length(cur);
    bool moved = true;
    while (moved) {
        moved = false;
        for (int i : hp.generators()) {
            auto next = multiply(SignedPermutation::generator(cur.type(), i), cur);
            int nl = length(next);
            if (nl < len) {
                cur = std::move(next);
                len = nl;
                moved = true;
            }
        }
        for (int i : h.generators()) {
            auto next = multiply(cur, SignedPermutation::generator(cur.type(), i));
            int nl = length(next);
            if (nl < len) {
                cur = std::move(next);
                len = nl;
                moved = true;
            }
        }
    }
    return cur;
}

std::vector<SignedPermutation> enumerate_dcoset_reps(const ParabolicSpec& hp,
                                                     const ParabolicSpec& h,
                                                     std::size_t cap) {
    if (hp.ctype != h.ctype)
        throw std::invalid_argument("enumerate_dcoset_reps: mismatched types");
    auto all = enumerate_group(h.ctype, cap);
    std::vector<SignedPermutation> reps;
    for (const auto& w : all) {
        int len = length(w);
        bool minimal = true;
        for (int i : hp.generators()) {
            if (length(multiply(SignedPermutation::generator(w.type(), i), w)) < len) {
                minimal = false;
                break;
            }
        }
        if (!minimal) continue;
        for (int i : h.generators()) {
            if (length(multiply(w, SignedPermutation::generator(w.type(), i))) < len) {
                minimal = false;
                break;
            }
        }
        if (minimal) reps.push_back(w);
    }
    return reps;
}

QSeries::QSeries(std::vector<long long> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

long long QSeries::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return 0;
    return coeffs_[static_cast<size_t>(k)];
}

void QSeries::add_term(int k, long long c) {
    if (k >= static_cast<int>(coeffs_.size())) coeffs_.resize(static_cast<size_t>(k) + 1, 0);
    coeffs_[static_cast<size_t>(k)] += c;
}

QSeries QSeries::operator*(const QSeries& other) const {
    if (coeffs_.empty() || other.coeffs_.empty()) return QSeries();
    std::vector<long long> out(coeffs_.size() + other.coeffs_.size() - 1, 0);
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < other.coeffs_.size(); ++j)
            out[i + j] += coeffs_[i] * other.coeffs_[j];
    return QSeries(std::move(out));
}

std::string QSeries::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (k == 0 || coeffs_[k] != 1) os << coeffs_[k];
        if (k >= 1) {
            os << 'q';
            if (k >= 2) os << '^' << k;
        }
    }
    return os.str();
}

QSeries poincare_series(const std::vector<SignedPermutation>& set) {
    QSeries out;
    for (const auto& w : set) out.add_term(length(w));
    return out;
}

QSeries q_integer_series(int m) {
    return QSeries(std::vector<long long>(static_cast<size_t>(m), 1));
}

QSeries group_poincare_product(CoxeterType type) {
    QSeries out({1});
    for (int i = 1; i <= (type.family == Family::A ? type.rank - 1 : type.rank); ++i) {
        int exponent = type.family == Family::A ? i : 2 * i - 1;
        out = out * q_integer_series(exponent + 1);
    }
    return out;
}

}  // namespace coxasep
