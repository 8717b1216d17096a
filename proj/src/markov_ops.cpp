#include "coxasep/markov_ops.hpp"

#include <algorithm>

namespace coxasep {

GroupVector<Rational> step_coefficients(CoxeterType type, const std::vector<StepSpec>& steps,
                                        StepOrder order, ActionSide side, const Rational& q) {
    GroupVector<Rational> v{{SignedPermutation::identity(type), Rational(1)}};
    std::vector<StepSpec> seq = steps;
    if (order == StepOrder::Reversed) std::reverse(seq.begin(), seq.end());
    for (const auto& step : seq)
        v = side == ActionSide::Left ? left_step(v, step.gen, step.x, q)
                                     : right_step(v, step.gen, step.x, q);
    return v;
}

ColposReport check_colpos(CoxeterType type, const std::vector<StepSpec>& steps,
                          const Rational& q) {
    auto f = step_coefficients(type, steps, StepOrder::Forward, ActionSide::Left, q);
    auto ft = step_coefficients(type, steps, StepOrder::Reversed, ActionSide::Left, q);
    auto gt = step_coefficients(type, steps, StepOrder::Reversed, ActionSide::Right, q);

    auto at = [](const GroupVector<Rational>& v, const SignedPermutation& w) {
        auto it = v.find(w);
        return it == v.end() ? Rational(0) : it->second;
    };

    ColposReport report;
    for (const auto& pi : enumerate_group(type)) {
        Rational expect = at(ft, inverse(pi));
        Rational d1 = abs(at(f, pi) - expect);
        Rational d2 = abs(at(gt, pi) - expect);
        if (d1 != 0) report.colpos_holds = false;
        if (d2 != 0) report.lr_relation_holds = false;
        report.max_discrepancy = std::max(report.max_discrepancy, std::max(d1, d2));
    }
    return report;
}

int classify_associativity(const SignedPermutation& w, int i, int j) {
    auto si = SignedPermutation::generator(w.type(), i);
    auto sj = SignedPermutation::generator(w.type(), j);
    auto siw = multiply(si, w);
    auto wsj = multiply(w, sj);
    auto siwsj = multiply(si, wsj);

    const bool a = length(siw) > length(w);
    const bool b = length(wsj) > length(w);
    const bool c = length(siwsj) > length(wsj);
    const bool d = length(siwsj) > length(siw);

    if (a && b && c && d) return 1;
    if (!a && b && !c && d) return 2;
    if (a && !b && c && !d) return 3;
    if (!a && !b && !c && !d) return 4;
    if (a && b && !c && !d) return 5;
    if (!a && !b && c && d) return 6;
    throw std::logic_error("classify_associativity: sign pattern outside the six cases");
}

AssociativityReport check_associativity(const SignedPermutation& w, int i, int j,
                                        const Rational& x1, const Rational& x2,
                                        const Rational& q) {
    AssociativityReport report;
    report.case_label = classify_associativity(w, i, j);

    GroupVector<Rational> delta{{w, Rational(1)}};
    auto lhs = right_step(left_step(delta, i, x1, q), j, x2, q);
    auto rhs = left_step(right_step(delta, j, x2, q), i, x1, q);
    report.sides_equal = lhs == rhs;

    if (report.case_label >= 5) {
        auto si = SignedPermutation::generator(w.type(), i);
        auto sj = SignedPermutation::generator(w.type(), j);
        report.braid_identity = multiply(si, w) == multiply(w, sj);
        const Rational &x = x1, &y = x2;
        report.scalar_identity =
            (Rational(1) - x) * y + x * (Rational(1) - q * y) ==
            x * (Rational(1) - y) + (Rational(1) - q * x) * y;
    }
    return report;
}

}  // namespace coxasep
