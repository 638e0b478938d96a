#include "stratnorm/strategy.hpp"

#include <cmath>
#include <sstream>

namespace stratnorm {

Role opposite(Role r) { return r == Role::strategy ? Role::costrategy : Role::strategy; }

std::string role_name(Role r) { return r == Role::strategy ? "strategy" : "costrategy"; }

LabeledOperator MeasuringStrategy::outcome_sum() const {
    if (outcomes.empty()) throw std::invalid_argument("MeasuringStrategy: no outcomes");
    auto it = outcomes.begin();
    LabeledOperator s = it->second;
    for (++it; it != outcomes.end(); ++it) s = s + it->second;
    return s;
}

double LadderWitness::worst_value() const {
    double w = 0.0;
    for (const auto& r : residuals) w = std::max(w, r.value);
    return w;
}

std::string LadderWitness::worst_name() const {
    double w = -1.0;
    std::string name;
    for (const auto& r : residuals)
        if (r.value > w) {
            w = r.value;
            name = r.name;
        }
    return name;
}

std::string LadderWitness::report() const {
    std::ostringstream os;
    os << (accepted ? "accepted" : "rejected") << " (tolerance " << tolerance << ")\n";
    for (const auto& r : residuals) os << "  " << r.name << ": " << r.value << "\n";
    return os.str();
}

double validation_tolerance(const LabeledOperator& op, double base) {
    return base * (1.0 + operator_norm(op)) * std::sqrt(static_cast<double>(op.dim()));
}

namespace {

void require_canonical(const LabeledOperator& op, const InteractionShape& shape,
                       const char* what) {
    if (op.factors() != shape.canonical_factors())
        throw std::invalid_argument(std::string(what) +
                                    ": operator is not on the canonical factors of the shape");
}

}  // namespace

LadderWitness validate_strategy(const LabeledOperator& op, const InteractionShape& shape,
                                std::optional<double> tol) {
    require_canonical(op, shape, "validate_strategy");
    const std::size_t r = shape.rounds();
    LadderWitness w;
    w.tolerance = tol.value_or(validation_tolerance(op));
    w.residuals.push_back({"hermiticity", op.matrix().hermiticity_defect()});

    // Recover S_(r)=S and S_(i-1) = tr_{Y_i,X_i}(S_(i)) / dim(X_i).
    std::vector<LabeledOperator> lv(r, op);
    lv[r - 1] = op;
    for (std::size_t i = r; i >= 2; --i) {
        LabeledOperator t = partial_trace(lv[i - 1], InteractionShape::y_label(i));
        t = partial_trace(t, InteractionShape::x_label(i));
        lv[i - 2] = (1.0 / static_cast<double>(shape.in_dim(i))) * t;
    }

    for (std::size_t i = 1; i <= r; ++i)
        w.residuals.push_back({"psd level " + std::to_string(i), psd_residual(lv[i - 1])});

    for (std::size_t i = r; i >= 2; --i) {
        const LabeledOperator lhs = partial_trace(lv[i - 1], InteractionShape::y_label(i));
        const LabeledOperator rhs =
            kron(lv[i - 2], LabeledOperator::identity(
                                FactorList({{InteractionShape::x_label(i), shape.in_dim(i)}})));
        w.residuals.push_back(
            {"ladder level " + std::to_string(i), operator_norm(lhs - rhs)});
    }
    {
        const LabeledOperator bottom = partial_trace(lv[0], InteractionShape::y_label(1));
        const LabeledOperator eye = LabeledOperator::identity(bottom.factors());
        w.residuals.push_back({"ladder level 1", operator_norm(bottom - eye)});
    }

    w.levels = std::move(lv);
    w.accepted = w.worst_value() <= w.tolerance;
    return w;
}

LadderWitness validate_costrategy(const LabeledOperator& op, const InteractionShape& shape,
                                  std::optional<double> tol) {
    require_canonical(op, shape, "validate_costrategy");
    const std::size_t r = shape.rounds();
    LadderWitness w;
    w.tolerance = tol.value_or(validation_tolerance(op));
    w.residuals.push_back({"hermiticity", op.matrix().hermiticity_defect()});

    // Recover T_(r) = tr_{Y_r}(T)/dim(Y_r), then
    // T_(i-1) = tr_{X_i,Y_(i-1)}(T_(i)) / dim(Y_(i-1)).
    std::vector<LabeledOperator> lv;
    lv.resize(r, op);
    lv[r - 1] = (1.0 / static_cast<double>(shape.out_dim(r))) *
                partial_trace(op, InteractionShape::y_label(r));
    for (std::size_t i = r; i >= 2; --i) {
        LabeledOperator t = partial_trace(lv[i - 1], InteractionShape::x_label(i));
        t = partial_trace(t, InteractionShape::y_label(i - 1));
        lv[i - 2] = (1.0 / static_cast<double>(shape.out_dim(i - 1))) * t;
    }

    w.residuals.push_back({"psd full operator", psd_residual(op)});
    for (std::size_t i = 1; i <= r; ++i)
        w.residuals.push_back({"psd level " + std::to_string(i), psd_residual(lv[i - 1])});

    {
        LabeledOperator ext =
            kron(lv[r - 1], LabeledOperator::identity(
                                FactorList({{InteractionShape::y_label(r), shape.out_dim(r)}})));
        ext = permute_factors(ext, shape.canonical_factors().labels());
        w.residuals.push_back({"ladder top", operator_norm(op - ext)});
    }
    for (std::size_t i = r; i >= 2; --i) {
        const LabeledOperator lhs = partial_trace(lv[i - 1], InteractionShape::x_label(i));
        LabeledOperator rhs =
            kron(lv[i - 2], LabeledOperator::identity(FactorList(
                                {{InteractionShape::y_label(i - 1), shape.out_dim(i - 1)}})));
        rhs = permute_factors(rhs, lhs.factors().labels());
        w.residuals.push_back(
            {"ladder level " + std::to_string(i), operator_norm(lhs - rhs)});
    }
    w.residuals.push_back(
        {"ladder level 1 trace", std::abs(lv[0].matrix().trace() - cplx(1.0, 0.0))});

    w.levels = std::move(lv);
    w.accepted = w.worst_value() <= w.tolerance;
    return w;
}

LadderWitness validate_rep(const StrategyRep& rep, std::optional<double> tol) {
    return rep.role == Role::strategy ? validate_strategy(rep.op, rep.shape, tol)
                                      : validate_costrategy(rep.op, rep.shape, tol);
}

LadderWitness validate_measuring(const MeasuringStrategy& ms, std::optional<double> tol) {
    if (ms.outcomes.empty()) throw std::invalid_argument("validate_measuring: no outcomes");
    const FactorList canon = ms.shape.canonical_factors();
    for (const auto& [label, op] : ms.outcomes)
        if (op.factors() != canon)
            throw std::invalid_argument("validate_measuring: outcome '" + label +
                                        "' is not on the canonical factors");

    const LabeledOperator sum = ms.outcome_sum();
    LadderWitness w = ms.role == Role::strategy ? validate_strategy(sum, ms.shape, tol)
                                                : validate_costrategy(sum, ms.shape, tol);
    for (const auto& [label, op] : ms.outcomes)
        w.residuals.push_back({"psd outcome " + label, psd_residual(op)});
    w.accepted = w.worst_value() <= w.tolerance;
    return w;
}

StrategyRep trivial_strategy(const InteractionShape& shape) {
    const FactorList canon = shape.canonical_factors();
    LabeledOperator op =
        (1.0 / static_cast<double>(shape.out_total())) * LabeledOperator::identity(canon);
    return StrategyRep{std::move(op), shape, Role::strategy};
}

StrategyRep trivial_costrategy(const InteractionShape& shape) {
    const FactorList canon = shape.canonical_factors();
    LabeledOperator op =
        (1.0 / static_cast<double>(shape.in_total())) * LabeledOperator::identity(canon);
    return StrategyRep{std::move(op), shape, Role::costrategy};
}

std::map<std::pair<std::string, std::string>, double> interaction_probability(
    const MeasuringStrategy& s, const MeasuringStrategy& t) {
    if (s.shape != t.shape)
        throw std::invalid_argument("interaction_probability: shape mismatch");
    if (s.role == t.role)
        throw std::invalid_argument("interaction_probability: roles must be opposite");
    std::map<std::pair<std::string, std::string>, double> p;
    for (const auto& [a, sa] : s.outcomes)
        for (const auto& [b, tb] : t.outcomes) p[{a, b}] = inner_re(sa, tb);
    return p;
}

}  // namespace stratnorm
