#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stratnorm/eig.hpp"
#include "stratnorm/shape.hpp"

namespace stratnorm {

enum class Role { strategy, costrategy };

Role opposite(Role r);
std::string role_name(Role r);

/// Choi representation of an r-round non-measuring (co-)strategy on the
/// canonical factors Y1..Yr,X1..Xr.
struct StrategyRep {
    LabeledOperator op;
    InteractionShape shape;
    Role role = Role::strategy;
};

/// Indexed family of PSD operators whose sum is a non-measuring (co-)strategy.
struct MeasuringStrategy {
    std::map<std::string, LabeledOperator> outcomes;
    InteractionShape shape;
    Role role = Role::strategy;

    LabeledOperator outcome_sum() const;
};

struct ConstraintResidual {
    std::string name;
    double value = 0.0;
};

/// Recovered ladder levels plus the per-constraint deviations.
struct LadderWitness {
    std::vector<LabeledOperator> levels;  // levels[i-1] = level i
    std::vector<ConstraintResidual> residuals;
    double tolerance = 0.0;
    bool accepted = false;

    double worst_value() const;
    std::string worst_name() const;
    std::string report() const;
};

/// Default acceptance threshold: 1e-8 scaled by operator norm and dimension.
double validation_tolerance(const LabeledOperator& op, double base = 1e-8);

LadderWitness validate_strategy(const LabeledOperator& op, const InteractionShape& shape,
                                std::optional<double> tol = std::nullopt);
LadderWitness validate_costrategy(const LabeledOperator& op, const InteractionShape& shape,
                                  std::optional<double> tol = std::nullopt);
LadderWitness validate_rep(const StrategyRep& rep, std::optional<double> tol = std::nullopt);
LadderWitness validate_measuring(const MeasuringStrategy& ms,
                                 std::optional<double> tol = std::nullopt);

/// I / dim(Y1..Yr) and I / dim(X1..Xr), valid in the respective roles.
StrategyRep trivial_strategy(const InteractionShape& shape);
StrategyRep trivial_costrategy(const InteractionShape& shape);

/// p(a,b) = <S_a, T_b>. Requires matching shapes and opposite roles.
std::map<std::pair<std::string, std::string>, double> interaction_probability(
    const MeasuringStrategy& s, const MeasuringStrategy& t);

}  // namespace stratnorm
