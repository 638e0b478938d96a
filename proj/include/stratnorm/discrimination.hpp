#pragma once

#include "stratnorm/norms.hpp"

namespace stratnorm {

/// Convex hull of finitely many validated strategies, all same shape and role.
struct ConvexStrategySet {
    std::vector<StrategyRep> vertices;

    ConvexStrategySet() = default;
    explicit ConvexStrategySet(std::vector<StrategyRep> v);

    const InteractionShape& shape() const { return vertices.front().shape; }
    Role role() const { return vertices.front().role; }
};

struct MinDistanceResult {
    double distance = 0.0;
    std::vector<double> weights_a, weights_b;  // convex weights over each vertex list
    StrategyRep closest_a, closest_b;
    SolveStatus status = SolveStatus::optimal;
    int iterations = 0;
    double gap = 0.0;
};

/// One joint SDP over convex weights and a p-scaled ladder, so the closest
/// pair is a variable; distance is measured in the norm matching the role.
MinDistanceResult min_distance(const ConvexStrategySet& a, const ConvexStrategySet& b,
                               const NormOptions& opts = {});

struct SeparatorResult {
    MeasuringStrategy separator;  // outcomes "0","1", role opposite to the sets
    double distance = 0.0;
    std::vector<double> weights_a, weights_b;
    std::vector<std::vector<double>> margins;  // <T0-T1, A_i - B_j>
    LabeledOperator hyperplane;                // unnormalized H, diagnostics
    double hyperplane_alpha = 0.0;
    bool degenerate = false;
    std::string note;

    double min_margin() const;
};

/// Universal separating measuring co-strategy (measuring strategy for
/// co-strategy sets). Verifies all vertex-pair margins; one tolerance-
/// tightened retry before reporting a degenerate instance.
SeparatorResult separator(const ConvexStrategySet& a, const ConvexStrategySet& b,
                          const NormOptions& opts = {});

/// 1/2 + 1/4 <T0 - T1, s0 - s1>.
double guessing_game(const MeasuringStrategy& sep, const StrategyRep& s0, const StrategyRep& s1);

}  // namespace stratnorm
