#pragma once

#include "stratnorm/block_sdp.hpp"
#include "stratnorm/strategy.hpp"

namespace stratnorm {

struct NormOptions {
    double tol_gap = 1e-8;
    double tol_feas = 1e-8;
    int max_iter = 200;
    bool warm_start = true;  // strictly feasible identity-scaled starting points
};

/// Thrown when the interior-point method cannot certify an optimum.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

struct NormResult {
    double value = 0.0;
    MeasuringStrategy optimizer;  // outcomes "0" and "1"
    double cert_p = 0.0;
    StrategyRep certificate;      // opposite role, normalized
    double gap = 0.0;
    SdpSolution::Feas residuals;
    double saturation_residual = 0.0;   // worst ladder residual after saturation
    double objective_drift = 0.0;       // |<T0*-T1*,x> - <T0-T1,x>| style drift
    SolveStatus status = SolveStatus::optimal;
    int iterations = 0;
};

/// Linear-map-form triple whose primal optimum is the strategy r-norm of x.
SdpTriple build_primal_triple(const LabeledOperator& x, const InteractionShape& shape);
/// Mirrored triple whose primal optimum is the dual norm of x.
SdpTriple build_dual_triple(const LabeledOperator& x, const InteractionShape& shape);

/// Strictly feasible starting points for the two triples.
std::pair<BlockOperator, BlockOperator> primal_triple_starts(const LabeledOperator& x,
                                                             const InteractionShape& shape,
                                                             const SdpTriple& t);
std::pair<BlockOperator, BlockOperator> dual_triple_starts(const LabeledOperator& x,
                                                           const InteractionShape& shape,
                                                           const SdpTriple& t);

NormResult strategy_norm(const LabeledOperator& x, const InteractionShape& shape,
                         const NormOptions& opts = {});
NormResult dual_strategy_norm(const LabeledOperator& x, const InteractionShape& shape,
                              const NormOptions& opts = {});

struct CoStrategyBlocks {
    LabeledOperator t0, t1;
    std::vector<LabeledOperator> levels;  // T_(1)..T_(r)
};

struct StrategyBlocks {
    std::vector<LabeledOperator> levels;  // S_(1)..S_(r)
    double p = 0.0;
};

/// Inflates slack-feasible primal blocks to an exact co-strategy ladder;
/// preserves T0 - T1.
CoStrategyBlocks saturate_costrategy(const CoStrategyBlocks& in, const InteractionShape& shape,
                                     double tol = 1e-6);
/// Inflates slack-feasible dual blocks to an exact p-scaled strategy ladder;
/// p is unchanged and levels only grow.
StrategyBlocks saturate_strategy(const StrategyBlocks& in, const InteractionShape& shape,
                                 double tol = 1e-6);

struct StrategyPairBlocks {
    LabeledOperator s0, s1;
    std::vector<LabeledOperator> levels;  // S_(1)..S_(r), top level = ladder level r
};

struct CoStrategyCertBlocks {
    std::vector<LabeledOperator> levels;  // T_(1)..T_(r)
    LabeledOperator top;                  // full-space operator >= +-x
    double p = 0.0;                       // tr of level 1, unchanged
};

/// Mirrored saturations for the dual-norm triple.
StrategyPairBlocks saturate_strategy_pair(const StrategyPairBlocks& in,
                                          const InteractionShape& shape, double tol = 1e-6);
CoStrategyCertBlocks saturate_costrategy_cert(const CoStrategyCertBlocks& in,
                                              const InteractionShape& shape, double tol = 1e-6);

/// Writes x with ||x||_r <= 1 as S0 - S1 for a measuring strategy.
MeasuringStrategy decompose_unit_ball(const LabeledOperator& x, const InteractionShape& shape,
                                      const NormOptions& opts = {});

struct DecomposeError : std::runtime_error {
    double computed_norm;
    DecomposeError(const std::string& what, double norm)
        : std::runtime_error(what), computed_norm(norm) {}
};

struct MaxOutputResult {
    double value = 0.0;
    double cert_p = 0.0;
    StrategyRep certificate;
    NormResult norm;
};

/// Max probability with which a compatible co-strategy forces outcome `a`.
MaxOutputResult max_output_probability(const MeasuringStrategy& ms, const std::string& outcome,
                                       const NormOptions& opts = {});

/// Strategy 1-norm of a Hermitian Choi matrix on (out_dim, in_dim).
NormResult diamond_norm(const ComplexMatrix& choi, std::size_t in_dim, std::size_t out_dim,
                        const NormOptions& opts = {});

}  // namespace stratnorm
