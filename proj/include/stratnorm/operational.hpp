#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stratnorm/rng.hpp"
#include "stratnorm/strategy.hpp"

namespace stratnorm {

/// A channel by its Choi matrix on (out_factors, in_factors), with the Kraus
/// factors cached when known (random generation keeps its isometry; otherwise
/// they are recovered by eigendecomposition on first use).
struct RoundChannel {
    LabeledOperator choi;
    std::vector<std::string> in_labels;   // ordered, most significant first
    std::vector<std::string> out_labels;
    mutable std::vector<ComplexMatrix> kraus;  // lazily filled

    std::size_t in_dim() const;
    std::size_t out_dim() const;
    const std::vector<ComplexMatrix>& kraus_ops() const;

    /// PSD defect of the Choi and trace-preservation defect.
    double cp_residual() const;
    double tp_residual() const;
};

/// Channels Phi_1..Phi_r with memory spaces Z_1..Z_r.
struct OperationalStrategy {
    InteractionShape shape;
    std::vector<std::size_t> memory_dims;  // Z_1..Z_r
    std::vector<RoundChannel> round_maps;

    static std::string z_label(std::size_t i) { return "Z" + std::to_string(i); }
};

/// Initial state rho_0 on X_1 (x) W_0, channels Psi_1..Psi_r, memories W_0..W_r.
struct OperationalCoStrategy {
    InteractionShape shape;
    std::vector<std::size_t> memory_dims;  // W_0..W_r
    LabeledOperator initial_state;
    std::vector<RoundChannel> round_maps;

    static std::string w_label(std::size_t i) { return "W" + std::to_string(i); }
};

/// CP/TP defects of every round map (and the initial state for co-strategies).
std::vector<ConstraintResidual> operational_residuals(const OperationalStrategy& os);
std::vector<ConstraintResidual> operational_residuals(const OperationalCoStrategy& oc);

void require_valid(const OperationalStrategy& os, double tol = 1e-9);
void require_valid(const OperationalCoStrategy& oc, double tol = 1e-9);

/// Applies a channel to the named factors of a state, leaving the rest alone.
LabeledOperator apply_channel(const LabeledOperator& state, const RoundChannel& ch,
                              const FactorList& out_factors);

StrategyRep operational_to_choi(const OperationalStrategy& os);
StrategyRep operational_to_choi(const OperationalCoStrategy& oc);

/// Measurement on the final memory space turns the network into a measuring
/// (co-)strategy, one Choi operator per outcome.
MeasuringStrategy operational_to_choi_measuring(const OperationalStrategy& os,
                                                const std::map<std::string, ComplexMatrix>& meas);
MeasuringStrategy operational_to_choi_measuring(const OperationalCoStrategy& oc,
                                                const std::map<std::string, ComplexMatrix>& meas);

/// Evolves rho_0 through all rounds and measures both final memories.
std::map<std::pair<std::string, std::string>, double> simulate_interaction(
    const OperationalStrategy& os, const OperationalCoStrategy& oc,
    const std::map<std::string, ComplexMatrix>& s_meas,
    const std::map<std::string, ComplexMatrix>& t_meas);

OperationalStrategy random_strategy(const InteractionShape& shape, std::uint64_t seed);
OperationalCoStrategy random_costrategy(const InteractionShape& shape, std::uint64_t seed);

/// Two-outcome projective measurement {P, I-P} with seeded rank, labels "0"/"1".
std::map<std::string, ComplexMatrix> random_binary_measurement(std::size_t dim, Rng& rng);

/// Random measuring (co-)strategy: random network plus a random binary
/// measurement on the final memory, converted to Choi form.
MeasuringStrategy random_measuring_strategy(const InteractionShape& shape, std::uint64_t seed);
MeasuringStrategy random_measuring_costrategy(const InteractionShape& shape, std::uint64_t seed);

}  // namespace stratnorm
