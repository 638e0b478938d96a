#pragma once

#include "stratnorm/norms.hpp"
#include "stratnorm/operational.hpp"

namespace stratnorm {

/// Comparison between an independent oracle and the SDP engine.
struct OracleReport {
    std::string quantity;
    double oracle_value = 0.0;
    double engine_value = 0.0;
    enum class Method { closed_form, sampling, exhaustive } method = Method::closed_form;

    double deviation() const { return std::abs(oracle_value - engine_value); }
};

/// Best payoff <T0 - T1, x> over n seeded random measuring co-strategies;
/// a lower bound on the strategy norm by definition.
double sampled_norm_bound(const LabeledOperator& x, const InteractionShape& shape, int n,
                          std::uint64_t seed);
OracleReport sampled_norm_lower_bound(const LabeledOperator& x, const InteractionShape& shape,
                                      int n, std::uint64_t seed,
                                      const NormOptions& opts = {});

/// Closed forms at r=1, dim(Y1)=1: operator norm for the primal norm and
/// trace norm for the dual norm.
std::pair<OracleReport, OracleReport> state_case_oracles(const LabeledOperator& x,
                                                         const NormOptions& opts = {});

/// 2*sqrt(1 - nu^2) with nu the smallest modulus over the numerical range of
/// u0^dagger u1; evaluated from a pure-state grid plus support-function
/// refinement, no shared code with the SDP path.
double unitary_diamond_closed_form(const ComplexMatrix& u0, const ComplexMatrix& u1);
OracleReport unitary_channel_diamond_oracle(const ComplexMatrix& u0, const ComplexMatrix& u1,
                                            const NormOptions& opts = {});

/// J(Phi) for conjugation by u, and the Choi difference of two conjugations.
ComplexMatrix unitary_choi(const ComplexMatrix& u);

}  // namespace stratnorm
