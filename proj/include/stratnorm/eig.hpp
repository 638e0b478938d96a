#pragma once

#include <functional>
#include <vector>

#include "stratnorm/labeled_operator.hpp"

namespace stratnorm {

struct EigResult {
    std::vector<double> values;  // descending
    ComplexMatrix vectors;       // columns, unitary
};

/// Cyclic Jacobi for complex Hermitian matrices. Sweeps until the
/// off-diagonal Frobenius mass drops below 1e-14 * ||h||_F, capped at
/// 100 sweeps. Rejects non-Hermitian input (1e-12 relative).
EigResult herm_eig(const ComplexMatrix& h);
EigResult herm_eig(const LabeledOperator& h);

double trace_norm(const ComplexMatrix& h);
double operator_norm(const ComplexMatrix& h);
double trace_norm(const LabeledOperator& h);
double operator_norm(const LabeledOperator& h);

/// max(0, -lambda_min(h)); zero iff h is positive semidefinite.
double psd_residual(const ComplexMatrix& h);
double psd_residual(const LabeledOperator& h);

/// V f(Lambda) V^dagger for Hermitian input.
ComplexMatrix herm_apply(const ComplexMatrix& h, const std::function<double(double)>& f);

/// Lower-triangular Cholesky factor; returns false on a non-PD pivot.
bool cholesky(const ComplexMatrix& a, ComplexMatrix& lower);
/// Solve L x = b (forward) or L^dagger x = b (backward) column-wise.
ComplexMatrix forward_subst(const ComplexMatrix& lower, const ComplexMatrix& b);
ComplexMatrix adjoint_backward_subst(const ComplexMatrix& lower, const ComplexMatrix& b);

}  // namespace stratnorm
