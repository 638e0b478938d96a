#include "stratnorm/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace stratnorm {

double sampled_norm_bound(const LabeledOperator& x, const InteractionShape& shape, int n,
                          std::uint64_t seed) {
    double best = 0.0;  // T0 = T1 gives payoff 0, always available
    for (int k = 0; k < n; ++k) {
        const MeasuringStrategy t =
            random_measuring_costrategy(shape, derive_seed(seed, static_cast<std::uint64_t>(k)));
        const double payoff = inner_re(t.outcomes.at("0") - t.outcomes.at("1"), x);
        best = std::max(best, payoff);
    }
    return best;
}

OracleReport sampled_norm_lower_bound(const LabeledOperator& x, const InteractionShape& shape,
                                      int n, std::uint64_t seed, const NormOptions& opts) {
    OracleReport rep;
    rep.quantity = "strategy norm lower bound";
    rep.method = OracleReport::Method::sampling;
    rep.oracle_value = sampled_norm_bound(x, shape, n, seed);
    rep.engine_value = strategy_norm(x, shape, opts).value;
    return rep;
}

std::pair<OracleReport, OracleReport> state_case_oracles(const LabeledOperator& x,
                                                         const NormOptions& opts) {
    if (x.factors().count() != 2)
        throw std::invalid_argument("state_case_oracles: expected factors (Y1, X1)");
    const std::size_t dy = x.factors().at(0).dim;
    const std::size_t dx = x.factors().at(1).dim;
    if (dy != 1)
        throw std::invalid_argument("state_case_oracles: requires dim(Y1) = 1");
    const InteractionShape shape({dx}, {1});

    OracleReport primal, dual;
    primal.quantity = "strategy norm at r=1, trivial output";
    primal.method = OracleReport::Method::closed_form;
    primal.oracle_value = operator_norm(x);
    primal.engine_value = strategy_norm(x, shape, opts).value;

    dual.quantity = "dual strategy norm at r=1, trivial output";
    dual.method = OracleReport::Method::closed_form;
    dual.oracle_value = trace_norm(x);
    dual.engine_value = dual_strategy_norm(x, shape, opts).value;
    return {primal, dual};
}

namespace {

void require_unitary(const ComplexMatrix& u, const char* who) {
    if (!u.square()) throw std::invalid_argument(std::string(who) + ": non-square input");
    const ComplexMatrix g = u.adjoint() * u;
    double defect = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            defect = std::max(defect, std::abs(g(i, j) - (i == j ? cplx(1.0) : cplx(0.0))));
    if (defect > 1e-10)
        throw std::invalid_argument(std::string(who) + ": input is not unitary (defect " +
                                    std::to_string(defect) + ")");
}

// Support value h(theta) = max_psi Re(e^{-i theta} <psi|U|psi>), computed by
// shifted power iteration on the Hermitian part; independent of the Jacobi
// eigensolver used by the engine.
double support_value(const ComplexMatrix& u, double theta) {
    const std::size_t d = u.rows();
    const cplx phase(std::cos(-theta), std::sin(-theta));
    ComplexMatrix h(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            h(i, j) = 0.5 * (phase * u(i, j) + std::conj(phase * u(j, i)));
    const double shift = h.frobenius_norm() + 1.0;
    for (std::size_t i = 0; i < d; ++i) h(i, i) += shift;

    std::vector<cplx> v(d), w(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = cplx(1.0 + 1e-3 * static_cast<double>(i + 1),
                                                    1e-4 * static_cast<double>(i + 1));
    double prev = 0.0;
    for (int it = 0; it < 500; ++it) {
        for (std::size_t i = 0; i < d; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += h(i, j) * v[j];
            w[i] = s;
        }
        double nrm = 0.0;
        for (const auto& c : w) nrm += std::norm(c);
        nrm = std::sqrt(nrm);
        double ray = 0.0;
        for (std::size_t i = 0; i < d; ++i) ray += (std::conj(v[i]) * w[i]).real();
        for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / nrm;
        if (it > 3 && std::abs(ray - prev) <= 1e-15 * (1.0 + std::abs(ray))) {
            prev = ray;
            break;
        }
        prev = ray;
    }
    return prev - shift;
}

}  // namespace

double unitary_diamond_closed_form(const ComplexMatrix& u0, const ComplexMatrix& u1) {
    require_unitary(u0, "unitary_diamond_closed_form");
    require_unitary(u1, "unitary_diamond_closed_form");
    if (u0.rows() != u1.rows())
        throw std::invalid_argument("unitary_diamond_closed_form: dimension mismatch");
    const ComplexMatrix u = u0.adjoint() * u1;
    const std::size_t d = u.rows();

    // Pure-state grid: the sample cloud lies inside the numerical range.
    Rng rng(0x5eedULL);
    double cloud_min = 1e300;
    for (int k = 0; k < 10000; ++k) {
        std::vector<cplx> psi(d);
        double nrm = 0.0;
        for (auto& c : psi) {
            c = rng.gaussian_cplx();
            nrm += std::norm(c);
        }
        nrm = std::sqrt(nrm);
        cplx z = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                z += std::conj(psi[i]) * u(i, j) * psi[j];
        cloud_min = std::min(cloud_min, std::abs(z) / (nrm * nrm));
    }

    // Distance from the origin to the (convex) numerical range equals
    // max_theta(-h(theta)), zero when the origin lies inside.
    const int coarse = 720;
    double best = -1e300;
    double best_theta = 0.0;
    for (int k = 0; k < coarse; ++k) {
        const double theta = 2.0 * M_PI * k / coarse;
        const double val = -support_value(u, theta);
        if (val > best) {
            best = val;
            best_theta = theta;
        }
    }
    double nu = 0.0;
    if (best > 0.0) {
        // golden-section refinement around the coarse maximizer
        const double gr = 0.61803398874989484820;
        double a = best_theta - 2.0 * M_PI / coarse;
        double b = best_theta + 2.0 * M_PI / coarse;
        double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
        double f1 = -support_value(u, c1), f2 = -support_value(u, c2);
        while (b - a > 1e-9) {
            if (f1 < f2) {
                a = c1;
                c1 = c2;
                f1 = f2;
                c2 = a + gr * (b - a);
                f2 = -support_value(u, c2);
            } else {
                b = c2;
                c2 = c1;
                f2 = f1;
                c1 = b - gr * (b - a);
                f1 = -support_value(u, c1);
            }
        }
        nu = std::max(0.0, std::max(best, std::max(f1, f2)));
    }
    nu = std::min(nu, cloud_min);  // the cloud is an upper bound on min |z|
    nu = std::min(nu, 1.0);
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - nu * nu));
}

ComplexMatrix unitary_choi(const ComplexMatrix& u) {
    const std::size_t d = u.rows();
    ComplexMatrix j(d * d, d * d);
    // J = sum_ij (U E_ij U^dagger) (x) E_ij = w w^dagger with w = vec(U).
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t b = 0; b < d; ++b)
                for (std::size_t k = 0; k < d; ++k)
                    j(a * d + i, b * d + k) = u(a, i) * std::conj(u(b, k));
    return j;
}

OracleReport unitary_channel_diamond_oracle(const ComplexMatrix& u0, const ComplexMatrix& u1,
                                            const NormOptions& opts) {
    OracleReport rep;
    rep.quantity = "diamond norm of a unitary channel difference";
    rep.method = OracleReport::Method::exhaustive;
    rep.oracle_value = unitary_diamond_closed_form(u0, u1);
    const ComplexMatrix diff = unitary_choi(u0) - unitary_choi(u1);
    rep.engine_value = diamond_norm(diff, u0.rows(), u0.rows(), opts).value;
    return rep;
}

}  // namespace stratnorm
