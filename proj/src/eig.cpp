#include "stratnorm/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stratnorm {

namespace {

double offdiag_mass(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace

EigResult herm_eig(const ComplexMatrix& h) {
    if (!h.square()) throw std::invalid_argument("herm_eig: matrix must be square");
    if (!h.is_hermitian(1e-12))
        throw std::invalid_argument("herm_eig: input is not Hermitian within tolerance");

    const std::size_t n = h.rows();
    ComplexMatrix a = h;
    a.hermitize();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double fnorm = a.frobenius_norm();
    const double target = 1e-14 * fnorm;

    for (int sweep = 0; sweep < 100 && n > 1; ++sweep) {
        if (offdiag_mass(a) <= target) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-300) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const cplx phase = apq / mag;

                const double tau = (aqq - app) / (2.0 * mag);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx spq = s * phase;          // U[p][q]
                const cplx sqp = -s * std::conj(phase);  // U[q][p]

                // A <- U^dagger A U with U = I except the (p,q) plane.
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * c + akq * sqp;
                    a(k, q) = akp * spq + akq * c;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(sqp) * aqk;
                    a(q, k) = std::conj(spq) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * c + vkq * sqp;
                    v(k, q) = vkp * spq + vkq * c;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    EigResult r;
    r.values.resize(n);
    r.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        r.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
    }
    return r;
}

EigResult herm_eig(const LabeledOperator& h) { return herm_eig(h.matrix()); }

double trace_norm(const ComplexMatrix& h) {
    const auto e = herm_eig(h);
    double s = 0.0;
    for (double v : e.values) s += std::abs(v);
    return s;
}

double operator_norm(const ComplexMatrix& h) {
    if (h.rows() == 0) return 0.0;
    const auto e = herm_eig(h);
    double m = 0.0;
    for (double v : e.values) m = std::max(m, std::abs(v));
    return m;
}

double trace_norm(const LabeledOperator& h) { return trace_norm(h.matrix()); }
double operator_norm(const LabeledOperator& h) { return operator_norm(h.matrix()); }

double psd_residual(const ComplexMatrix& h) {
    const auto e = herm_eig(h);
    const double lmin = e.values.empty() ? 0.0 : e.values.back();
    return std::max(0.0, -lmin);
}

double psd_residual(const LabeledOperator& h) { return psd_residual(h.matrix()); }

ComplexMatrix herm_apply(const ComplexMatrix& h, const std::function<double(double)>& f) {
    const auto e = herm_eig(h);
    const std::size_t n = h.rows();
    ComplexMatrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double fv = f(e.values[k]);
        if (fv == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = e.vectors(i, k);
            if (vik == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += fv * vik * std::conj(e.vectors(j, k));
        }
    }
    r.hermitize();
    return r;
}

bool cholesky(const ComplexMatrix& a, ComplexMatrix& lower) {
    if (!a.square()) throw std::invalid_argument("cholesky: matrix must be square");
    const std::size_t n = a.rows();
    lower = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(lower(j, k));
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        lower(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= lower(i, k) * std::conj(lower(j, k));
            lower(i, j) = s / ljj;
        }
    }
    return true;
}

ComplexMatrix forward_subst(const ComplexMatrix& lower, const ComplexMatrix& b) {
    const std::size_t n = lower.rows();
    ComplexMatrix x = b;
    for (std::size_t col = 0; col < b.cols(); ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = x(i, col);
            for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * x(k, col);
            x(i, col) = s / lower(i, i);
        }
    }
    return x;
}

ComplexMatrix adjoint_backward_subst(const ComplexMatrix& lower, const ComplexMatrix& b) {
    const std::size_t n = lower.rows();
    ComplexMatrix x = b;
    for (std::size_t col = 0; col < b.cols(); ++col) {
        for (std::size_t ii = n; ii-- > 0;) {
            cplx s = x(ii, col);
            for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(lower(k, ii)) * x(k, col);
            x(ii, col) = s / lower(ii, ii);
        }
    }
    return x;
}

}  // namespace stratnorm
