#include "stratnorm/complex_matrix.hpp"

#include <cmath>

namespace stratnorm {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows_ * cols_)
        throw std::invalid_argument("ComplexMatrix: entry count does not match rows*cols");
    if (!all_finite())
        throw std::invalid_argument("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("ComplexMatrix: shape mismatch in +");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("ComplexMatrix: shape mismatch in -");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
    if (cols_ != o.rows_)
        throw std::invalid_argument("ComplexMatrix: shape mismatch in *");
    ComplexMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const cplx aik = a_[i * cols_ + k];
            if (aik == cplx(0.0, 0.0)) continue;
            const cplx* brow = &o.a_[k * o.cols_];
            cplx* rrow = &r.a_[i * o.cols_];
            for (std::size_t j = 0; j < o.cols_; ++j) rrow[j] += aik * brow[j];
        }
    }
    return r;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = std::conj(a_[k]);
    return r;
}

cplx ComplexMatrix::trace() const {
    if (!square()) throw std::invalid_argument("ComplexMatrix: trace of non-square matrix");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
}

double ComplexMatrix::hermiticity_defect() const {
    if (!square()) return max_abs();
    double d = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
}

bool ComplexMatrix::is_hermitian(double rel_tol) const {
    if (!square()) return false;
    const double scale = max_abs();
    return hermiticity_defect() <= rel_tol * std::max(scale, 1e-300);
}

void ComplexMatrix::hermitize() {
    if (!square()) throw std::invalid_argument("ComplexMatrix: hermitize of non-square matrix");
    for (std::size_t i = 0; i < rows_; ++i) {
        (*this)(i, i) = cplx((*this)(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < cols_; ++j) {
            const cplx v = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
            (*this)(i, j) = v;
            (*this)(j, i) = std::conj(v);
        }
    }
}

bool ComplexMatrix::all_finite() const {
    for (const auto& v : a_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

}  // namespace stratnorm
