#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace stratnorm {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. The only storage type in the library.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cplx(0.0, 0.0)) {}

    // Construction from explicit entries rejects non-finite values.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t rows, std::size_t cols) { return ComplexMatrix(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<cplx>& entries() const { return a_; }
    std::vector<cplx>& entries() { return a_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }

    ComplexMatrix operator*(const ComplexMatrix& o) const;  // matrix product

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;

    cplx trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    /// max_ij |M - M^dagger| as an absolute deviation.
    double hermiticity_defect() const;
    bool is_hermitian(double rel_tol = 1e-12) const;

    /// Averages M with its adjoint; cheap cleanup after long computations.
    void hermitize();

    bool all_finite() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

}  // namespace stratnorm
