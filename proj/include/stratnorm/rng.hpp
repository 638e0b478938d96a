#pragma once

#include <cstdint>
#include <random>

#include "stratnorm/complex_matrix.hpp"

namespace stratnorm {

/// Seeded random stream. Gaussian draws use an explicit Box-Muller over
/// mt19937_64 words so a seed reproduces the same bytes everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in (0, 1].
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double m = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = m * std::sin(a);
        have_spare_ = true;
        return m * std::cos(a);
    }

    cplx gaussian_cplx() {
        const double re = gaussian();
        const double im = gaussian();
        return cplx(re, im);
    }

    std::uint64_t word() { return gen_(); }

    std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

    ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols) {
        ComplexMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = gaussian_cplx();
        return m;
    }

    ComplexMatrix gaussian_hermitian(std::size_t n) {
        ComplexMatrix m = gaussian_matrix(n, n);
        m.hermitize();
        return m;
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Stable stream derivation so independent draws never share a generator.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Columns orthonormalized by modified Gram-Schmidt with one
/// re-orthogonalization pass. Requires rows >= cols.
ComplexMatrix orthonormal_columns(ComplexMatrix m);

/// Seeded Haar-like isometry with out_dim >= in_dim.
ComplexMatrix random_isometry(std::size_t out_dim, std::size_t in_dim, Rng& rng);

/// Seeded projector of the given rank.
ComplexMatrix random_projector(std::size_t dim, std::size_t rank, Rng& rng);

}  // namespace stratnorm
