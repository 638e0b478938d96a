#include "stratnorm/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace stratnorm {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 over the pair
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ComplexMatrix orthonormal_columns(ComplexMatrix m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    if (rows < cols) throw std::invalid_argument("orthonormal_columns: rows < cols");
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < cols; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                cplx dot = 0.0;
                for (std::size_t i = 0; i < rows; ++i) dot += std::conj(m(i, k)) * m(i, j);
                for (std::size_t i = 0; i < rows; ++i) m(i, j) -= dot * m(i, k);
            }
            double nrm = 0.0;
            for (std::size_t i = 0; i < rows; ++i) nrm += std::norm(m(i, j));
            nrm = std::sqrt(nrm);
            if (nrm < 1e-12)
                throw std::runtime_error("orthonormal_columns: rank-deficient input");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) /= nrm;
        }
    }
    return m;
}

ComplexMatrix random_isometry(std::size_t out_dim, std::size_t in_dim, Rng& rng) {
    return orthonormal_columns(rng.gaussian_matrix(out_dim, in_dim));
}

ComplexMatrix random_projector(std::size_t dim, std::size_t rank, Rng& rng) {
    if (rank > dim) throw std::invalid_argument("random_projector: rank > dim");
    if (rank == 0) return ComplexMatrix::zero(dim, dim);
    const ComplexMatrix q = random_isometry(dim, rank, rng);
    ComplexMatrix p = q * q.adjoint();
    p.hermitize();
    return p;
}

}  // namespace stratnorm
