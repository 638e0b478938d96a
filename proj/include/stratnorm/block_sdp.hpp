#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stratnorm/eig.hpp"

namespace stratnorm {

/// Ordered labeled blocks; a dim-1 block is a scalar.
struct BlockStructure {
    std::vector<std::pair<std::string, std::size_t>> blocks;

    BlockStructure() = default;
    explicit BlockStructure(std::vector<std::pair<std::string, std::size_t>> b);

    std::size_t count() const { return blocks.size(); }
    std::size_t dim(std::size_t k) const { return blocks[k].second; }
    std::size_t index_of(const std::string& label) const;
    std::size_t total_dim() const;   // sum of block dims
    std::size_t hvec_dim() const;    // sum of squared block dims (real params)

    bool operator==(const BlockStructure& o) const { return blocks == o.blocks; }
    bool operator!=(const BlockStructure& o) const { return !(*this == o); }
};

/// Block-diagonal Hermitian operator.
class BlockOperator {
public:
    BlockOperator() = default;
    explicit BlockOperator(BlockStructure s);
    BlockOperator(BlockStructure s, std::vector<ComplexMatrix> blocks);

    static BlockOperator identity(const BlockStructure& s, double scale = 1.0);

    const BlockStructure& structure() const { return s_; }
    std::size_t count() const { return b_.size(); }
    ComplexMatrix& block(std::size_t k) { return b_[k]; }
    const ComplexMatrix& block(std::size_t k) const { return b_[k]; }
    ComplexMatrix& block(const std::string& label) { return b_[s_.index_of(label)]; }
    const ComplexMatrix& block(const std::string& label) const { return b_[s_.index_of(label)]; }

    BlockOperator& operator+=(const BlockOperator& o);
    BlockOperator& operator-=(const BlockOperator& o);
    BlockOperator& operator*=(double c);
    friend BlockOperator operator+(BlockOperator a, const BlockOperator& b) { return a += b; }
    friend BlockOperator operator-(BlockOperator a, const BlockOperator& b) { return a -= b; }
    friend BlockOperator operator*(double c, BlockOperator a) { return a *= c; }

    double inner(const BlockOperator& o) const;  // real part of trace inner product
    double frobenius_norm() const;
    double max_abs() const;
    void hermitize();
    double max_hermiticity_defect() const;

    /// max over blocks of max(0, -lambda_min).
    double psd_residual() const;
    /// max over blocks of max(0, lambda_max) — for (M)_+ checks.
    double positive_part_norm() const;

private:
    BlockStructure s_;
    std::vector<ComplexMatrix> b_;
};

/// Linear-map-form problem (Psi, A, B):
///   primal  max <A,P>  s.t. Psi(P) <= B, P >= 0
///   dual    min <B,Q>  s.t. Psi*(Q) >= A, Q >= 0.
struct SdpTriple {
    BlockStructure primal_structure;  // space of P
    BlockStructure dual_structure;    // space of Q
    BlockOperator A;
    BlockOperator B;
    std::function<BlockOperator(const BlockOperator&)> psi;
    std::function<BlockOperator(const BlockOperator&)> psi_adj;
};

struct SolveOptions {
    double tol_gap = 1e-8;
    double tol_feas = 1e-8;
    int max_iter = 200;
    std::optional<BlockOperator> primal_start;  // strictly feasible P
    std::optional<BlockOperator> dual_start;    // strictly feasible Q
    bool verbose = false;
};

enum class SolveStatus { optimal, max_iter, numerical_failure };

struct IterateRecord {
    double primal_obj, dual_obj, mu, primal_feas, dual_feas;
};

struct SdpSolution {
    BlockOperator primal;  // P
    BlockOperator dual;    // Q
    double primal_value = 0.0, dual_value = 0.0, gap = 0.0;
    struct Feas {
        double primal_psd = 0.0, dual_psd = 0.0;
        double primal_ineq = 0.0;  // ||(Psi(P)-B)_+||_op
        double dual_ineq = 0.0;    // ||(A-Psi*(Q))_+||_op
    } feas_residuals;
    SolveStatus status = SolveStatus::numerical_failure;
    int iterations = 0;
    std::vector<IterateRecord> trace;
    std::string diagnostics;
};

/// Max normalized deviation of <Psi(T),S> - <T,Psi*(S)> over seeded probes.
double check_adjoint(const SdpTriple& t, int probes, std::uint64_t seed);

SdpSolution solve(const SdpTriple& t, const SolveOptions& opts = {});

struct CertificateReport {
    bool ok = false;
    std::vector<std::pair<std::string, double>> residuals;
    std::string summary;
};

/// Recomputes all residuals from scratch, independent of solver internals.
CertificateReport verify_certificates(const SdpTriple& t, const SdpSolution& sol,
                                      double tol_feas = 1e-7, double tol_gap = 1e-6);

}  // namespace stratnorm
