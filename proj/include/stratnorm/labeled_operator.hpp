#pragma once

#include <string>
#include <vector>

#include "stratnorm/complex_matrix.hpp"

namespace stratnorm {

struct Factor {
    std::string label;
    std::size_t dim;
};

/// Ordered list of tensor factors. First factor is the most significant
/// index digit, matching the usual Kronecker-product convention.
class FactorList {
public:
    FactorList() = default;
    explicit FactorList(std::vector<Factor> factors);

    std::size_t count() const { return f_.size(); }
    const Factor& at(std::size_t k) const { return f_[k]; }
    const std::vector<Factor>& factors() const { return f_; }

    std::size_t total_dim() const;
    bool contains(const std::string& label) const;
    std::size_t index_of(const std::string& label) const;  // throws if absent

    std::vector<std::string> labels() const;

    bool operator==(const FactorList& o) const;
    bool operator!=(const FactorList& o) const { return !(*this == o); }

private:
    std::vector<Factor> f_;
};

/// A square operator together with the tensor factors it acts on.
class LabeledOperator {
public:
    LabeledOperator() = default;
    LabeledOperator(ComplexMatrix m, FactorList factors);

    const ComplexMatrix& matrix() const { return m_; }
    ComplexMatrix& matrix() { return m_; }
    const FactorList& factors() const { return factors_; }
    std::size_t dim() const { return m_.rows(); }

    static LabeledOperator identity(const FactorList& factors);
    static LabeledOperator zero(const FactorList& factors);

    bool is_hermitian(double rel_tol = 1e-12) const { return m_.is_hermitian(rel_tol); }

private:
    ComplexMatrix m_;
    FactorList factors_;
};

LabeledOperator kron(const LabeledOperator& a, const LabeledOperator& b);
LabeledOperator partial_trace(const LabeledOperator& a, const std::string& label);
LabeledOperator permute_factors(const LabeledOperator& a, const std::vector<std::string>& order);

/// Renames factors without touching entries. `from`/`to` are parallel lists.
LabeledOperator relabel(const LabeledOperator& a, const std::vector<std::string>& from,
                        const std::vector<std::string>& to);

/// Kron with identity on the missing factors of `target`, then permute into
/// `target` order. `a`'s labels must be a subset of `target`'s.
LabeledOperator embed(const LabeledOperator& a, const FactorList& target);

/// tr(a^dagger b); factor lists must match exactly.
cplx inner(const LabeledOperator& a, const LabeledOperator& b);
double inner_re(const LabeledOperator& a, const LabeledOperator& b);

LabeledOperator operator+(const LabeledOperator& a, const LabeledOperator& b);
LabeledOperator operator-(const LabeledOperator& a, const LabeledOperator& b);
LabeledOperator operator*(cplx s, const LabeledOperator& a);

}  // namespace stratnorm
