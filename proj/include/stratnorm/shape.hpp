#pragma once

#include <string>
#include <vector>

#include "stratnorm/labeled_operator.hpp"

namespace stratnorm {

/// Round count and message dimensions of an r-round interaction.
/// Canonical factor order for all Choi operators is Y1..Yr,X1..Xr.
struct InteractionShape {
    std::vector<std::size_t> in_dims;   // X_1..X_r
    std::vector<std::size_t> out_dims;  // Y_1..Y_r

    InteractionShape() = default;
    InteractionShape(std::vector<std::size_t> in, std::vector<std::size_t> out);

    std::size_t rounds() const { return in_dims.size(); }

    static std::string x_label(std::size_t i) { return "X" + std::to_string(i); }  // 1-based
    static std::string y_label(std::size_t i) { return "Y" + std::to_string(i); }

    std::size_t in_dim(std::size_t i) const { return in_dims[i - 1]; }
    std::size_t out_dim(std::size_t i) const { return out_dims[i - 1]; }

    std::size_t in_total() const;
    std::size_t out_total() const;
    std::size_t in_prefix(std::size_t i) const;   // dim(X_1..X_i), i=0 -> 1
    std::size_t out_prefix(std::size_t i) const;  // dim(Y_1..Y_i)

    /// Y1..Yr,X1..Xr.
    FactorList canonical_factors() const;
    /// Y1..Yi,X1..Xi — the space of strategy ladder level i.
    FactorList strategy_level_factors(std::size_t i) const;
    /// Y1..Y(i-1),X1..Xi — the space of co-strategy ladder level i.
    FactorList costrategy_level_factors(std::size_t i) const;

    bool operator==(const InteractionShape& o) const {
        return in_dims == o.in_dims && out_dims == o.out_dims;
    }
    bool operator!=(const InteractionShape& o) const { return !(*this == o); }
};

}  // namespace stratnorm
