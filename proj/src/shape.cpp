#include "stratnorm/shape.hpp"

namespace stratnorm {

InteractionShape::InteractionShape(std::vector<std::size_t> in, std::vector<std::size_t> out)
    : in_dims(std::move(in)), out_dims(std::move(out)) {
    if (in_dims.empty() || in_dims.size() != out_dims.size())
        throw std::invalid_argument("InteractionShape: need r >= 1 rounds with matching in/out lists");
    for (std::size_t d : in_dims)
        if (d < 1) throw std::invalid_argument("InteractionShape: input dims must be >= 1");
    for (std::size_t d : out_dims)
        if (d < 1) throw std::invalid_argument("InteractionShape: output dims must be >= 1");
}

std::size_t InteractionShape::in_total() const { return in_prefix(rounds()); }
std::size_t InteractionShape::out_total() const { return out_prefix(rounds()); }

std::size_t InteractionShape::in_prefix(std::size_t i) const {
    std::size_t d = 1;
    for (std::size_t k = 1; k <= i; ++k) d *= in_dim(k);
    return d;
}

std::size_t InteractionShape::out_prefix(std::size_t i) const {
    std::size_t d = 1;
    for (std::size_t k = 1; k <= i; ++k) d *= out_dim(k);
    return d;
}

FactorList InteractionShape::canonical_factors() const { return strategy_level_factors(rounds()); }

FactorList InteractionShape::strategy_level_factors(std::size_t i) const {
    std::vector<Factor> f;
    for (std::size_t k = 1; k <= i; ++k) f.push_back({y_label(k), out_dim(k)});
    for (std::size_t k = 1; k <= i; ++k) f.push_back({x_label(k), in_dim(k)});
    return FactorList(std::move(f));
}

FactorList InteractionShape::costrategy_level_factors(std::size_t i) const {
    std::vector<Factor> f;
    for (std::size_t k = 1; k + 1 <= i; ++k) f.push_back({y_label(k), out_dim(k)});
    for (std::size_t k = 1; k <= i; ++k) f.push_back({x_label(k), in_dim(k)});
    return FactorList(std::move(f));
}

}  // namespace stratnorm
