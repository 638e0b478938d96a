#include "stratnorm/labeled_operator.hpp"

#include <algorithm>
#include <set>

namespace stratnorm {

FactorList::FactorList(std::vector<Factor> factors) : f_(std::move(factors)) {
    std::set<std::string> seen;
    for (const auto& f : f_) {
        if (f.dim < 1) throw std::invalid_argument("FactorList: factor dim must be >= 1");
        if (!seen.insert(f.label).second)
            throw std::invalid_argument("FactorList: duplicate label '" + f.label + "'");
    }
}

std::size_t FactorList::total_dim() const {
    std::size_t d = 1;
    for (const auto& f : f_) d *= f.dim;
    return d;
}

bool FactorList::contains(const std::string& label) const {
    for (const auto& f : f_)
        if (f.label == label) return true;
    return false;
}

std::size_t FactorList::index_of(const std::string& label) const {
    for (std::size_t k = 0; k < f_.size(); ++k)
        if (f_[k].label == label) return k;
    throw std::invalid_argument("FactorList: unknown label '" + label + "'");
}

std::vector<std::string> FactorList::labels() const {
    std::vector<std::string> out;
    out.reserve(f_.size());
    for (const auto& f : f_) out.push_back(f.label);
    return out;
}

bool FactorList::operator==(const FactorList& o) const {
    if (f_.size() != o.f_.size()) return false;
    for (std::size_t k = 0; k < f_.size(); ++k)
        if (f_[k].label != o.f_[k].label || f_[k].dim != o.f_[k].dim) return false;
    return true;
}

LabeledOperator::LabeledOperator(ComplexMatrix m, FactorList factors)
    : m_(std::move(m)), factors_(std::move(factors)) {
    if (!m_.square()) throw std::invalid_argument("LabeledOperator: matrix must be square");
    if (m_.rows() != factors_.total_dim())
        throw std::invalid_argument("LabeledOperator: matrix dim does not match factor dims");
    if (!m_.all_finite()) throw std::invalid_argument("LabeledOperator: non-finite entry");
}

LabeledOperator LabeledOperator::identity(const FactorList& factors) {
    return LabeledOperator(ComplexMatrix::identity(factors.total_dim()), factors);
}

LabeledOperator LabeledOperator::zero(const FactorList& factors) {
    return LabeledOperator(ComplexMatrix::zero(factors.total_dim(), factors.total_dim()), factors);
}

LabeledOperator kron(const LabeledOperator& a, const LabeledOperator& b) {
    for (const auto& f : b.factors().factors())
        if (a.factors().contains(f.label))
            throw std::invalid_argument("kron: duplicate label '" + f.label + "'");
    const std::size_t da = a.dim(), db = b.dim();
    ComplexMatrix r(da * db, da * db);
    for (std::size_t ia = 0; ia < da; ++ia)
        for (std::size_t ja = 0; ja < da; ++ja) {
            const cplx v = a.matrix()(ia, ja);
            if (v == cplx(0.0, 0.0)) continue;
            for (std::size_t ib = 0; ib < db; ++ib)
                for (std::size_t jb = 0; jb < db; ++jb)
                    r(ia * db + ib, ja * db + jb) = v * b.matrix()(ib, jb);
        }
    std::vector<Factor> fs = a.factors().factors();
    for (const auto& f : b.factors().factors()) fs.push_back(f);
    return LabeledOperator(std::move(r), FactorList(std::move(fs)));
}

namespace {

// Strides of each factor in the composite row-major index.
std::vector<std::size_t> factor_strides(const FactorList& fl) {
    std::vector<std::size_t> s(fl.count());
    std::size_t acc = 1;
    for (std::size_t k = fl.count(); k-- > 0;) {
        s[k] = acc;
        acc *= fl.at(k).dim;
    }
    return s;
}

}  // namespace

LabeledOperator partial_trace(const LabeledOperator& a, const std::string& label) {
    const FactorList& fl = a.factors();
    const std::size_t t = fl.index_of(label);
    const std::size_t dt = fl.at(t).dim;
    const auto strides = factor_strides(fl);
    const std::size_t st = strides[t];

    std::vector<Factor> rest;
    for (std::size_t k = 0; k < fl.count(); ++k)
        if (k != t) rest.push_back(fl.at(k));
    FactorList out_fl(std::move(rest));
    const std::size_t dout = out_fl.total_dim();

    // Map each reduced index to the base composite index with the traced
    // factor's digit set to zero.
    std::vector<std::size_t> base(dout);
    {
        const auto out_strides = factor_strides(out_fl);
        for (std::size_t idx = 0; idx < dout; ++idx) {
            std::size_t rem = idx, composite = 0, pos = 0;
            for (std::size_t k = 0; k < fl.count(); ++k) {
                if (k == t) continue;
                const std::size_t digit = rem / out_strides[pos];
                rem -= digit * out_strides[pos];
                composite += digit * strides[k];
                ++pos;
            }
            base[idx] = composite;
        }
    }

    ComplexMatrix r(dout, dout);
    for (std::size_t i = 0; i < dout; ++i)
        for (std::size_t j = 0; j < dout; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < dt; ++k) s += a.matrix()(base[i] + k * st, base[j] + k * st);
            r(i, j) = s;
        }
    return LabeledOperator(std::move(r), std::move(out_fl));
}

LabeledOperator permute_factors(const LabeledOperator& a, const std::vector<std::string>& order) {
    const FactorList& fl = a.factors();
    if (order.size() != fl.count())
        throw std::invalid_argument("permute_factors: order is not a permutation of the labels");
    std::vector<std::size_t> old_pos(order.size());
    std::vector<bool> used(fl.count(), false);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t p = fl.index_of(order[k]);
        if (used[p]) throw std::invalid_argument("permute_factors: repeated label in order");
        used[p] = true;
        old_pos[k] = p;
    }

    std::vector<Factor> nf;
    nf.reserve(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) nf.push_back(fl.at(old_pos[k]));
    FactorList out_fl(std::move(nf));

    const auto old_strides = factor_strides(fl);
    const auto new_strides = factor_strides(out_fl);
    const std::size_t d = a.dim();
    std::vector<std::size_t> map(d);
    for (std::size_t idx = 0; idx < d; ++idx) {
        std::size_t rem = idx, composite = 0;
        for (std::size_t k = 0; k < out_fl.count(); ++k) {
            const std::size_t digit = rem / new_strides[k];
            rem -= digit * new_strides[k];
            composite += digit * old_strides[old_pos[k]];
        }
        map[idx] = composite;
    }

    ComplexMatrix r(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) r(i, j) = a.matrix()(map[i], map[j]);
    return LabeledOperator(std::move(r), std::move(out_fl));
}

LabeledOperator relabel(const LabeledOperator& a, const std::vector<std::string>& from,
                        const std::vector<std::string>& to) {
    if (from.size() != to.size()) throw std::invalid_argument("relabel: list size mismatch");
    std::vector<Factor> fs = a.factors().factors();
    for (std::size_t k = 0; k < from.size(); ++k) {
        const std::size_t p = a.factors().index_of(from[k]);
        fs[p].label = to[k];
    }
    return LabeledOperator(a.matrix(), FactorList(std::move(fs)));
}

LabeledOperator embed(const LabeledOperator& a, const FactorList& target) {
    std::vector<Factor> missing;
    for (const auto& f : target.factors())
        if (!a.factors().contains(f.label)) missing.push_back(f);
    for (const auto& f : a.factors().factors())
        if (!target.contains(f.label))
            throw std::invalid_argument("embed: label '" + f.label + "' not in target");
    LabeledOperator full = missing.empty()
                               ? a
                               : kron(a, LabeledOperator::identity(FactorList(std::move(missing))));
    return permute_factors(full, target.labels());
}

cplx inner(const LabeledOperator& a, const LabeledOperator& b) {
    if (a.factors() != b.factors())
        throw std::invalid_argument("inner: factor lists do not match");
    cplx s = 0.0;
    const std::size_t d = a.dim();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) s += std::conj(a.matrix()(i, j)) * b.matrix()(i, j);
    return s;
}

double inner_re(const LabeledOperator& a, const LabeledOperator& b) { return inner(a, b).real(); }

LabeledOperator operator+(const LabeledOperator& a, const LabeledOperator& b) {
    if (a.factors() != b.factors()) throw std::invalid_argument("operator+: factor mismatch");
    return LabeledOperator(a.matrix() + b.matrix(), a.factors());
}

LabeledOperator operator-(const LabeledOperator& a, const LabeledOperator& b) {
    if (a.factors() != b.factors()) throw std::invalid_argument("operator-: factor mismatch");
    return LabeledOperator(a.matrix() - b.matrix(), a.factors());
}

LabeledOperator operator*(cplx s, const LabeledOperator& a) {
    return LabeledOperator(s * a.matrix(), a.factors());
}

}  // namespace stratnorm
