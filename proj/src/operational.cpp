#include "stratnorm/operational.hpp"

#include <algorithm>
#include <cmath>

namespace stratnorm {

namespace {

std::string ref_label(const std::string& base) { return base + "~"; }

// Unnormalized maximally entangled pair sum_{jk} E_jk (x) E_jk on (a, a_ref).
LabeledOperator entangled_pair(const std::string& label, std::size_t dim) {
    ComplexMatrix p(dim * dim, dim * dim);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t c = 0; c < dim; ++c) p(a * dim + a, c * dim + c) = 1.0;
    return LabeledOperator(std::move(p),
                           FactorList({{label, dim}, {ref_label(label), dim}}));
}

LabeledOperator conj_op(const LabeledOperator& a) {
    return LabeledOperator(a.matrix().conjugate(), a.factors());
}

// (K (x) I_rest) M (K (x) I_rest)^dagger with M indexed (in, rest).
ComplexMatrix sandwich_kraus(const ComplexMatrix& k, const ComplexMatrix& m, std::size_t rest) {
    const std::size_t bo = k.rows(), ai = k.cols();
    const std::size_t ncols = m.cols();
    ComplexMatrix tmp(bo * rest, ncols);
    for (std::size_t b = 0; b < bo; ++b)
        for (std::size_t a = 0; a < ai; ++a) {
            const cplx kba = k(b, a);
            if (kba == cplx(0.0, 0.0)) continue;
            for (std::size_t rho = 0; rho < rest; ++rho) {
                const cplx* src = &m.entries()[(a * rest + rho) * ncols];
                cplx* dst = &tmp.entries()[(b * rest + rho) * ncols];
                for (std::size_t c = 0; c < ncols; ++c) dst[c] += kba * src[c];
            }
        }
    ComplexMatrix out(bo * rest, bo * rest);
    for (std::size_t b = 0; b < bo; ++b)
        for (std::size_t a = 0; a < ai; ++a) {
            const cplx kba = std::conj(k(b, a));
            if (kba == cplx(0.0, 0.0)) continue;
            for (std::size_t rho = 0; rho < rest; ++rho) {
                const std::size_t col_src = a * rest + rho;
                const std::size_t col_dst = b * rest + rho;
                for (std::size_t r = 0; r < out.rows(); ++r)
                    out(r, col_dst) += tmp(r, col_src) * kba;
            }
        }
    return out;
}

}  // namespace

std::size_t RoundChannel::in_dim() const {
    std::size_t d = 1;
    for (const auto& l : in_labels) d *= choi.factors().at(choi.factors().index_of(l)).dim;
    return d;
}

std::size_t RoundChannel::out_dim() const {
    std::size_t d = 1;
    for (const auto& l : out_labels) d *= choi.factors().at(choi.factors().index_of(l)).dim;
    return d;
}

const std::vector<ComplexMatrix>& RoundChannel::kraus_ops() const {
    if (!kraus.empty()) return kraus;
    const std::size_t din = in_dim(), dout = out_dim();
    // Factor order of the Choi must be outs then ins.
    std::vector<std::string> expect = out_labels;
    expect.insert(expect.end(), in_labels.begin(), in_labels.end());
    if (choi.factors().labels() != expect)
        throw std::invalid_argument("RoundChannel: Choi factors must be (outs..., ins...)");
    const EigResult e = herm_eig(choi);
    const double cutoff = 1e-12 * std::max(1.0, e.values.empty() ? 0.0 : std::abs(e.values[0]));
    for (std::size_t k = 0; k < e.values.size(); ++k) {
        if (e.values[k] <= cutoff) continue;
        const double s = std::sqrt(e.values[k]);
        ComplexMatrix kk(dout, din);
        for (std::size_t o = 0; o < dout; ++o)
            for (std::size_t i = 0; i < din; ++i) kk(o, i) = s * e.vectors(o * din + i, k);
        kraus.push_back(std::move(kk));
    }
    if (kraus.empty()) kraus.push_back(ComplexMatrix::zero(dout, din));
    return kraus;
}

double RoundChannel::cp_residual() const {
    // A cached Kraus family certifies the Choi as a sum of outer products.
    if (!kraus.empty()) return 0.0;
    return psd_residual(choi);
}

double RoundChannel::tp_residual() const {
    LabeledOperator t = choi;
    for (const auto& l : out_labels) t = partial_trace(t, l);
    return operator_norm(t - LabeledOperator::identity(t.factors()));
}

std::vector<ConstraintResidual> operational_residuals(const OperationalStrategy& os) {
    std::vector<ConstraintResidual> r;
    for (std::size_t i = 0; i < os.round_maps.size(); ++i) {
        r.push_back({"round " + std::to_string(i + 1) + " cp", os.round_maps[i].cp_residual()});
        r.push_back({"round " + std::to_string(i + 1) + " tp", os.round_maps[i].tp_residual()});
    }
    return r;
}

std::vector<ConstraintResidual> operational_residuals(const OperationalCoStrategy& oc) {
    std::vector<ConstraintResidual> r;
    r.push_back({"initial state psd", psd_residual(oc.initial_state)});
    r.push_back({"initial state trace",
                 std::abs(oc.initial_state.matrix().trace() - cplx(1.0, 0.0))});
    for (std::size_t i = 0; i < oc.round_maps.size(); ++i) {
        r.push_back({"round " + std::to_string(i + 1) + " cp", oc.round_maps[i].cp_residual()});
        r.push_back({"round " + std::to_string(i + 1) + " tp", oc.round_maps[i].tp_residual()});
    }
    return r;
}

namespace {

void check_residuals(const std::vector<ConstraintResidual>& rs, double tol, double state_tol) {
    for (const auto& r : rs) {
        const bool is_state = r.name.rfind("initial state", 0) == 0;
        if (r.value > (is_state ? state_tol : tol))
            throw std::invalid_argument("operational description invalid: " + r.name +
                                        " residual " + std::to_string(r.value));
    }
}

}  // namespace

void require_valid(const OperationalStrategy& os, double tol) {
    if (os.round_maps.size() != os.shape.rounds() || os.memory_dims.size() != os.shape.rounds())
        throw std::invalid_argument("OperationalStrategy: wrong number of rounds or memories");
    check_residuals(operational_residuals(os), tol, 1e-10);
}

void require_valid(const OperationalCoStrategy& oc, double tol) {
    if (oc.round_maps.size() != oc.shape.rounds() ||
        oc.memory_dims.size() != oc.shape.rounds() + 1)
        throw std::invalid_argument("OperationalCoStrategy: wrong number of rounds or memories");
    check_residuals(operational_residuals(oc), tol, 1e-10);
}

LabeledOperator apply_channel(const LabeledOperator& state, const RoundChannel& ch,
                              const FactorList& out_factors) {
    // Put the consumed factors first, spectators after, in stable order.
    std::vector<std::string> order = ch.in_labels;
    std::vector<Factor> rest;
    for (const auto& f : state.factors().factors()) {
        if (std::find(ch.in_labels.begin(), ch.in_labels.end(), f.label) == ch.in_labels.end()) {
            order.push_back(f.label);
            rest.push_back(f);
        }
    }
    for (const auto& l : ch.in_labels)
        if (!state.factors().contains(l))
            throw std::invalid_argument("apply_channel: state lacks factor '" + l + "'");
    const LabeledOperator perm = permute_factors(state, order);

    std::size_t rest_dim = 1;
    for (const auto& f : rest) rest_dim *= f.dim;
    if (perm.dim() != ch.in_dim() * rest_dim)
        throw std::invalid_argument("apply_channel: input dimension mismatch");

    ComplexMatrix acc(ch.out_dim() * rest_dim, ch.out_dim() * rest_dim);
    for (const auto& k : ch.kraus_ops()) acc += sandwich_kraus(k, perm.matrix(), rest_dim);

    std::vector<Factor> fs = out_factors.factors();
    for (const auto& f : rest) fs.push_back(f);
    return LabeledOperator(std::move(acc), FactorList(std::move(fs)));
}

namespace {

FactorList strategy_round_outs(const OperationalStrategy& os, std::size_t i) {
    return FactorList({{InteractionShape::y_label(i), os.shape.out_dim(i)},
                       {OperationalStrategy::z_label(i), os.memory_dims[i - 1]}});
}

FactorList costrategy_round_outs(const OperationalCoStrategy& oc, std::size_t i) {
    const std::size_t r = oc.shape.rounds();
    if (i < r)
        return FactorList({{InteractionShape::x_label(i + 1), oc.shape.in_dim(i + 1)},
                           {OperationalCoStrategy::w_label(i), oc.memory_dims[i]}});
    return FactorList({{OperationalCoStrategy::w_label(r), oc.memory_dims[r]}});
}

// Runs the strategy network on halves of entangled pairs; the final memory
// factor is kept so measuring variants can contract it.
LabeledOperator run_strategy_network(const OperationalStrategy& os) {
    const std::size_t r = os.shape.rounds();
    LabeledOperator state =
        entangled_pair(InteractionShape::x_label(1), os.shape.in_dim(1));
    for (std::size_t i = 2; i <= r; ++i)
        state = kron(state, entangled_pair(InteractionShape::x_label(i), os.shape.in_dim(i)));
    for (std::size_t i = 1; i <= r; ++i)
        state = apply_channel(state, os.round_maps[i - 1], strategy_round_outs(os, i));
    return state;
}

LabeledOperator run_costrategy_network(const OperationalCoStrategy& oc) {
    const std::size_t r = oc.shape.rounds();
    LabeledOperator state = oc.initial_state;
    for (std::size_t i = 1; i <= r; ++i)
        state = kron(state, entangled_pair(InteractionShape::y_label(i), oc.shape.out_dim(i)));
    for (std::size_t i = 1; i <= r; ++i)
        state = apply_channel(state, oc.round_maps[i - 1], costrategy_round_outs(oc, i));
    return state;
}

LabeledOperator finish_strategy_choi(const OperationalStrategy& os, LabeledOperator state) {
    const std::size_t r = os.shape.rounds();
    std::vector<std::string> from, to;
    for (std::size_t i = 1; i <= r; ++i) {
        from.push_back(ref_label(InteractionShape::x_label(i)));
        to.push_back(InteractionShape::x_label(i));
    }
    state = relabel(state, from, to);
    state = permute_factors(state, os.shape.canonical_factors().labels());
    state.matrix().hermitize();
    return state;
}

// Co-strategies are represented by the adjoint map: conjugate entrywise and
// reorder into the canonical factors.
LabeledOperator finish_costrategy_choi(const OperationalCoStrategy& oc, LabeledOperator state) {
    const std::size_t r = oc.shape.rounds();
    std::vector<std::string> from, to;
    for (std::size_t i = 1; i <= r; ++i) {
        from.push_back(ref_label(InteractionShape::y_label(i)));
        to.push_back(InteractionShape::y_label(i));
    }
    state = relabel(state, from, to);
    state = conj_op(state);
    state = permute_factors(state, oc.shape.canonical_factors().labels());
    state.matrix().hermitize();
    return state;
}

LabeledOperator contract_memory(const LabeledOperator& state, const std::string& mem_label,
                                const ComplexMatrix& povm_element) {
    const std::size_t pos = state.factors().index_of(mem_label);
    const std::size_t dim = state.factors().at(pos).dim;
    if (povm_element.rows() != dim || povm_element.cols() != dim)
        throw std::invalid_argument("measurement element has wrong dimension");
    const LabeledOperator p(povm_element, FactorList({{mem_label, dim}}));
    const LabeledOperator full = embed(p, state.factors());
    return partial_trace(LabeledOperator(full.matrix() * state.matrix(), state.factors()),
                         mem_label);
}

void check_measurement(const std::map<std::string, ComplexMatrix>& meas, std::size_t dim,
                       const char* who) {
    if (meas.empty()) throw std::invalid_argument(std::string(who) + ": empty measurement");
    ComplexMatrix sum(dim, dim);
    for (const auto& [label, p] : meas) {
        if (p.rows() != dim || p.cols() != dim)
            throw std::invalid_argument(std::string(who) + ": element '" + label +
                                        "' has wrong dimension");
        sum += p;
    }
    if (operator_norm(sum - ComplexMatrix::identity(dim)) > 1e-10)
        throw std::invalid_argument(std::string(who) + ": elements do not sum to identity");
}

}  // namespace

StrategyRep operational_to_choi(const OperationalStrategy& os) {
    require_valid(os);
    LabeledOperator state = run_strategy_network(os);
    state = partial_trace(state, OperationalStrategy::z_label(os.shape.rounds()));
    return StrategyRep{finish_strategy_choi(os, std::move(state)), os.shape, Role::strategy};
}

StrategyRep operational_to_choi(const OperationalCoStrategy& oc) {
    require_valid(oc);
    LabeledOperator state = run_costrategy_network(oc);
    state = partial_trace(state, OperationalCoStrategy::w_label(oc.shape.rounds()));
    return StrategyRep{finish_costrategy_choi(oc, std::move(state)), oc.shape, Role::costrategy};
}

MeasuringStrategy operational_to_choi_measuring(const OperationalStrategy& os,
                                                const std::map<std::string, ComplexMatrix>& meas) {
    require_valid(os);
    const std::string mem = OperationalStrategy::z_label(os.shape.rounds());
    check_measurement(meas, os.memory_dims.back(), "operational_to_choi_measuring");
    const LabeledOperator state = run_strategy_network(os);
    MeasuringStrategy ms;
    ms.shape = os.shape;
    ms.role = Role::strategy;
    for (const auto& [label, p] : meas)
        ms.outcomes.emplace(label, finish_strategy_choi(os, contract_memory(state, mem, p)));
    return ms;
}

MeasuringStrategy operational_to_choi_measuring(const OperationalCoStrategy& oc,
                                                const std::map<std::string, ComplexMatrix>& meas) {
    require_valid(oc);
    const std::string mem = OperationalCoStrategy::w_label(oc.shape.rounds());
    check_measurement(meas, oc.memory_dims.back(), "operational_to_choi_measuring");
    const LabeledOperator state = run_costrategy_network(oc);
    MeasuringStrategy ms;
    ms.shape = oc.shape;
    ms.role = Role::costrategy;
    for (const auto& [label, q] : meas)
        ms.outcomes.emplace(label, finish_costrategy_choi(oc, contract_memory(state, mem, q)));
    return ms;
}

std::map<std::pair<std::string, std::string>, double> simulate_interaction(
    const OperationalStrategy& os, const OperationalCoStrategy& oc,
    const std::map<std::string, ComplexMatrix>& s_meas,
    const std::map<std::string, ComplexMatrix>& t_meas) {
    require_valid(os);
    require_valid(oc);
    if (os.shape != oc.shape)
        throw std::invalid_argument("simulate_interaction: shape mismatch");
    const std::size_t r = os.shape.rounds();
    check_measurement(s_meas, os.memory_dims.back(), "simulate_interaction (strategy side)");
    check_measurement(t_meas, oc.memory_dims.back(), "simulate_interaction (co-strategy side)");

    LabeledOperator sigma = oc.initial_state;
    for (std::size_t i = 1; i <= r; ++i) {
        try {
            sigma = apply_channel(sigma, os.round_maps[i - 1], strategy_round_outs(os, i));
            sigma = apply_channel(sigma, oc.round_maps[i - 1], costrategy_round_outs(oc, i));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("simulate_interaction: round " + std::to_string(i) +
                                        ": " + e.what());
        }
    }

    const std::string zl = OperationalStrategy::z_label(r);
    const std::string wl = OperationalCoStrategy::w_label(r);
    sigma = permute_factors(sigma, {zl, wl});

    std::map<std::pair<std::string, std::string>, double> out;
    const std::size_t dz = os.memory_dims.back();
    const std::size_t dw = oc.memory_dims.back();
    for (const auto& [a, pa] : s_meas)
        for (const auto& [b, qb] : t_meas) {
            // tr((P_a (x) Q_b) sigma) without forming the product.
            cplx val = 0.0;
            for (std::size_t z1 = 0; z1 < dz; ++z1)
                for (std::size_t z2 = 0; z2 < dz; ++z2) {
                    const cplx pzz = pa(z1, z2);
                    if (pzz == cplx(0.0, 0.0)) continue;
                    for (std::size_t w1 = 0; w1 < dw; ++w1)
                        for (std::size_t w2 = 0; w2 < dw; ++w2)
                            val += pzz * qb(w1, w2) *
                                   sigma.matrix()(z2 * dw + w2, z1 * dw + w1);
                }
            out[{a, b}] = val.real();
        }
    return out;
}

namespace {

constexpr std::size_t kMemoryCap = 8;

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// Random channel as a Stinespring isometry; an environment factor is added
// (and traced) only when the output is smaller than the input.
RoundChannel make_random_channel(const std::vector<Factor>& ins, const std::vector<Factor>& outs,
                                 Rng& rng) {
    std::size_t in_dim = 1, out_dim = 1;
    for (const auto& f : ins) in_dim *= f.dim;
    for (const auto& f : outs) out_dim *= f.dim;

    const std::size_t env = std::max<std::size_t>(1, ceil_div(in_dim, out_dim));
    const ComplexMatrix v = random_isometry(out_dim * env, in_dim, rng);
    std::vector<ComplexMatrix> kraus;
    for (std::size_t e = 0; e < env; ++e) {
        ComplexMatrix k(out_dim, in_dim);
        for (std::size_t o = 0; o < out_dim; ++o)
            for (std::size_t i = 0; i < in_dim; ++i) k(o, i) = v(o * env + e, i);
        kraus.push_back(std::move(k));
    }
    ComplexMatrix choi(out_dim * in_dim, out_dim * in_dim);
    for (const auto& k : kraus)
        for (std::size_t o = 0; o < out_dim; ++o)
            for (std::size_t i = 0; i < in_dim; ++i) {
                const cplx koi = k(o, i);
                if (koi == cplx(0.0, 0.0)) continue;
                for (std::size_t o2 = 0; o2 < out_dim; ++o2)
                    for (std::size_t i2 = 0; i2 < in_dim; ++i2)
                        choi(o * in_dim + i, o2 * in_dim + i2) += koi * std::conj(k(o2, i2));
            }
    choi.hermitize();

    RoundChannel ch;
    for (const auto& f : ins) ch.in_labels.push_back(f.label);
    for (const auto& f : outs) ch.out_labels.push_back(f.label);
    ch.kraus = std::move(kraus);
    std::vector<Factor> fs = outs;
    fs.insert(fs.end(), ins.begin(), ins.end());
    ch.choi = LabeledOperator(std::move(choi), FactorList(std::move(fs)));
    return ch;
}

}  // namespace

OperationalStrategy random_strategy(const InteractionShape& shape, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0xA11CE));
    const std::size_t r = shape.rounds();
    OperationalStrategy os;
    os.shape = shape;
    std::size_t prod = 1;
    for (std::size_t i = 1; i <= r; ++i) {
        prod *= shape.in_dim(i) * shape.out_dim(i);
        os.memory_dims.push_back(std::min(prod, kMemoryCap));
    }
    for (std::size_t i = 1; i <= r; ++i) {
        std::vector<Factor> ins = {{InteractionShape::x_label(i), shape.in_dim(i)}};
        if (i >= 2) ins.push_back({OperationalStrategy::z_label(i - 1), os.memory_dims[i - 2]});
        const std::vector<Factor> outs = {{InteractionShape::y_label(i), shape.out_dim(i)},
                                          {OperationalStrategy::z_label(i), os.memory_dims[i - 1]}};
        os.round_maps.push_back(make_random_channel(ins, outs, rng));
    }
    return os;
}

OperationalCoStrategy random_costrategy(const InteractionShape& shape, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0xB0B));
    const std::size_t r = shape.rounds();
    OperationalCoStrategy oc;
    oc.shape = shape;
    std::size_t prod = shape.in_dim(1);
    oc.memory_dims.push_back(std::min(prod, kMemoryCap));  // W_0
    for (std::size_t i = 1; i <= r; ++i) {
        prod *= shape.out_dim(i);
        if (i < r) prod *= shape.in_dim(i + 1);
        oc.memory_dims.push_back(std::min(prod, kMemoryCap));
    }

    // Random pure initial state on X_1 (x) W_0.
    const std::size_t d0 = shape.in_dim(1) * oc.memory_dims[0];
    ComplexMatrix v(d0, 1);
    double nrm = 0.0;
    for (std::size_t i = 0; i < d0; ++i) {
        v(i, 0) = rng.gaussian_cplx();
        nrm += std::norm(v(i, 0));
    }
    nrm = std::sqrt(nrm);
    ComplexMatrix rho(d0, d0);
    for (std::size_t i = 0; i < d0; ++i)
        for (std::size_t j = 0; j < d0; ++j) rho(i, j) = v(i, 0) * std::conj(v(j, 0)) / (nrm * nrm);
    rho.hermitize();
    oc.initial_state = LabeledOperator(
        std::move(rho), FactorList({{InteractionShape::x_label(1), shape.in_dim(1)},
                                    {OperationalCoStrategy::w_label(0), oc.memory_dims[0]}}));

    for (std::size_t i = 1; i <= r; ++i) {
        const std::vector<Factor> ins = {{InteractionShape::y_label(i), shape.out_dim(i)},
                                         {OperationalCoStrategy::w_label(i - 1), oc.memory_dims[i - 1]}};
        std::vector<Factor> outs;
        if (i < r) outs.push_back({InteractionShape::x_label(i + 1), shape.in_dim(i + 1)});
        outs.push_back({OperationalCoStrategy::w_label(i), oc.memory_dims[i]});
        oc.round_maps.push_back(make_random_channel(ins, outs, rng));
    }
    return oc;
}

std::map<std::string, ComplexMatrix> random_binary_measurement(std::size_t dim, Rng& rng) {
    const std::size_t rank = dim <= 1 ? 1 : 1 + rng.below(dim - 1);
    const ComplexMatrix p = random_projector(dim, std::min(rank, dim), rng);
    std::map<std::string, ComplexMatrix> m;
    m.emplace("0", p);
    m.emplace("1", ComplexMatrix::identity(dim) - p);
    return m;
}

MeasuringStrategy random_measuring_strategy(const InteractionShape& shape, std::uint64_t seed) {
    const OperationalStrategy os = random_strategy(shape, seed);
    Rng rng(derive_seed(seed, 0x5EA5));
    return operational_to_choi_measuring(os, random_binary_measurement(os.memory_dims.back(), rng));
}

MeasuringStrategy random_measuring_costrategy(const InteractionShape& shape, std::uint64_t seed) {
    const OperationalCoStrategy oc = random_costrategy(shape, seed);
    Rng rng(derive_seed(seed, 0x7EA7));
    return operational_to_choi_measuring(oc, random_binary_measurement(oc.memory_dims.back(), rng));
}

}  // namespace stratnorm
