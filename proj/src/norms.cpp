#include "stratnorm/norms.hpp"

#include <algorithm>
#include <cmath>

namespace stratnorm {

namespace {

std::string t_level(std::size_t i) { return "T." + std::to_string(i); }
std::string s_level(std::size_t i) { return "S." + std::to_string(i); }
std::string c_level(std::size_t i) { return "C." + std::to_string(i); }
std::string r_level(std::size_t i) { return "R." + std::to_string(i); }

LabeledOperator wrap(const ComplexMatrix& m, const FactorList& f) {
    return LabeledOperator(m, f);
}

LabeledOperator kron_identity_after(const LabeledOperator& a, const std::string& label,
                                    std::size_t dim) {
    return kron(a, LabeledOperator::identity(FactorList({{label, dim}})));
}

LabeledOperator kron_identity_before(const std::string& label, std::size_t dim,
                                     const LabeledOperator& a) {
    return kron(LabeledOperator::identity(FactorList({{label, dim}})), a);
}

double blocks_scale(const std::vector<LabeledOperator>& ops) {
    double m = 1.0;
    for (const auto& o : ops) m = std::max(m, o.matrix().max_abs());
    return m;
}

void check_slack(const LabeledOperator& g, double tol, const char* where) {
    const double neg = psd_residual(g);
    if (neg > tol)
        throw std::invalid_argument(std::string(where) +
                                    ": blocks are infeasible (slack deficit " +
                                    std::to_string(neg) + ")");
}

}  // namespace

SdpTriple build_primal_triple(const LabeledOperator& x, const InteractionShape& shape) {
    if (!x.is_hermitian())
        throw std::invalid_argument("build_primal_triple: x must be Hermitian");
    if (x.factors() != shape.canonical_factors())
        throw std::invalid_argument("build_primal_triple: x is not on the canonical factors");
    const std::size_t r = shape.rounds();
    const std::size_t full = shape.out_total() * shape.in_total();

    std::vector<std::pair<std::string, std::size_t>> pblocks = {{"T0", full}, {"T1", full}};
    for (std::size_t i = r; i >= 1; --i)
        pblocks.push_back({t_level(i), shape.out_prefix(i - 1) * shape.in_prefix(i)});

    std::vector<std::pair<std::string, std::size_t>> qblocks = {{"C.top", full}};
    for (std::size_t i = r; i >= 2; --i)
        qblocks.push_back({c_level(i), shape.out_prefix(i - 1) * shape.in_prefix(i - 1)});
    qblocks.push_back({"C.tr", 1});

    SdpTriple t;
    t.primal_structure = BlockStructure(std::move(pblocks));
    t.dual_structure = BlockStructure(std::move(qblocks));

    t.A = BlockOperator(t.primal_structure);
    t.A.block("T0") = x.matrix();
    t.A.block("T1") = cplx(-1.0, 0.0) * x.matrix();
    t.B = BlockOperator(t.dual_structure);
    t.B.block("C.tr")(0, 0) = 1.0;

    const FactorList canon = shape.canonical_factors();
    std::vector<FactorList> lvl(r + 1), slvl(r + 1);
    for (std::size_t i = 1; i <= r; ++i) {
        lvl[i] = shape.costrategy_level_factors(i);
        slvl[i] = shape.strategy_level_factors(i);
    }

    t.psi = [shape, canon, lvl, r, ps = t.primal_structure,
             qs = t.dual_structure](const BlockOperator& p) {
        BlockOperator out(qs);
        const LabeledOperator t_r = wrap(p.block(t_level(r)), lvl[r]);
        LabeledOperator top = kron_identity_after(t_r, InteractionShape::y_label(r),
                                                  shape.out_dim(r));
        top = permute_factors(top, canon.labels());
        out.block("C.top") = p.block("T0") + p.block("T1") - top.matrix();
        for (std::size_t i = r; i >= 2; --i) {
            const LabeledOperator ti = wrap(p.block(t_level(i)), lvl[i]);
            const LabeledOperator lhs = partial_trace(ti, InteractionShape::x_label(i));
            LabeledOperator rhs = kron_identity_after(wrap(p.block(t_level(i - 1)), lvl[i - 1]),
                                                      InteractionShape::y_label(i - 1),
                                                      shape.out_dim(i - 1));
            rhs = permute_factors(rhs, lhs.factors().labels());
            out.block(c_level(i)) = lhs.matrix() - rhs.matrix();
        }
        out.block("C.tr")(0, 0) = wrap(p.block(t_level(1)), lvl[1]).matrix().trace();
        return out;
    };

    t.psi_adj = [shape, canon, lvl, slvl, r, ps = t.primal_structure,
                 qs = t.dual_structure](const BlockOperator& q) {
        BlockOperator out(ps);
        out.block("T0") = q.block("C.top");
        out.block("T1") = q.block("C.top");
        for (std::size_t i = r; i >= 2; --i) {
            // multiplier of the level-i constraint is S_(i-1)
            const LabeledOperator s_im1 = wrap(q.block(c_level(i)), slvl[i - 1]);
            const LabeledOperator grown =
                kron_identity_after(s_im1, InteractionShape::x_label(i), shape.in_dim(i));
            const LabeledOperator s_i =
                wrap(q.block(i == r ? std::string("C.top") : c_level(i + 1)), slvl[i]);
            const LabeledOperator reduced = partial_trace(s_i, InteractionShape::y_label(i));
            out.block(t_level(i)) = grown.matrix() - reduced.matrix();
        }
        {
            const LabeledOperator s_1 =
                wrap(q.block(r == 1 ? std::string("C.top") : c_level(2)), slvl[1]);
            const LabeledOperator reduced = partial_trace(s_1, InteractionShape::y_label(1));
            const double p = q.block("C.tr")(0, 0).real();
            ComplexMatrix m = cplx(-1.0, 0.0) * reduced.matrix();
            for (std::size_t k = 0; k < m.rows(); ++k) m(k, k) += p;
            out.block(t_level(1)) = std::move(m);
        }
        return out;
    };
    return t;
}

std::pair<BlockOperator, BlockOperator> primal_triple_starts(const LabeledOperator& x,
                                                             const InteractionShape& shape,
                                                             const SdpTriple& t) {
    const std::size_t r = shape.rounds();
    const double delta = 1.0 / (2.0 * static_cast<double>(r + 1));

    BlockOperator p(t.primal_structure);
    const double top = (1.0 - (r + 1) * delta) / (2.0 * static_cast<double>(shape.in_total()));
    p.block("T0") = top * ComplexMatrix::identity(t.primal_structure.dim(0));
    p.block("T1") = p.block("T0");
    for (std::size_t i = 1; i <= r; ++i) {
        const double v = (1.0 - i * delta) / static_cast<double>(shape.in_prefix(i));
        const std::size_t d = t.primal_structure.dim(t.primal_structure.index_of(t_level(i)));
        p.block(t_level(i)) = v * ComplexMatrix::identity(d);
    }

    // Scaled-identity dual point with an interior margin on every level.
    const double kappa = 1.25;
    BlockOperator q(t.dual_structure);
    double c = kappa * operator_norm(x) + 1.0;
    q.block("C.top") = c * ComplexMatrix::identity(t.dual_structure.dim(0));
    for (std::size_t i = r; i >= 2; --i) {
        c *= kappa * static_cast<double>(shape.out_dim(i));
        const std::size_t d = t.dual_structure.dim(t.dual_structure.index_of(c_level(i)));
        q.block(c_level(i)) = c * ComplexMatrix::identity(d);
    }
    q.block("C.tr")(0, 0) = c * kappa * static_cast<double>(shape.out_dim(1));
    return {std::move(p), std::move(q)};
}

SdpTriple build_dual_triple(const LabeledOperator& x, const InteractionShape& shape) {
    if (!x.is_hermitian())
        throw std::invalid_argument("build_dual_triple: x must be Hermitian");
    if (x.factors() != shape.canonical_factors())
        throw std::invalid_argument("build_dual_triple: x is not on the canonical factors");
    const std::size_t r = shape.rounds();
    const std::size_t full = shape.out_total() * shape.in_total();

    std::vector<std::pair<std::string, std::size_t>> pblocks = {{"S0", full}, {"S1", full}};
    for (std::size_t i = r; i >= 1; --i)
        pblocks.push_back({s_level(i), shape.out_prefix(i) * shape.in_prefix(i)});

    std::vector<std::pair<std::string, std::size_t>> qblocks = {{"R.top", full}};
    for (std::size_t i = r; i >= 1; --i)
        qblocks.push_back({r_level(i), shape.out_prefix(i - 1) * shape.in_prefix(i)});

    SdpTriple t;
    t.primal_structure = BlockStructure(std::move(pblocks));
    t.dual_structure = BlockStructure(std::move(qblocks));

    t.A = BlockOperator(t.primal_structure);
    t.A.block("S0") = x.matrix();
    t.A.block("S1") = cplx(-1.0, 0.0) * x.matrix();
    t.B = BlockOperator(t.dual_structure);
    t.B.block(r_level(1)) = ComplexMatrix::identity(shape.in_dim(1));

    const FactorList canon = shape.canonical_factors();
    std::vector<FactorList> lvl(r + 1), slvl(r + 1);
    for (std::size_t i = 1; i <= r; ++i) {
        lvl[i] = shape.costrategy_level_factors(i);
        slvl[i] = shape.strategy_level_factors(i);
    }

    t.psi = [shape, canon, lvl, slvl, r, qs = t.dual_structure](const BlockOperator& p) {
        BlockOperator out(qs);
        out.block("R.top") = p.block("S0") + p.block("S1") - p.block(s_level(r));
        for (std::size_t i = r; i >= 2; --i) {
            const LabeledOperator si = wrap(p.block(s_level(i)), slvl[i]);
            const LabeledOperator lhs = partial_trace(si, InteractionShape::y_label(i));
            const LabeledOperator rhs = kron_identity_after(
                wrap(p.block(s_level(i - 1)), slvl[i - 1]), InteractionShape::x_label(i),
                shape.in_dim(i));
            out.block(r_level(i)) = lhs.matrix() - rhs.matrix();
        }
        const LabeledOperator s1 = wrap(p.block(s_level(1)), slvl[1]);
        out.block(r_level(1)) = partial_trace(s1, InteractionShape::y_label(1)).matrix();
        return out;
    };

    t.psi_adj = [shape, canon, lvl, slvl, r, ps = t.primal_structure](const BlockOperator& q) {
        BlockOperator out(ps);
        out.block("S0") = q.block("R.top");
        out.block("S1") = q.block("R.top");
        for (std::size_t i = r; i >= 1; --i) {
            const LabeledOperator ri = wrap(q.block(r_level(i)), lvl[i]);
            LabeledOperator grown =
                kron_identity_after(ri, InteractionShape::y_label(i), shape.out_dim(i));
            grown = permute_factors(grown, slvl[i].labels());
            ComplexMatrix m = grown.matrix();
            if (i == r) {
                m -= q.block("R.top");
            } else {
                const LabeledOperator rnext = wrap(q.block(r_level(i + 1)), lvl[i + 1]);
                m -= partial_trace(rnext, InteractionShape::x_label(i + 1)).matrix();
            }
            out.block(s_level(i)) = std::move(m);
        }
        return out;
    };
    return t;
}

std::pair<BlockOperator, BlockOperator> dual_triple_starts(const LabeledOperator& x,
                                                           const InteractionShape& shape,
                                                           const SdpTriple& t) {
    const std::size_t r = shape.rounds();
    const double delta = 1.0 / (2.0 * static_cast<double>(r + 1));

    BlockOperator p(t.primal_structure);
    const double top = (1.0 - (r + 1) * delta) / (2.0 * static_cast<double>(shape.out_total()));
    p.block("S0") = top * ComplexMatrix::identity(t.primal_structure.dim(0));
    p.block("S1") = p.block("S0");
    for (std::size_t i = 1; i <= r; ++i) {
        const double v = (1.0 - i * delta) / static_cast<double>(shape.out_prefix(i));
        const std::size_t d = t.primal_structure.dim(t.primal_structure.index_of(s_level(i)));
        p.block(s_level(i)) = v * ComplexMatrix::identity(d);
    }

    const double kappa = 1.25;
    BlockOperator q(t.dual_structure);
    double c = kappa * operator_norm(x) + 1.0;
    q.block("R.top") = c * ComplexMatrix::identity(t.dual_structure.dim(0));
    for (std::size_t i = r; i >= 1; --i) {
        c *= kappa * (i == r ? 1.0 : static_cast<double>(shape.in_dim(i + 1)));
        const std::size_t d = t.dual_structure.dim(t.dual_structure.index_of(r_level(i)));
        q.block(r_level(i)) = c * ComplexMatrix::identity(d);
    }
    return {std::move(p), std::move(q)};
}

CoStrategyBlocks saturate_costrategy(const CoStrategyBlocks& in, const InteractionShape& shape,
                                     double tol) {
    const std::size_t r = shape.rounds();
    if (in.levels.size() != r)
        throw std::invalid_argument("saturate_costrategy: wrong level count");
    std::vector<LabeledOperator> all = in.levels;
    all.push_back(in.t0);
    all.push_back(in.t1);
    const double sat_tol = tol * blocks_scale(all);

    CoStrategyBlocks out = in;
    {
        const double deficit = 1.0 - out.levels[0].matrix().trace().real();
        if (deficit < -sat_tol)
            throw std::invalid_argument("saturate_costrategy: trace exceeds 1 beyond tolerance");
        const double d1 = static_cast<double>(shape.in_dim(1));
        LabeledOperator u = (1.0 / d1) * LabeledOperator::identity(out.levels[0].factors());
        out.levels[0] = out.levels[0] + deficit * u;
    }
    for (std::size_t i = 2; i <= r; ++i) {
        LabeledOperator grown = kron_identity_after(
            out.levels[i - 2], InteractionShape::y_label(i - 1), shape.out_dim(i - 1));
        const LabeledOperator reduced =
            partial_trace(in.levels[i - 1], InteractionShape::x_label(i));
        grown = permute_factors(grown, reduced.factors().labels());
        const LabeledOperator gap = grown - reduced;
        check_slack(gap, sat_tol, "saturate_costrategy");
        // lift with the uniform density on X_i, back onto the level factors
        const double dxi = static_cast<double>(shape.in_dim(i));
        LabeledOperator lift = kron_identity_after(gap, InteractionShape::x_label(i), dxi);
        lift = permute_factors((1.0 / dxi) * lift, shape.costrategy_level_factors(i).labels());
        out.levels[i - 1] = in.levels[i - 1] + lift;
    }
    {
        LabeledOperator ext = kron_identity_after(out.levels[r - 1],
                                                  InteractionShape::y_label(r), shape.out_dim(r));
        ext = permute_factors(ext, shape.canonical_factors().labels());
        const LabeledOperator d = ext - in.t0 - in.t1;
        check_slack(d, sat_tol, "saturate_costrategy");
        const LabeledOperator half = 0.5 * d;
        out.t0 = in.t0 + half;
        out.t1 = in.t1 + half;
    }
    return out;
}

StrategyBlocks saturate_strategy(const StrategyBlocks& in, const InteractionShape& shape,
                                 double tol) {
    const std::size_t r = shape.rounds();
    if (in.levels.size() != r)
        throw std::invalid_argument("saturate_strategy: wrong level count");
    const double sat_tol = tol * std::max(blocks_scale(in.levels), std::abs(in.p));

    StrategyBlocks out = in;
    {
        const LabeledOperator reduced =
            partial_trace(in.levels[0], InteractionShape::y_label(1));
        LabeledOperator gap =
            in.p * LabeledOperator::identity(reduced.factors()) - reduced;
        check_slack(gap, sat_tol, "saturate_strategy");
        const double dy1 = static_cast<double>(shape.out_dim(1));
        const LabeledOperator lift =
            kron_identity_before(InteractionShape::y_label(1), shape.out_dim(1),
                                 (1.0 / dy1) * gap);
        out.levels[0] = in.levels[0] + lift;
    }
    for (std::size_t i = 2; i <= r; ++i) {
        const LabeledOperator grown = kron_identity_after(
            out.levels[i - 2], InteractionShape::x_label(i), shape.in_dim(i));
        const LabeledOperator reduced =
            partial_trace(in.levels[i - 1], InteractionShape::y_label(i));
        const LabeledOperator gap = grown - reduced;
        check_slack(gap, sat_tol, "saturate_strategy");
        const double dyi = static_cast<double>(shape.out_dim(i));
        LabeledOperator lift = kron_identity_before(InteractionShape::y_label(i),
                                                    shape.out_dim(i), (1.0 / dyi) * gap);
        lift = permute_factors(lift, shape.strategy_level_factors(i).labels());
        out.levels[i - 1] = in.levels[i - 1] + lift;
    }
    out.p = in.p;
    return out;
}

StrategyPairBlocks saturate_strategy_pair(const StrategyPairBlocks& in,
                                          const InteractionShape& shape, double tol) {
    const std::size_t r = shape.rounds();
    if (in.levels.size() != r)
        throw std::invalid_argument("saturate_strategy_pair: wrong level count");
    std::vector<LabeledOperator> all = in.levels;
    all.push_back(in.s0);
    all.push_back(in.s1);
    const double sat_tol = tol * blocks_scale(all);

    StrategyPairBlocks out = in;
    // Same lifts as the certificate saturation with p = 1 at the base.
    StrategyBlocks sb{in.levels, 1.0};
    const StrategyBlocks sat = saturate_strategy(sb, shape, tol);
    out.levels = sat.levels;
    {
        const LabeledOperator d = out.levels[r - 1] - in.s0 - in.s1;
        check_slack(d, sat_tol, "saturate_strategy_pair");
        const LabeledOperator half = 0.5 * d;
        out.s0 = in.s0 + half;
        out.s1 = in.s1 + half;
    }
    return out;
}

CoStrategyCertBlocks saturate_costrategy_cert(const CoStrategyCertBlocks& in,
                                              const InteractionShape& shape, double tol) {
    const std::size_t r = shape.rounds();
    if (in.levels.size() != r)
        throw std::invalid_argument("saturate_costrategy_cert: wrong level count");
    const double sat_tol = tol * std::max(blocks_scale(in.levels), 1.0);

    CoStrategyCertBlocks out = in;
    out.p = in.levels[0].matrix().trace().real();
    for (std::size_t i = 2; i <= r; ++i) {
        LabeledOperator grown = kron_identity_after(
            out.levels[i - 2], InteractionShape::y_label(i - 1), shape.out_dim(i - 1));
        const LabeledOperator reduced =
            partial_trace(in.levels[i - 1], InteractionShape::x_label(i));
        grown = permute_factors(grown, reduced.factors().labels());
        const LabeledOperator gap = grown - reduced;
        check_slack(gap, sat_tol, "saturate_costrategy_cert");
        const double dxi = static_cast<double>(shape.in_dim(i));
        LabeledOperator lift = kron_identity_after(gap, InteractionShape::x_label(i), dxi);
        lift = permute_factors((1.0 / dxi) * lift, shape.costrategy_level_factors(i).labels());
        out.levels[i - 1] = in.levels[i - 1] + lift;
    }
    LabeledOperator ext = kron_identity_after(out.levels[r - 1], InteractionShape::y_label(r),
                                              shape.out_dim(r));
    out.top = permute_factors(ext, shape.canonical_factors().labels());
    return out;
}

namespace {

SolveOptions to_solver_opts(const NormOptions& o) {
    SolveOptions s;
    s.tol_gap = o.tol_gap;
    s.tol_feas = o.tol_feas;
    s.max_iter = o.max_iter;
    return s;
}

double worst_ladder_residual(const LadderWitness& w) {
    double m = 0.0;
    for (const auto& r : w.residuals)
        if (r.name.rfind("ladder", 0) == 0) m = std::max(m, r.value);
    return m;
}

}  // namespace

NormResult strategy_norm(const LabeledOperator& x, const InteractionShape& shape,
                         const NormOptions& opts) {
    const SdpTriple triple = build_primal_triple(x, shape);
    SolveOptions sopts = to_solver_opts(opts);
    if (opts.warm_start) {
        auto [p0, q0] = primal_triple_starts(x, shape, triple);
        sopts.primal_start = std::move(p0);
        sopts.dual_start = std::move(q0);
    }
    const SdpSolution sol = solve(triple, sopts);
    if (sol.status == SolveStatus::numerical_failure)
        throw SolverError("strategy_norm: solver failed\n" + sol.diagnostics);

    const std::size_t r = shape.rounds();
    const FactorList canon = shape.canonical_factors();

    NormResult out;
    out.status = sol.status;
    out.iterations = sol.iterations;
    out.gap = sol.dual_value - sol.primal_value;
    out.value = std::max(0.0, 0.5 * (sol.primal_value + sol.dual_value));
    out.residuals = sol.feas_residuals;

    CoStrategyBlocks raw;
    raw.t0 = wrap(sol.primal.block("T0"), canon);
    raw.t1 = wrap(sol.primal.block("T1"), canon);
    for (std::size_t i = 1; i <= r; ++i)
        raw.levels.push_back(wrap(sol.primal.block(t_level(i)),
                                  shape.costrategy_level_factors(i)));
    const CoStrategyBlocks sat = saturate_costrategy(raw, shape);

    out.optimizer.shape = shape;
    out.optimizer.role = Role::costrategy;
    out.optimizer.outcomes.emplace("0", sat.t0);
    out.optimizer.outcomes.emplace("1", sat.t1);
    out.objective_drift =
        std::abs(inner_re(sat.t0 - sat.t1, x) - inner_re(raw.t0 - raw.t1, x));
    out.saturation_residual = worst_ladder_residual(validate_measuring(out.optimizer));

    StrategyBlocks draw;
    draw.p = sol.dual.block("C.tr")(0, 0).real();
    for (std::size_t i = 1; i <= r; ++i) {
        const std::string lbl = i == r ? std::string("C.top") : c_level(i + 1);
        draw.levels.push_back(wrap(sol.dual.block(lbl), shape.strategy_level_factors(i)));
    }
    const StrategyBlocks dsat = saturate_strategy(draw, shape);
    out.cert_p = dsat.p;
    if (dsat.p > 1e-9 * (1.0 + operator_norm(x))) {
        out.certificate = StrategyRep{(1.0 / dsat.p) * dsat.levels[r - 1], shape, Role::strategy};
    } else {
        out.certificate = trivial_strategy(shape);
    }
    out.saturation_residual = std::max(
        out.saturation_residual, worst_ladder_residual(validate_rep(out.certificate)));
    return out;
}

NormResult dual_strategy_norm(const LabeledOperator& x, const InteractionShape& shape,
                              const NormOptions& opts) {
    const SdpTriple triple = build_dual_triple(x, shape);
    SolveOptions sopts = to_solver_opts(opts);
    if (opts.warm_start) {
        auto [p0, q0] = dual_triple_starts(x, shape, triple);
        sopts.primal_start = std::move(p0);
        sopts.dual_start = std::move(q0);
    }
    const SdpSolution sol = solve(triple, sopts);
    if (sol.status == SolveStatus::numerical_failure)
        throw SolverError("dual_strategy_norm: solver failed\n" + sol.diagnostics);

    const std::size_t r = shape.rounds();
    const FactorList canon = shape.canonical_factors();

    NormResult out;
    out.status = sol.status;
    out.iterations = sol.iterations;
    out.gap = sol.dual_value - sol.primal_value;
    out.value = std::max(0.0, 0.5 * (sol.primal_value + sol.dual_value));
    out.residuals = sol.feas_residuals;

    StrategyPairBlocks raw;
    raw.s0 = wrap(sol.primal.block("S0"), canon);
    raw.s1 = wrap(sol.primal.block("S1"), canon);
    for (std::size_t i = 1; i <= r; ++i)
        raw.levels.push_back(wrap(sol.primal.block(s_level(i)),
                                  shape.strategy_level_factors(i)));
    const StrategyPairBlocks sat = saturate_strategy_pair(raw, shape);

    out.optimizer.shape = shape;
    out.optimizer.role = Role::strategy;
    out.optimizer.outcomes.emplace("0", sat.s0);
    out.optimizer.outcomes.emplace("1", sat.s1);
    out.objective_drift =
        std::abs(inner_re(sat.s0 - sat.s1, x) - inner_re(raw.s0 - raw.s1, x));
    out.saturation_residual = worst_ladder_residual(validate_measuring(out.optimizer));

    CoStrategyCertBlocks draw;
    draw.top = wrap(sol.dual.block("R.top"), canon);
    for (std::size_t i = 1; i <= r; ++i)
        draw.levels.push_back(wrap(sol.dual.block(r_level(i)),
                                   shape.costrategy_level_factors(i)));
    draw.p = draw.levels[0].matrix().trace().real();
    const CoStrategyCertBlocks dsat = saturate_costrategy_cert(draw, shape);
    out.cert_p = dsat.p;
    if (dsat.p > 1e-9 * (1.0 + operator_norm(x))) {
        out.certificate = StrategyRep{(1.0 / dsat.p) * dsat.top, shape, Role::costrategy};
    } else {
        out.certificate = trivial_costrategy(shape);
    }
    out.saturation_residual = std::max(
        out.saturation_residual, worst_ladder_residual(validate_rep(out.certificate)));
    return out;
}

MeasuringStrategy decompose_unit_ball(const LabeledOperator& x, const InteractionShape& shape,
                                      const NormOptions& opts) {
    const NormResult nr = strategy_norm(x, shape, opts);
    if (nr.value > 1.0 + 1e-8)
        throw DecomposeError("decompose_unit_ball: strategy norm " + std::to_string(nr.value) +
                                 " exceeds 1",
                             nr.value);
    const double p = std::min(1.0, nr.cert_p);
    const LabeledOperator filler = trivial_strategy(shape).op;
    const LabeledOperator s = p * nr.certificate.op + (1.0 - p) * filler;

    const LabeledOperator s0 = 0.5 * (s + x);
    const LabeledOperator s1 = s0 - x;

    MeasuringStrategy ms;
    ms.shape = shape;
    ms.role = Role::strategy;
    ms.outcomes.emplace("0", s0);
    ms.outcomes.emplace("1", s1);
    return ms;
}

MaxOutputResult max_output_probability(const MeasuringStrategy& ms, const std::string& outcome,
                                       const NormOptions& opts) {
    const auto it = ms.outcomes.find(outcome);
    if (it == ms.outcomes.end())
        throw std::invalid_argument("max_output_probability: unknown outcome '" + outcome + "'");
    MaxOutputResult out;
    out.norm = ms.role == Role::strategy ? strategy_norm(it->second, ms.shape, opts)
                                         : dual_strategy_norm(it->second, ms.shape, opts);
    out.value = out.norm.value;
    out.cert_p = out.norm.cert_p;
    out.certificate = out.norm.certificate;
    return out;
}

NormResult diamond_norm(const ComplexMatrix& choi, std::size_t in_dim, std::size_t out_dim,
                        const NormOptions& opts) {
    const InteractionShape shape({in_dim}, {out_dim});
    const LabeledOperator x(choi, shape.canonical_factors());
    return strategy_norm(x, shape, opts);
}

}  // namespace stratnorm
