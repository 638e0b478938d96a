#include "stratnorm/discrimination.hpp"

#include <algorithm>
#include <cmath>

namespace stratnorm {

ConvexStrategySet::ConvexStrategySet(std::vector<StrategyRep> v) : vertices(std::move(v)) {
    if (vertices.empty())
        throw std::invalid_argument("ConvexStrategySet: vertex list must be nonempty");
    for (const auto& s : vertices) {
        if (s.shape != vertices.front().shape || s.role != vertices.front().role)
            throw std::invalid_argument("ConvexStrategySet: mixed shapes or roles");
        const LadderWitness w = validate_rep(s);
        if (!w.accepted)
            throw std::invalid_argument("ConvexStrategySet: invalid vertex (" + w.worst_name() +
                                        " residual " + std::to_string(w.worst_value()) + ")");
    }
}

namespace {

std::string g_level(std::size_t i) { return "G." + std::to_string(i); }
std::string l_level(std::size_t i) { return "L." + std::to_string(i); }
std::string la_label(std::size_t i) { return "LA." + std::to_string(i); }
std::string mu_label(std::size_t j) { return "MU." + std::to_string(j); }

LabeledOperator wrap(const ComplexMatrix& m, const FactorList& f) {
    return LabeledOperator(m, f);
}

struct JointProblem {
    SdpTriple triple;
    std::size_t na = 0, nb = 0;
    // Delta operators entering the sandwich constraints.
    std::vector<ComplexMatrix> da, db;  // A_i - A_na, B_j - B_nb
    ComplexMatrix d0;                   // A_na - B_nb
};

// Joint SDP in the dual slot of a (Psi, A, B) triple:
//   minimize p over ladder levels G, weights lambda, mu with
//   -G_top <= sum_i lambda_i A_i - sum_j mu_j B_j <= G_top,
// where G_top is the role-appropriate p-scaled full-space ladder extension.
// The last weight of each set is eliminated (lambda_n = 1 - sum of others).
JointProblem build_joint(const ConvexStrategySet& a, const ConvexStrategySet& b) {
    const InteractionShape shape = a.shape();
    const Role role = a.role();
    const std::size_t r = shape.rounds();
    const std::size_t full = shape.out_total() * shape.in_total();
    const std::size_t na = a.vertices.size(), nb = b.vertices.size();

    JointProblem jp;
    jp.na = na;
    jp.nb = nb;
    for (std::size_t i = 0; i + 1 < na; ++i)
        jp.da.push_back(a.vertices[i].op.matrix() - a.vertices[na - 1].op.matrix());
    for (std::size_t j = 0; j + 1 < nb; ++j)
        jp.db.push_back(b.vertices[j].op.matrix() - b.vertices[nb - 1].op.matrix());
    jp.d0 = a.vertices[na - 1].op.matrix() - b.vertices[nb - 1].op.matrix();

    std::vector<FactorList> lvl(r + 1), slvl(r + 1);
    for (std::size_t i = 1; i <= r; ++i) {
        lvl[i] = shape.costrategy_level_factors(i);
        slvl[i] = shape.strategy_level_factors(i);
    }
    const FactorList canon = shape.canonical_factors();

    std::vector<std::pair<std::string, std::size_t>> qblocks;
    for (std::size_t i = r; i >= 1; --i)
        qblocks.push_back({g_level(i), role == Role::strategy ? slvl[i].total_dim()
                                                              : lvl[i].total_dim()});
    qblocks.push_back({"p", 1});
    for (std::size_t i = 0; i + 1 < na; ++i) qblocks.push_back({la_label(i + 1), 1});
    for (std::size_t j = 0; j + 1 < nb; ++j) qblocks.push_back({mu_label(j + 1), 1});

    std::vector<std::pair<std::string, std::size_t>> pblocks = {{"U0", full}, {"U1", full}};
    if (role == Role::strategy) {
        for (std::size_t i = r; i >= 2; --i) pblocks.push_back({l_level(i), lvl[i].total_dim()});
        pblocks.push_back({l_level(1), shape.in_dim(1)});
    } else {
        for (std::size_t i = r; i >= 2; --i) pblocks.push_back({l_level(i), slvl[i - 1].total_dim()});
        pblocks.push_back({l_level(1), 1});
    }
    pblocks.push_back({"WA", 1});
    pblocks.push_back({"WB", 1});

    SdpTriple& t = jp.triple;
    t.primal_structure = BlockStructure(std::move(pblocks));
    t.dual_structure = BlockStructure(std::move(qblocks));

    t.A = BlockOperator(t.primal_structure);
    t.A.block("U0") = jp.d0;
    t.A.block("U1") = cplx(-1.0, 0.0) * jp.d0;
    t.A.block("WA")(0, 0) = -1.0;
    t.A.block("WB")(0, 0) = -1.0;
    t.B = BlockOperator(t.dual_structure);
    t.B.block("p")(0, 0) = 1.0;

    const auto da = jp.da;
    const auto db = jp.db;

    if (role == Role::strategy) {
        t.psi_adj = [shape, canon, lvl, slvl, r, da, db, na, nb,
                     ps = t.primal_structure](const BlockOperator& q) {
            BlockOperator out(ps);
            ComplexMatrix dlin(canon.total_dim(), canon.total_dim());
            for (std::size_t i = 0; i + 1 < na; ++i)
                dlin += q.block(la_label(i + 1))(0, 0).real() * da[i];
            for (std::size_t j = 0; j + 1 < nb; ++j)
                dlin -= q.block(mu_label(j + 1))(0, 0).real() * db[j];
            out.block("U0") = q.block(g_level(r)) - dlin;
            out.block("U1") = q.block(g_level(r)) + dlin;
            for (std::size_t i = r; i >= 2; --i) {
                const LabeledOperator grown =
                    kron(wrap(q.block(g_level(i - 1)), slvl[i - 1]),
                         LabeledOperator::identity(
                             FactorList({{InteractionShape::x_label(i), shape.in_dim(i)}})));
                const LabeledOperator reduced =
                    partial_trace(wrap(q.block(g_level(i)), slvl[i]),
                                  InteractionShape::y_label(i));
                out.block(l_level(i)) = grown.matrix() - reduced.matrix();
            }
            {
                const LabeledOperator reduced =
                    partial_trace(wrap(q.block(g_level(1)), slvl[1]),
                                  InteractionShape::y_label(1));
                ComplexMatrix m = cplx(-1.0, 0.0) * reduced.matrix();
                const double p = q.block("p")(0, 0).real();
                for (std::size_t k = 0; k < m.rows(); ++k) m(k, k) += p;
                out.block(l_level(1)) = std::move(m);
            }
            double suml = 0.0, summ = 0.0;
            for (std::size_t i = 0; i + 1 < na; ++i) suml += q.block(la_label(i + 1))(0, 0).real();
            for (std::size_t j = 0; j + 1 < nb; ++j) summ += q.block(mu_label(j + 1))(0, 0).real();
            out.block("WA")(0, 0) = -suml;
            out.block("WB")(0, 0) = -summ;
            return out;
        };

        t.psi = [shape, canon, lvl, slvl, r, da, db, na, nb,
                 qs = t.dual_structure](const BlockOperator& p) {
            BlockOperator out(qs);
            for (std::size_t i = r; i >= 1; --i) {
                ComplexMatrix m(slvl[i].total_dim(), slvl[i].total_dim());
                if (i == r) m = p.block("U0") + p.block("U1");
                if (i < r) {
                    const LabeledOperator vnext = wrap(p.block(l_level(i + 1)), lvl[i + 1]);
                    m += partial_trace(vnext, InteractionShape::x_label(i + 1)).matrix();
                }
                // subtract the kron-adjoint of this level's own constraint
                LabeledOperator vi =
                    i == 1 ? wrap(p.block(l_level(1)),
                                  FactorList({{InteractionShape::x_label(1), shape.in_dim(1)}}))
                           : wrap(p.block(l_level(i)), lvl[i]);
                LabeledOperator grown = kron(
                    vi, LabeledOperator::identity(
                            FactorList({{InteractionShape::y_label(i), shape.out_dim(i)}})));
                grown = permute_factors(grown, slvl[i].labels());
                m -= grown.matrix();
                out.block(g_level(i)) = std::move(m);
            }
            out.block("p")(0, 0) = wrap(p.block(l_level(1)),
                                        FactorList({{InteractionShape::x_label(1),
                                                     shape.in_dim(1)}}))
                                       .matrix()
                                       .trace();
            const ComplexMatrix diff = p.block("U1") - p.block("U0");
            const LabeledOperator diff_l = wrap(diff, canon);
            for (std::size_t i = 0; i + 1 < na; ++i)
                out.block(la_label(i + 1))(0, 0) =
                    inner_re(wrap(da[i], canon), diff_l) - p.block("WA")(0, 0).real();
            for (std::size_t j = 0; j + 1 < nb; ++j)
                out.block(mu_label(j + 1))(0, 0) =
                    -inner_re(wrap(db[j], canon), diff_l) - p.block("WB")(0, 0).real();
            return out;
        };
    } else {
        t.psi_adj = [shape, canon, lvl, slvl, r, da, db, na, nb,
                     ps = t.primal_structure](const BlockOperator& q) {
            BlockOperator out(ps);
            ComplexMatrix dlin(canon.total_dim(), canon.total_dim());
            for (std::size_t i = 0; i + 1 < na; ++i)
                dlin += q.block(la_label(i + 1))(0, 0).real() * da[i];
            for (std::size_t j = 0; j + 1 < nb; ++j)
                dlin -= q.block(mu_label(j + 1))(0, 0).real() * db[j];
            LabeledOperator top = kron(
                wrap(q.block(g_level(r)), lvl[r]),
                LabeledOperator::identity(
                    FactorList({{InteractionShape::y_label(r), shape.out_dim(r)}})));
            top = permute_factors(top, canon.labels());
            out.block("U0") = top.matrix() - dlin;
            out.block("U1") = top.matrix() + dlin;
            for (std::size_t i = r; i >= 2; --i) {
                LabeledOperator grown = kron(
                    wrap(q.block(g_level(i - 1)), lvl[i - 1]),
                    LabeledOperator::identity(
                        FactorList({{InteractionShape::y_label(i - 1), shape.out_dim(i - 1)}})));
                const LabeledOperator reduced =
                    partial_trace(wrap(q.block(g_level(i)), lvl[i]),
                                  InteractionShape::x_label(i));
                grown = permute_factors(grown, reduced.factors().labels());
                out.block(l_level(i)) = grown.matrix() - reduced.matrix();
            }
            out.block(l_level(1))(0, 0) =
                q.block("p")(0, 0).real() - wrap(q.block(g_level(1)), lvl[1]).matrix().trace();
            double suml = 0.0, summ = 0.0;
            for (std::size_t i = 0; i + 1 < na; ++i) suml += q.block(la_label(i + 1))(0, 0).real();
            for (std::size_t j = 0; j + 1 < nb; ++j) summ += q.block(mu_label(j + 1))(0, 0).real();
            out.block("WA")(0, 0) = -suml;
            out.block("WB")(0, 0) = -summ;
            return out;
        };

        t.psi = [shape, canon, lvl, slvl, r, da, db, na, nb,
                 qs = t.dual_structure](const BlockOperator& p) {
            BlockOperator out(qs);
            const LabeledOperator u0 = wrap(p.block("U0"), canon);
            const LabeledOperator u1 = wrap(p.block("U1"), canon);
            for (std::size_t i = r; i >= 1; --i) {
                ComplexMatrix m(lvl[i].total_dim(), lvl[i].total_dim());
                if (i == r) {
                    m = partial_trace(u0, InteractionShape::y_label(r)).matrix() +
                        partial_trace(u1, InteractionShape::y_label(r)).matrix();
                } else {
                    const LabeledOperator vnext = wrap(p.block(l_level(i + 1)), slvl[i]);
                    m = partial_trace(vnext, InteractionShape::y_label(i)).matrix();
                }
                if (i >= 2) {
                    const LabeledOperator vi = wrap(p.block(l_level(i)), slvl[i - 1]);
                    const LabeledOperator grown = kron(
                        vi, LabeledOperator::identity(
                                FactorList({{InteractionShape::x_label(i), shape.in_dim(i)}})));
                    m -= grown.matrix();
                } else {
                    const double v1 = p.block(l_level(1))(0, 0).real();
                    for (std::size_t k = 0; k < m.rows(); ++k) m(k, k) -= v1;
                }
                out.block(g_level(i)) = std::move(m);
            }
            out.block("p")(0, 0) = p.block(l_level(1))(0, 0).real();
            const ComplexMatrix diff = p.block("U1") - p.block("U0");
            const LabeledOperator diff_l = wrap(diff, canon);
            for (std::size_t i = 0; i + 1 < na; ++i)
                out.block(la_label(i + 1))(0, 0) =
                    inner_re(wrap(da[i], canon), diff_l) - p.block("WA")(0, 0).real();
            for (std::size_t j = 0; j + 1 < nb; ++j)
                out.block(mu_label(j + 1))(0, 0) =
                    -inner_re(wrap(db[j], canon), diff_l) - p.block("WB")(0, 0).real();
            return out;
        };
    }
    return jp;
}

std::pair<BlockOperator, BlockOperator> joint_starts(const ConvexStrategySet& a,
                                                     const ConvexStrategySet& b,
                                                     const JointProblem& jp) {
    const InteractionShape shape = a.shape();
    const Role role = a.role();
    const std::size_t r = shape.rounds();
    const SdpTriple& t = jp.triple;

    double dmax = 1.0;
    for (const auto& v : a.vertices) dmax = std::max(dmax, operator_norm(v.op));
    for (const auto& v : b.vertices) dmax = std::max(dmax, operator_norm(v.op));
    const double kappa = 1.25;

    BlockOperator q(t.dual_structure);
    double c = kappa * 2.0 * dmax + 1.0;
    q.block(g_level(r)) =
        c * ComplexMatrix::identity(t.dual_structure.dim(t.dual_structure.index_of(g_level(r))));
    for (std::size_t i = r; i >= 2; --i) {
        c *= kappa * static_cast<double>(role == Role::strategy ? shape.out_dim(i)
                                                                : shape.in_dim(i));
        q.block(g_level(i - 1)) = c * ComplexMatrix::identity(t.dual_structure.dim(
                                          t.dual_structure.index_of(g_level(i - 1))));
    }
    q.block("p")(0, 0) = c * kappa *
                         static_cast<double>(role == Role::strategy ? shape.out_dim(1)
                                                                    : shape.in_dim(1));
    for (std::size_t i = 0; i + 1 < jp.na; ++i)
        q.block(la_label(i + 1))(0, 0) = 1.0 / (2.0 * static_cast<double>(jp.na));
    for (std::size_t j = 0; j + 1 < jp.nb; ++j)
        q.block(mu_label(j + 1))(0, 0) = 1.0 / (2.0 * static_cast<double>(jp.nb));

    BlockOperator p(t.primal_structure);
    std::vector<double> gamma(r + 1, 0.0);
    if (role == Role::strategy) {
        gamma[1] = 0.5 / static_cast<double>(shape.in_dim(1));
        for (std::size_t i = 2; i <= r; ++i)
            gamma[i] = gamma[i - 1] / (2.0 * static_cast<double>(shape.in_dim(i)));
    } else {
        gamma[1] = 0.5;
        for (std::size_t i = 2; i <= r; ++i)
            gamma[i] = gamma[i - 1] / (2.0 * static_cast<double>(shape.out_dim(i - 1)));
    }
    for (std::size_t i = 1; i <= r; ++i) {
        const std::size_t d = t.primal_structure.dim(t.primal_structure.index_of(l_level(i)));
        p.block(l_level(i)) = gamma[i] * ComplexMatrix::identity(d);
    }
    std::size_t max_out = 1;
    for (std::size_t i = 1; i <= r; ++i) max_out = std::max(max_out, shape.out_dim(i));
    const double gtop = gamma[r] / (4.0 * static_cast<double>(max_out));
    p.block("U0") = gtop * ComplexMatrix::identity(t.primal_structure.dim(0));
    p.block("U1") = p.block("U0");
    p.block("WA")(0, 0) = 1.0;
    p.block("WB")(0, 0) = 1.0;
    return {std::move(p), std::move(q)};
}

std::vector<double> recover_weights(const BlockOperator& q, std::size_t n,
                                    const std::string& prefix) {
    std::vector<double> w(n, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        w[i] = std::max(0.0, q.block(prefix + "." + std::to_string(i + 1))(0, 0).real());
        sum += w[i];
    }
    w[n - 1] = std::max(0.0, 1.0 - sum);
    double total = 0.0;
    for (double v : w) total += v;
    for (double& v : w) v /= total;
    return w;
}

StrategyRep mix_vertices(const ConvexStrategySet& s, const std::vector<double>& w) {
    LabeledOperator op = w[0] * s.vertices[0].op;
    for (std::size_t i = 1; i < s.vertices.size(); ++i) op = op + w[i] * s.vertices[i].op;
    return StrategyRep{std::move(op), s.shape(), s.role()};
}

}  // namespace

namespace {

struct SolvedJoint {
    MinDistanceResult md;
    MeasuringStrategy separator;  // saturated, from the joint primal blocks
};

// Solves the joint SDP once. The dual side carries the distance and the
// minimizing weights; the primal side carries a hyperplane whose vertex
// margins dominate the distance by linear-programming feasibility, which the
// ladder saturation turns into a valid measuring (co-)strategy with the
// outcome difference preserved.
SolvedJoint solve_joint(const ConvexStrategySet& a, const ConvexStrategySet& b,
                        const NormOptions& opts) {
    if (a.shape() != b.shape())
        throw std::invalid_argument("min_distance: shape mismatch between the sets");
    if (a.role() != b.role())
        throw std::invalid_argument("min_distance: both sets must share one role");
    const InteractionShape shape = a.shape();
    const Role role = a.role();
    const std::size_t r = shape.rounds();

    const JointProblem jp = build_joint(a, b);
    SolveOptions sopts;
    sopts.tol_gap = opts.tol_gap;
    sopts.tol_feas = opts.tol_feas;
    sopts.max_iter = opts.max_iter;
    if (opts.warm_start) {
        auto [p0, q0] = joint_starts(a, b, jp);
        sopts.primal_start = std::move(p0);
        sopts.dual_start = std::move(q0);
    }
    const SdpSolution sol = solve(jp.triple, sopts);
    if (sol.status == SolveStatus::numerical_failure)
        throw SolverError("min_distance: solver failed\n" + sol.diagnostics);

    SolvedJoint out;
    out.md.status = sol.status;
    out.md.iterations = sol.iterations;
    out.md.gap = sol.dual_value - sol.primal_value;
    out.md.distance = std::max(0.0, 0.5 * (sol.primal_value + sol.dual_value));
    out.md.weights_a = recover_weights(sol.dual, a.vertices.size(), "LA");
    out.md.weights_b = recover_weights(sol.dual, b.vertices.size(), "MU");
    out.md.closest_a = mix_vertices(a, out.md.weights_a);
    out.md.closest_b = mix_vertices(b, out.md.weights_b);

    const FactorList canon = shape.canonical_factors();
    out.separator.shape = shape;
    out.separator.role = opposite(role);
    if (role == Role::strategy) {
        CoStrategyBlocks raw;
        raw.t0 = wrap(sol.primal.block("U0"), canon);
        raw.t1 = wrap(sol.primal.block("U1"), canon);
        for (std::size_t i = 1; i <= r; ++i)
            raw.levels.push_back(
                wrap(sol.primal.block(l_level(i)), shape.costrategy_level_factors(i)));
        const CoStrategyBlocks sat = saturate_costrategy(raw, shape);
        out.separator.outcomes.emplace("0", sat.t0);
        out.separator.outcomes.emplace("1", sat.t1);
    } else {
        StrategyPairBlocks raw;
        raw.s0 = wrap(sol.primal.block("U0"), canon);
        raw.s1 = wrap(sol.primal.block("U1"), canon);
        for (std::size_t i = 1; i + 1 <= r; ++i)
            raw.levels.push_back(
                wrap(sol.primal.block(l_level(i + 1)), shape.strategy_level_factors(i)));
        raw.levels.push_back(raw.s0 + raw.s1);
        const StrategyPairBlocks sat = saturate_strategy_pair(raw, shape);
        out.separator.outcomes.emplace("0", sat.s0);
        out.separator.outcomes.emplace("1", sat.s1);
    }
    return out;
}

}  // namespace

MinDistanceResult min_distance(const ConvexStrategySet& a, const ConvexStrategySet& b,
                               const NormOptions& opts) {
    return solve_joint(a, b, opts).md;
}

double SeparatorResult::min_margin() const {
    double m = 1e300;
    for (const auto& row : margins)
        for (double v : row) m = std::min(m, v);
    return margins.empty() ? 0.0 : m;
}

namespace {

std::vector<std::vector<double>> margin_matrix(const MeasuringStrategy& sep,
                                               const ConvexStrategySet& a,
                                               const ConvexStrategySet& b) {
    const LabeledOperator diff = sep.outcomes.at("0") - sep.outcomes.at("1");
    std::vector<std::vector<double>> m(a.vertices.size(),
                                       std::vector<double>(b.vertices.size(), 0.0));
    for (std::size_t i = 0; i < a.vertices.size(); ++i)
        for (std::size_t j = 0; j < b.vertices.size(); ++j)
            m[i][j] = inner_re(diff, a.vertices[i].op - b.vertices[j].op);
    return m;
}

SeparatorResult attempt_separator(const ConvexStrategySet& a, const ConvexStrategySet& b,
                                  const NormOptions& opts) {
    SeparatorResult out;
    const InteractionShape shape = a.shape();
    const Role role = a.role();

    const SolvedJoint joint = solve_joint(a, b, opts);
    out.distance = joint.md.distance;
    out.weights_a = joint.md.weights_a;
    out.weights_b = joint.md.weights_b;

    double vertex_norm = 0.0;
    for (const auto& v : a.vertices) vertex_norm = std::max(vertex_norm, operator_norm(v.op));
    for (const auto& v : b.vertices) vertex_norm = std::max(vertex_norm, operator_norm(v.op));

    if (joint.md.distance <= 1e-7 * (1.0 + vertex_norm)) {
        // Coin flip: both outcomes are the identity over twice the dimension
        // that normalizes the trivial object of the opposite role.
        const double denom = role == Role::strategy
                                 ? 2.0 * static_cast<double>(shape.in_total())
                                 : 2.0 * static_cast<double>(shape.out_total());
        const LabeledOperator half =
            (1.0 / denom) * LabeledOperator::identity(shape.canonical_factors());
        out.separator.shape = shape;
        out.separator.role = opposite(role);
        out.separator.outcomes.emplace("0", half);
        out.separator.outcomes.emplace("1", half);
        out.margins = margin_matrix(out.separator, a, b);
        out.hyperplane = LabeledOperator::zero(shape.canonical_factors());
        out.hyperplane_alpha = 0.0;
        return out;
    }

    out.separator = joint.separator;
    out.margins = margin_matrix(out.separator, a, b);
    out.hyperplane = out.separator.outcomes.at("0") - out.separator.outcomes.at("1");
    out.hyperplane_alpha = joint.md.distance;
    return out;
}

}  // namespace

SeparatorResult separator(const ConvexStrategySet& a, const ConvexStrategySet& b,
                          const NormOptions& opts) {
    SeparatorResult out = attempt_separator(a, b, opts);
    const double tol = std::min(1e-6, 1e-6 * (1.0 + out.distance));
    if (out.min_margin() >= out.distance - tol) return out;

    NormOptions tight = opts;
    tight.tol_gap = opts.tol_gap / 100.0;
    tight.tol_feas = opts.tol_feas / 100.0;
    SeparatorResult retry = attempt_separator(a, b, tight);
    if (retry.min_margin() >= retry.distance - tol) return retry;

    retry.degenerate = true;
    double worst = 1e300;
    std::size_t wi = 0, wj = 0;
    for (std::size_t i = 0; i < retry.margins.size(); ++i)
        for (std::size_t j = 0; j < retry.margins[i].size(); ++j)
            if (retry.margins[i][j] < worst) {
                worst = retry.margins[i][j];
                wi = i;
                wj = j;
            }
    retry.note = "margin verification failed after retry at vertex pair (" + std::to_string(wi) +
                 "," + std::to_string(wj) + "): margin " + std::to_string(worst) +
                 " < distance " + std::to_string(retry.distance) +
                 "; instance may have a degenerate minimizer";
    return retry;
}

double guessing_game(const MeasuringStrategy& sep, const StrategyRep& s0, const StrategyRep& s1) {
    if (sep.outcomes.size() != 2)
        throw std::invalid_argument("guessing_game: separator must have exactly two outcomes");
    if (s0.shape != s1.shape || s0.shape != sep.shape)
        throw std::invalid_argument("guessing_game: shape mismatch");
    if (s0.role != s1.role || sep.role != opposite(s0.role))
        throw std::invalid_argument("guessing_game: separator role must oppose the strategies");
    auto it = sep.outcomes.begin();
    const LabeledOperator& t0 = it->second;
    const LabeledOperator& t1 = std::next(it)->second;
    return 0.5 + 0.25 * inner_re(t0 - t1, s0.op - s1.op);
}

}  // namespace stratnorm
