#include "stratnorm/block_sdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stratnorm/rng.hpp"

namespace stratnorm {

BlockStructure::BlockStructure(std::vector<std::pair<std::string, std::size_t>> b)
    : blocks(std::move(b)) {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].second < 1)
            throw std::invalid_argument("BlockStructure: block dims must be >= 1");
        for (std::size_t j = i + 1; j < blocks.size(); ++j)
            if (blocks[i].first == blocks[j].first)
                throw std::invalid_argument("BlockStructure: duplicate label '" +
                                            blocks[i].first + "'");
    }
}

std::size_t BlockStructure::index_of(const std::string& label) const {
    for (std::size_t k = 0; k < blocks.size(); ++k)
        if (blocks[k].first == label) return k;
    throw std::invalid_argument("BlockStructure: unknown label '" + label + "'");
}

std::size_t BlockStructure::total_dim() const {
    std::size_t d = 0;
    for (const auto& b : blocks) d += b.second;
    return d;
}

std::size_t BlockStructure::hvec_dim() const {
    std::size_t d = 0;
    for (const auto& b : blocks) d += b.second * b.second;
    return d;
}

BlockOperator::BlockOperator(BlockStructure s) : s_(std::move(s)) {
    for (const auto& b : s_.blocks) b_.emplace_back(b.second, b.second);
}

BlockOperator::BlockOperator(BlockStructure s, std::vector<ComplexMatrix> blocks)
    : s_(std::move(s)), b_(std::move(blocks)) {
    if (b_.size() != s_.count())
        throw std::invalid_argument("BlockOperator: wrong block count");
    for (std::size_t k = 0; k < b_.size(); ++k)
        if (!b_[k].square() || b_[k].rows() != s_.dim(k))
            throw std::invalid_argument("BlockOperator: block dim mismatch at '" +
                                        s_.blocks[k].first + "'");
}

BlockOperator BlockOperator::identity(const BlockStructure& s, double scale) {
    BlockOperator o(s);
    for (std::size_t k = 0; k < o.count(); ++k)
        o.b_[k] = scale * ComplexMatrix::identity(s.dim(k));
    return o;
}

BlockOperator& BlockOperator::operator+=(const BlockOperator& o) {
    if (s_ != o.s_) throw std::invalid_argument("BlockOperator: structure mismatch");
    for (std::size_t k = 0; k < b_.size(); ++k) b_[k] += o.b_[k];
    return *this;
}

BlockOperator& BlockOperator::operator-=(const BlockOperator& o) {
    if (s_ != o.s_) throw std::invalid_argument("BlockOperator: structure mismatch");
    for (std::size_t k = 0; k < b_.size(); ++k) b_[k] -= o.b_[k];
    return *this;
}

BlockOperator& BlockOperator::operator*=(double c) {
    for (auto& b : b_) b *= cplx(c, 0.0);
    return *this;
}

double BlockOperator::inner(const BlockOperator& o) const {
    if (s_ != o.s_) throw std::invalid_argument("BlockOperator: structure mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < b_.size(); ++k) {
        const auto& a = b_[k].entries();
        const auto& b = o.b_[k].entries();
        for (std::size_t i = 0; i < a.size(); ++i)
            s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    }
    return s;
}

double BlockOperator::frobenius_norm() const { return std::sqrt(std::max(0.0, inner(*this))); }

double BlockOperator::max_abs() const {
    double m = 0.0;
    for (const auto& b : b_) m = std::max(m, b.max_abs());
    return m;
}

void BlockOperator::hermitize() {
    for (auto& b : b_) b.hermitize();
}

double BlockOperator::max_hermiticity_defect() const {
    double m = 0.0;
    for (const auto& b : b_) m = std::max(m, b.hermiticity_defect());
    return m;
}

double BlockOperator::psd_residual() const {
    double m = 0.0;
    for (const auto& b : b_) m = std::max(m, stratnorm::psd_residual(b));
    return m;
}

double BlockOperator::positive_part_norm() const {
    double m = 0.0;
    for (const auto& b : b_) {
        const auto e = herm_eig(b);
        if (!e.values.empty()) m = std::max(m, std::max(0.0, e.values.front()));
    }
    return m;
}

double check_adjoint(const SdpTriple& t, int probes, std::uint64_t seed) {
    double worst = 0.0;
    for (int k = 0; k < probes; ++k) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        BlockOperator tp(t.primal_structure), sp(t.dual_structure);
        for (std::size_t b = 0; b < tp.count(); ++b)
            tp.block(b) = rng.gaussian_hermitian(t.primal_structure.dim(b));
        for (std::size_t b = 0; b < sp.count(); ++b)
            sp.block(b) = rng.gaussian_hermitian(t.dual_structure.dim(b));
        const double lhs = t.psi(tp).inner(sp);
        const double rhs = tp.inner(t.psi_adj(sp));
        const double scale = tp.frobenius_norm() * sp.frobenius_norm() + 1e-300;
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Interior-point solver.
//
// The pair is handled in equality standard form over the product cone
// K = (P-blocks) x (slack blocks), with
//   Aop(P, Z) = Psi(P) + Z  = B,   objective <diag(A,0), (P,Z)>,
// dual variable y in Her(dual_structure) and dual slack
//   S = Aop*(y) - diag(A,0) = diag(Psi*(y) - A, y).
// Nesterov-Todd scaling with a Mehrotra predictor-corrector step.
// ---------------------------------------------------------------------------

namespace {

using KOp = std::vector<ComplexMatrix>;  // blocks over primal_structure ++ dual_structure

struct Cone {
    const SdpTriple& t;
    std::size_t np, nz;  // block counts

    explicit Cone(const SdpTriple& tr)
        : t(tr), np(tr.primal_structure.count()), nz(tr.dual_structure.count()) {}

    std::size_t count() const { return np + nz; }
    std::size_t dim(std::size_t k) const {
        return k < np ? t.primal_structure.dim(k) : t.dual_structure.dim(k - np);
    }
    std::size_t total_dim() const {
        std::size_t d = 0;
        for (std::size_t k = 0; k < count(); ++k) d += dim(k);
        return d;
    }

    KOp make(double scale = 0.0) const {
        KOp x;
        for (std::size_t k = 0; k < count(); ++k) {
            ComplexMatrix m(dim(k), dim(k));
            if (scale != 0.0)
                for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) = scale;
            x.push_back(std::move(m));
        }
        return x;
    }

    BlockOperator primal_part(const KOp& x) const {
        std::vector<ComplexMatrix> b(x.begin(), x.begin() + np);
        return BlockOperator(t.primal_structure, std::move(b));
    }
    BlockOperator slack_part(const KOp& x) const {
        std::vector<ComplexMatrix> b(x.begin() + np, x.end());
        return BlockOperator(t.dual_structure, std::move(b));
    }

    // Aop(X) = Psi(P) + Z
    BlockOperator forward(const KOp& x) const {
        BlockOperator out = t.psi(primal_part(x));
        for (std::size_t k = 0; k < nz; ++k) out.block(k) += x[np + k];
        out.hermitize();
        return out;
    }

    // Aop*(y) = (Psi*(y), y)
    KOp adjoint(const BlockOperator& y) const {
        const BlockOperator py = t.psi_adj(y);
        KOp out;
        out.reserve(count());
        for (std::size_t k = 0; k < np; ++k) out.push_back(py.block(k));
        for (std::size_t k = 0; k < nz; ++k) out.push_back(y.block(k));
        for (auto& m : out) m.hermitize();
        return out;
    }
};

double kop_inner(const KOp& a, const KOp& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto& x = a[k].entries();
        const auto& y = b[k].entries();
        for (std::size_t i = 0; i < x.size(); ++i)
            s += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    }
    return s;
}

double kop_maxabs(const KOp& a) {
    double m = 0.0;
    for (const auto& b : a) m = std::max(m, b.max_abs());
    return m;
}

void kop_axpy(KOp& y, double alpha, const KOp& x) {
    for (std::size_t k = 0; k < y.size(); ++k) {
        auto& ye = y[k].entries();
        const auto& xe = x[k].entries();
        for (std::size_t i = 0; i < ye.size(); ++i) ye[i] += alpha * xe[i];
    }
}

ComplexMatrix eig_power(const EigResult& e, double p, double floor_val) {
    const std::size_t n = e.values.size();
    ComplexMatrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = std::max(e.values[k], floor_val);
        const double fv = std::pow(lam, p);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = e.vectors(i, k);
            if (vik == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) r(i, j) += fv * vik * std::conj(e.vectors(j, k));
        }
    }
    r.hermitize();
    return r;
}

struct Scaling {
    ComplexMatrix r, rinv;      // W = R^2, so W M W = R^2 M R^2
    ComplexMatrix lam;          // R S R = R^{-1} X R^{-1}
    EigResult lam_eig;
};

bool compute_scaling(const ComplexMatrix& x, const ComplexMatrix& s, Scaling& out) {
    const EigResult ex = herm_eig(x);
    if (ex.values.empty() || ex.values.front() <= 0.0) return false;
    const double fx = 1e-14 * ex.values.front();
    const ComplexMatrix xh = eig_power(ex, 0.5, fx);

    ComplexMatrix m = xh * s * xh;
    m.hermitize();
    const EigResult em = herm_eig(m);
    if (em.values.empty() || em.values.front() <= 0.0) return false;
    const double fm = 1e-14 * em.values.front();
    ComplexMatrix w = xh * eig_power(em, -0.5, fm) * xh;
    w.hermitize();

    const EigResult ew = herm_eig(w);
    if (ew.values.empty() || ew.values.front() <= 0.0) return false;
    const double fw = 1e-14 * ew.values.front();
    out.r = eig_power(ew, 0.5, fw);
    out.rinv = eig_power(ew, -0.5, fw);
    out.lam = out.r * s * out.r;
    out.lam.hermitize();
    out.lam_eig = herm_eig(out.lam);
    return true;
}

// W M W per block, with W = R^2.
KOp scale_wmw(const std::vector<Scaling>& sc, const KOp& m) {
    KOp out;
    out.reserve(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) {
        ComplexMatrix w = sc[k].r * sc[k].r;
        ComplexMatrix v = w * m[k] * w;
        v.hermitize();
        out.push_back(std::move(v));
    }
    return out;
}

// Largest step alpha with X + alpha D >= 0 (X > 0), capped by the caller.
double max_step(const ComplexMatrix& x, const ComplexMatrix& d) {
    ComplexMatrix l;
    ComplexMatrix xr = x;
    double shift = 0.0;
    for (int attempt = 0; attempt < 3 && !cholesky(xr, l); ++attempt) {
        shift = (shift == 0.0) ? 1e-14 * (1.0 + x.max_abs()) : shift * 100.0;
        xr = x;
        for (std::size_t i = 0; i < xr.rows(); ++i) xr(i, i) += shift;
    }
    ComplexMatrix y = forward_subst(l, d);
    ComplexMatrix tmat = forward_subst(l, y.adjoint()).adjoint();
    tmat.hermitize();
    const EigResult e = herm_eig(tmat);
    const double lmin = e.values.empty() ? 0.0 : e.values.back();
    if (lmin >= -1e-14) return 1e30;
    return -1.0 / lmin;
}

double kop_max_step(const KOp& x, const KOp& d) {
    double a = 1e30;
    for (std::size_t k = 0; k < x.size(); ++k) a = std::min(a, max_step(x[k], d[k]));
    return a;
}

// Cholesky factor of the Schur matrix with escalating diagonal
// regularization; solves run two rounds of iterative refinement against the
// unregularized matrix.
struct SchurFactor {
    const std::vector<double>* m = nullptr;
    std::vector<double> l;
    std::size_t n = 0;
    double reg = 0.0;
    bool ok = false;

    bool factor(const std::vector<double>& matrix, std::size_t dim) {
        m = &matrix;
        n = dim;
        double maxdiag = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            maxdiag = std::max(maxdiag, std::abs(matrix[i * n + i]));
        reg = 0.0;
        for (int attempt = 0; attempt < 6; ++attempt) {
            l = matrix;
            if (reg > 0.0)
                for (std::size_t i = 0; i < n; ++i) l[i * n + i] += reg;
            ok = true;
            for (std::size_t j = 0; j < n && ok; ++j) {
                double d = l[j * n + j];
                for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
                if (!(d > 0.0)) {
                    ok = false;
                    break;
                }
                const double ljj = std::sqrt(d);
                l[j * n + j] = ljj;
                for (std::size_t i = j + 1; i < n; ++i) {
                    double s = l[i * n + j];
                    for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
                    l[i * n + j] = s / ljj;
                }
            }
            if (ok) return true;
            reg = (reg == 0.0) ? 1e-12 * (1.0 + maxdiag) : reg * 100.0;
        }
        return false;
    }

    void backsolve(std::vector<double>& b) const {
        for (std::size_t i = 0; i < n; ++i) {
            double s = b[i];
            for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
            b[i] = s / l[i * n + i];
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double s = b[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= l[k * n + ii] * b[k];
            b[ii] = s / l[ii * n + ii];
        }
    }

    std::vector<double> solve(const std::vector<double>& rhs) const {
        std::vector<double> x = rhs;
        backsolve(x);
        std::vector<double> res(n);
        for (int round = 0; round < 2; ++round) {
            for (std::size_t i = 0; i < n; ++i) {
                double s = rhs[i];
                const double* row = &(*m)[i * n];
                for (std::size_t k = 0; k < n; ++k) s -= row[k] * x[k];
                res[i] = s;
            }
            backsolve(res);
            for (std::size_t i = 0; i < n; ++i) x[i] += res[i];
        }
        return x;
    }
};

const double kSqrt2 = 1.4142135623730950488;

void hvec(const BlockOperator& op, std::vector<double>& out) {
    std::size_t pos = 0;
    for (std::size_t b = 0; b < op.count(); ++b) {
        const ComplexMatrix& m = op.block(b);
        const std::size_t d = m.rows();
        for (std::size_t i = 0; i < d; ++i) out[pos++] = m(i, i).real();
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) {
                out[pos++] = kSqrt2 * m(i, j).real();
                out[pos++] = kSqrt2 * m(i, j).imag();
            }
    }
}

void unhvec(const std::vector<double>& v, BlockOperator& op) {
    std::size_t pos = 0;
    for (std::size_t b = 0; b < op.count(); ++b) {
        ComplexMatrix& m = op.block(b);
        const std::size_t d = m.rows();
        for (std::size_t i = 0; i < d; ++i) m(i, i) = v[pos++];
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) {
                const double re = v[pos++] / kSqrt2;
                const double im = v[pos++] / kSqrt2;
                m(i, j) = cplx(re, im);
                m(j, i) = cplx(re, -im);
            }
    }
}

}  // namespace

SdpSolution solve(const SdpTriple& t, const SolveOptions& opts) {
    const Cone cone(t);
    const std::size_t n = cone.total_dim();
    const std::size_t m = t.dual_structure.hvec_dim();

    SdpSolution sol;
    sol.primal = BlockOperator(t.primal_structure);
    sol.dual = BlockOperator(t.dual_structure);

    // C = diag(A, 0) over the cone.
    KOp c = cone.make();
    for (std::size_t k = 0; k < cone.np; ++k) c[k] = t.A.block(k);

    KOp x, s;
    BlockOperator y(t.dual_structure);
    bool warm = false;
    if (opts.primal_start && opts.dual_start) {
        // Feasible start: Z = B - Psi(P), S = (Psi*(Q) - A, Q).
        const BlockOperator& p0 = *opts.primal_start;
        const BlockOperator& q0 = *opts.dual_start;
        KOp xx = cone.make(), ss = cone.make();
        const BlockOperator z0 = t.B - t.psi(p0);
        const BlockOperator sp0 = t.psi_adj(q0) - t.A;
        for (std::size_t k = 0; k < cone.np; ++k) {
            xx[k] = p0.block(k);
            ss[k] = sp0.block(k);
        }
        for (std::size_t k = 0; k < cone.nz; ++k) {
            xx[cone.np + k] = z0.block(k);
            ss[cone.np + k] = q0.block(k);
        }
        double mineig = 1e300;
        for (const auto& b : xx) {
            const auto e = herm_eig(b);
            mineig = std::min(mineig, e.values.back());
        }
        for (const auto& b : ss) {
            const auto e = herm_eig(b);
            mineig = std::min(mineig, e.values.back());
        }
        if (mineig > 1e-12) {
            x = std::move(xx);
            s = std::move(ss);
            y = q0;
            warm = true;
        } else {
            sol.diagnostics += "warm start not strictly feasible; using identity start\n";
        }
    }
    if (!warm) {
        const double xi = 1.0 + t.B.max_abs();
        const double eta = 1.0 + t.A.max_abs();
        x = cone.make(xi);
        s = cone.make(eta);
    }

    double best_score = 1e300;
    KOp best_x = x, best_s = s;
    BlockOperator best_y = y;

    const double bscale = 1.0 + t.B.max_abs();
    const double ascale = 1.0 + t.A.max_abs();

    int iter = 0;
    int stall = 0;
    bool converged = false;
    std::string fail_note;
    for (; iter < opts.max_iter; ++iter) {
        const double mu = kop_inner(x, s) / static_cast<double>(n);

        BlockOperator rp = t.B - cone.forward(x);
        KOp rd = cone.adjoint(y);
        for (std::size_t k = 0; k < rd.size(); ++k) {
            ComplexMatrix mm = c[k] + s[k] - rd[k];
            mm.hermitize();
            rd[k] = std::move(mm);
        }

        const double pobj = kop_inner(c, x);
        const double dobj = t.B.inner(y);
        const double pfeas = rp.max_abs();
        const double dfeas = kop_maxabs(rd);
        const double gap_rel = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

        sol.trace.push_back({pobj, dobj, mu, pfeas, dfeas});
        if (opts.verbose) {
            std::ostringstream os;
            os << "iter " << iter << " pobj " << pobj << " dobj " << dobj << " mu " << mu
               << " pfeas " << pfeas << " dfeas " << dfeas << "\n";
            sol.diagnostics += os.str();
        }

        const double score = std::max({pfeas / (bscale * opts.tol_feas),
                                       dfeas / (ascale * opts.tol_feas),
                                       gap_rel / opts.tol_gap});
        if (score < 0.99 * best_score) {
            best_score = score;
            best_x = x;
            best_s = s;
            best_y = y;
            stall = 0;
        } else {
            if (score < best_score) {
                best_score = score;
                best_x = x;
                best_s = s;
                best_y = y;
            }
            ++stall;
        }

        if (best_score <= 1.0) {
            converged = true;
            break;
        }
        if (stall > 8) {
            sol.diagnostics += "progress stalled; returning best iterate\n";
            break;
        }

        // NT scalings.
        std::vector<Scaling> sc(cone.count());
        bool ok = true;
        for (std::size_t k = 0; k < cone.count() && ok; ++k)
            ok = compute_scaling(x[k], s[k], sc[k]);
        if (!ok) {
            fail_note = "NT scaling failed (iterate left the cone)";
            break;
        }

        // Schur matrix over Her(dual_structure).
        std::vector<double> schur(m * m);
        {
            std::vector<double> e(m, 0.0), col(m);
            BlockOperator f(t.dual_structure);
            for (std::size_t kcol = 0; kcol < m; ++kcol) {
                e[kcol] = 1.0;
                unhvec(e, f);
                e[kcol] = 0.0;
                KOp u = cone.adjoint(f);
                KOp g = scale_wmw(sc, u);
                const BlockOperator out = cone.forward(g);
                hvec(out, col);
                for (std::size_t i = 0; i < m; ++i) schur[i * m + kcol] = col[i];
            }
            // symmetrize against accumulation noise
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = i + 1; j < m; ++j) {
                    const double v = 0.5 * (schur[i * m + j] + schur[j * m + i]);
                    schur[i * m + j] = v;
                    schur[j * m + i] = v;
                }
        }

        const KOp wrd = scale_wmw(sc, rd);

        SchurFactor factor;
        if (!factor.factor(schur, m)) {
            fail_note = "schur factorization failed (regularization exhausted)";
            break;
        }
        if (factor.reg > 0.0 && opts.verbose)
            sol.diagnostics += "schur regularized (" + std::to_string(factor.reg) + ")\n";

        // Predictor (V = -X).
        std::vector<double> rhs_aff(m), rhs_cor(m);
        {
            KOp va = cone.make();
            for (std::size_t k = 0; k < va.size(); ++k) {
                va[k] = wrd[k];
                va[k] -= x[k];
            }
            BlockOperator lhs = cone.forward(va) - rp;
            hvec(lhs, rhs_aff);
        }
        std::vector<double> dy_aff_v = factor.solve(rhs_aff);

        BlockOperator dy_aff(t.dual_structure);
        unhvec(dy_aff_v, dy_aff);
        KOp ds_aff = cone.adjoint(dy_aff);
        for (std::size_t k = 0; k < ds_aff.size(); ++k) ds_aff[k] -= rd[k];
        KOp dx_aff = scale_wmw(sc, ds_aff);
        for (std::size_t k = 0; k < dx_aff.size(); ++k) {
            ComplexMatrix v = x[k] + dx_aff[k];
            v *= cplx(-1.0, 0.0);
            v.hermitize();
            dx_aff[k] = std::move(v);  // dx = -x - w ds w
        }

        const double ap_aff = std::min(1.0, kop_max_step(x, dx_aff));
        const double ad_aff = std::min(1.0, kop_max_step(s, ds_aff));
        KOp xa = x, sa = s;
        kop_axpy(xa, ap_aff, dx_aff);
        kop_axpy(sa, ad_aff, ds_aff);
        const double mu_aff = std::max(0.0, kop_inner(xa, sa) / static_cast<double>(n));
        double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
        sigma = std::min(1.0, std::max(0.0, sigma));

        // Corrector target in the scaled space:
        //   (1/2)(lam U + U lam) = sigma*mu*I - lam^2 - sym(dX~ dS~).
        {
            KOp v_cor = cone.make();
            for (std::size_t k = 0; k < cone.count(); ++k) {
                const Scaling& s_k = sc[k];
                ComplexMatrix dxs = s_k.rinv * dx_aff[k] * s_k.rinv;
                ComplexMatrix dss = s_k.r * ds_aff[k] * s_k.r;
                ComplexMatrix cross = dxs * dss;
                ComplexMatrix rhsj = cross + cross.adjoint();
                rhsj *= cplx(-0.5, 0.0);
                rhsj -= s_k.lam * s_k.lam;
                for (std::size_t i = 0; i < rhsj.rows(); ++i) rhsj(i, i) += sigma * mu;
                rhsj.hermitize();

                // Lyapunov solve in lam's eigenbasis.
                const EigResult& le = s_k.lam_eig;
                ComplexMatrix h = le.vectors.adjoint() * rhsj * le.vectors;
                for (std::size_t i = 0; i < h.rows(); ++i)
                    for (std::size_t j = 0; j < h.cols(); ++j) {
                        const double den = le.values[i] + le.values[j];
                        h(i, j) = 2.0 * h(i, j) / (den > 1e-300 ? den : 1e-300);
                    }
                ComplexMatrix u = le.vectors * h * le.vectors.adjoint();
                u.hermitize();
                ComplexMatrix v = s_k.r * u * s_k.r;
                v += wrd[k];
                v.hermitize();
                v_cor[k] = std::move(v);
            }
            BlockOperator lhs = cone.forward(v_cor) - rp;
            hvec(lhs, rhs_cor);
            const std::vector<double> dy_cor_v = factor.solve(rhs_cor);
            BlockOperator dy(t.dual_structure);
            unhvec(dy_cor_v, dy);
            KOp ds = cone.adjoint(dy);
            for (std::size_t k = 0; k < ds.size(); ++k) {
                ds[k] -= rd[k];
                ds[k].hermitize();
            }
            KOp dx = scale_wmw(sc, ds);
            for (std::size_t k = 0; k < dx.size(); ++k) {
                ComplexMatrix v = v_cor[k] - wrd[k] - dx[k];
                v.hermitize();
                dx[k] = std::move(v);  // dx = RUR - w ds w
            }

            const double ap = std::min(1.0, 0.98 * kop_max_step(x, dx));
            const double ad = std::min(1.0, 0.98 * kop_max_step(s, ds));
            kop_axpy(x, ap, dx);
            kop_axpy(s, ad, ds);
            for (auto& b : x) b.hermitize();
            for (auto& b : s) b.hermitize();
            BlockOperator ynew = y;
            ynew += static_cast<double>(ad) * dy;
            y = std::move(ynew);

            if (ap < 1e-10 && ad < 1e-10) {
                sol.diagnostics += "step lengths collapsed; returning best iterate\n";
                ++iter;
                break;
            }
        }
    }

    x = best_x;
    s = best_s;
    y = best_y;
    if (converged || best_score <= 1.0) {
        sol.status = SolveStatus::optimal;
    } else if (!fail_note.empty()) {
        sol.status = SolveStatus::numerical_failure;
        sol.diagnostics += fail_note + "\n";
    } else {
        sol.status = SolveStatus::max_iter;
    }
    sol.iterations = iter;

    sol.primal = cone.primal_part(x);
    sol.dual = y;
    sol.primal.hermitize();
    sol.dual.hermitize();
    sol.primal_value = t.A.inner(sol.primal);
    sol.dual_value = t.B.inner(sol.dual);
    sol.gap = sol.dual_value - sol.primal_value;

    sol.feas_residuals.primal_psd = sol.primal.psd_residual();
    sol.feas_residuals.dual_psd = sol.dual.psd_residual();
    sol.feas_residuals.primal_ineq = (t.psi(sol.primal) - t.B).positive_part_norm();
    sol.feas_residuals.dual_ineq = (t.A - t.psi_adj(sol.dual)).positive_part_norm();
    return sol;
}

CertificateReport verify_certificates(const SdpTriple& t, const SdpSolution& sol,
                                      double tol_feas, double tol_gap) {
    CertificateReport rep;
    const double primal_psd = sol.primal.psd_residual();
    const double dual_psd = sol.dual.psd_residual();
    const double primal_ineq = (t.psi(sol.primal) - t.B).positive_part_norm();
    const double dual_ineq = (t.A - t.psi_adj(sol.dual)).positive_part_norm();
    const double pobj = t.A.inner(sol.primal);
    const double dobj = t.B.inner(sol.dual);
    const double gap = std::abs(pobj - dobj);
    const double gap_tol = tol_gap * (1.0 + std::abs(pobj) + std::abs(dobj));

    rep.residuals = {{"primal psd", primal_psd},
                     {"dual psd", dual_psd},
                     {"primal inequality", primal_ineq},
                     {"dual inequality", dual_ineq},
                     {"gap", gap}};
    rep.ok = true;
    std::ostringstream os;
    auto flag = [&](const char* name, double v, double tol) {
        if (v > tol) {
            rep.ok = false;
            os << name << " residual " << v << " exceeds " << tol << "; ";
        }
    };
    flag("primal psd", primal_psd, tol_feas);
    flag("dual psd", dual_psd, tol_feas);
    flag("primal inequality", primal_ineq, tol_feas);
    flag("dual inequality", dual_ineq, tol_feas);
    flag("gap", gap, gap_tol);
    rep.summary = rep.ok ? "all certificates within tolerance" : os.str();
    return rep;
}

}  // namespace stratnorm
