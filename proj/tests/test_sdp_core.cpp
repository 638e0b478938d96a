#include <doctest.h>

#include <cstring>

#include "stratnorm/block_sdp.hpp"
#include "stratnorm/rng.hpp"

using namespace stratnorm;

namespace {

// maximize <C, P> s.t. P <= I on one block: Psi = id, A = C, B = I.
SdpTriple cap_triple(const ComplexMatrix& c) {
    SdpTriple t;
    const std::size_t d = c.rows();
    t.primal_structure = BlockStructure({{"P", d}});
    t.dual_structure = BlockStructure({{"C", d}});
    t.A = BlockOperator(t.primal_structure);
    t.A.block(0) = c;
    t.B = BlockOperator::identity(t.dual_structure);
    t.psi = [s = t.dual_structure](const BlockOperator& p) {
        return BlockOperator(s, {p.block(0)});
    };
    t.psi_adj = [s = t.primal_structure](const BlockOperator& q) {
        return BlockOperator(s, {q.block(0)});
    };
    return t;
}

}  // namespace

TEST_CASE("toy: maximize tr(P) subject to P <= I in dimension 2") {
    const auto t = cap_triple(ComplexMatrix::identity(2));
    const auto sol = solve(t);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.primal_value == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(sol.dual_value == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(verify_certificates(t, sol).ok);
}

TEST_CASE("toy: indefinite objective puts mass on the positive eigenspace") {
    ComplexMatrix c(2, 2);
    c(0, 0) = 1.0;
    c(1, 1) = -1.0;
    const auto sol = solve(cap_triple(c));
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.primal_value == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("toy with a nontrivial map: scalar budget over two blocks") {
    // maximize p11 + 2*p22 s.t. p11 + p22 <= 1 (1x1 blocks); optimum 2.
    SdpTriple t;
    t.primal_structure = BlockStructure({{"a", 1}, {"b", 1}});
    t.dual_structure = BlockStructure({{"s", 1}});
    t.A = BlockOperator(t.primal_structure);
    t.A.block(0)(0, 0) = 1.0;
    t.A.block(1)(0, 0) = 2.0;
    t.B = BlockOperator(t.dual_structure);
    t.B.block(0)(0, 0) = 1.0;
    t.psi = [s = t.dual_structure](const BlockOperator& p) {
        BlockOperator out(s);
        out.block(0)(0, 0) = p.block(0)(0, 0) + p.block(1)(0, 0);
        return out;
    };
    t.psi_adj = [s = t.primal_structure](const BlockOperator& q) {
        BlockOperator out(s);
        out.block(0)(0, 0) = q.block(0)(0, 0);
        out.block(1)(0, 0) = q.block(0)(0, 0);
        return out;
    };
    CHECK(check_adjoint(t, 10, 1) < 1e-12);
    const auto sol = solve(t);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.primal_value == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(sol.dual.block(0)(0, 0).real() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("check_adjoint flags a corrupted adjoint") {
    SdpTriple t = cap_triple(ComplexMatrix::identity(3));
    CHECK(check_adjoint(t, 20, 7) < 1e-12);
    t.psi_adj = [s = t.primal_structure](const BlockOperator& q) {
        return BlockOperator(s, {cplx(-1.0, 0.0) * q.block(0)});  // sign flip
    };
    CHECK(check_adjoint(t, 20, 7) > 0.1);
}

TEST_CASE("verify_certificates flags constructed violations") {
    const auto t = cap_triple(ComplexMatrix::identity(2));
    auto sol = solve(t);
    REQUIRE(sol.status == SolveStatus::optimal);

    SdpSolution bad = sol;
    bad.primal.block(0)(0, 0) = -0.1;  // negative eigenvalue
    const auto rep1 = verify_certificates(t, bad);
    CHECK_FALSE(rep1.ok);
    CHECK(rep1.summary.find("primal psd") != std::string::npos);

    SdpSolution gap = sol;
    gap.dual.block(0) = gap.dual.block(0) + cplx(1e-3) * ComplexMatrix::identity(2);
    const auto rep2 = verify_certificates(t, gap, 1e-2, 1e-8);
    CHECK_FALSE(rep2.ok);
    CHECK(rep2.summary.find("gap") != std::string::npos);
}

TEST_CASE("weak duality holds along the iterate trace") {
    ComplexMatrix c(3, 3);
    c(0, 0) = 2.0;
    c(1, 1) = 0.5;
    c(2, 2) = -1.0;
    c(0, 1) = c(1, 0) = 0.25;
    const auto t = cap_triple(c);
    const auto sol = solve(t);
    REQUIRE(sol.status == SolveStatus::optimal);
    for (const auto& it : sol.trace) {
        if (it.primal_feas < 1e-8 && it.dual_feas < 1e-8)
            CHECK(it.primal_obj <= it.dual_obj + 1e-7);
    }
}

TEST_CASE("determinism: identical inputs give identical outputs") {
    Rng rng(123);
    ComplexMatrix c = rng.gaussian_hermitian(4);
    const auto t = cap_triple(c);
    const auto s1 = solve(t);
    const auto s2 = solve(t);
    REQUIRE(s1.status == SolveStatus::optimal);
    CHECK(s1.primal_value == s2.primal_value);
    CHECK(s1.dual_value == s2.dual_value);
    CHECK(std::memcmp(s1.primal.block(0).entries().data(), s2.primal.block(0).entries().data(),
                      s1.primal.block(0).entries().size() * sizeof(cplx)) == 0);
}

TEST_CASE("scale equivariance of the optimal value") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        ComplexMatrix c = rng.gaussian_hermitian(3);
        const auto base = solve(cap_triple(c));
        const double scale = 3.5;
        const auto scaled = solve(cap_triple(scale * c));
        REQUIRE(base.status == SolveStatus::optimal);
        REQUIRE(scaled.status == SolveStatus::optimal);
        CHECK(scaled.primal_value ==
              doctest::Approx(scale * base.primal_value).epsilon(1e-7));
    }
}

TEST_CASE("warm starts are honored when strictly feasible") {
    const auto t = cap_triple(ComplexMatrix::identity(2));
    SolveOptions opts;
    opts.primal_start = BlockOperator::identity(t.primal_structure, 0.5);
    opts.dual_start = BlockOperator::identity(t.dual_structure, 2.0);
    const auto sol = solve(t, opts);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.primal_value == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(sol.diagnostics.find("identity start") == std::string::npos);
}
