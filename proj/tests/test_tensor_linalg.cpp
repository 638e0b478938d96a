#include <doctest.h>

#include "stratnorm/eig.hpp"
#include "stratnorm/labeled_operator.hpp"
#include "stratnorm/rng.hpp"

using namespace stratnorm;

namespace {

LabeledOperator diag_op(const std::string& label, std::vector<double> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return LabeledOperator(std::move(m), FactorList({{label, d.size()}}));
}

LabeledOperator random_herm(const FactorList& f, std::uint64_t seed) {
    Rng rng(seed);
    return LabeledOperator(rng.gaussian_hermitian(f.total_dim()), f);
}

const ComplexMatrix kPauliX = [] {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}();

const ComplexMatrix kPauliZ = [] {
    ComplexMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}();

}  // namespace

TEST_CASE("kron identity and scalar cases") {
    const auto i2a = LabeledOperator::identity(FactorList({{"a", 2}}));
    const auto i2b = LabeledOperator::identity(FactorList({{"b", 2}}));
    const auto k = kron(i2a, i2b);
    CHECK(k.dim() == 4);
    CHECK((k.matrix() - ComplexMatrix::identity(4)).max_abs() == 0.0);

    ComplexMatrix two(1, 1);
    two(0, 0) = 2.0;
    const LabeledOperator scalar(two, FactorList({{"s", 1}}));
    const auto a = random_herm(FactorList({{"a", 3}}), 7);
    const auto sa = kron(scalar, a);
    CHECK(sa.factors().labels() == std::vector<std::string>{"s", "a"});
    CHECK((sa.matrix() - cplx(2.0) * a.matrix()).max_abs() == 0.0);
}

TEST_CASE("kron of diagonals expands entrywise") {
    const auto a = diag_op("a", {1, 2});
    const auto b = diag_op("b", {3, 4});
    const auto k = kron(a, b);
    const std::vector<double> want = {3, 4, 6, 8};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(k.matrix()(i, i).real() == doctest::Approx(want[i]));
    }
}

TEST_CASE("kron rejects duplicate labels") {
    const auto a = LabeledOperator::identity(FactorList({{"a", 2}}));
    CHECK_THROWS_AS((void)kron(a, a), std::invalid_argument);
}

TEST_CASE("partial trace basics") {
    const auto ixy = LabeledOperator::identity(FactorList({{"x", 3}, {"y", 2}}));
    const auto t = partial_trace(ixy, "x");
    CHECK(t.factors().labels() == std::vector<std::string>{"y"});
    CHECK((t.matrix() - cplx(3.0) * ComplexMatrix::identity(2)).max_abs() < 1e-15);

    // product case: tracing a unit-trace factor leaves the other exactly
    Rng rng(3);
    ComplexMatrix rho = rng.gaussian_hermitian(2);
    rho = rho * rho.adjoint();
    rho *= cplx(1.0 / rho.trace().real(), 0.0);
    const LabeledOperator rho_l(rho, FactorList({{"r", 2}}));
    const auto sigma = random_herm(FactorList({{"s", 3}}), 11);
    const auto joint = kron(rho_l, sigma);
    const auto back = partial_trace(joint, "r");
    CHECK((back.matrix() - sigma.matrix()).max_abs() < 1e-14);

    CHECK_THROWS_AS((void)partial_trace(joint, "zz"), std::invalid_argument);
}

TEST_CASE("partial trace of the maximally entangled projector") {
    // unit-trace 2-qubit Bell projector, reduced state is I/2
    ComplexMatrix bell(4, 4);
    const std::size_t idx[2] = {0, 3};  // |00> and |11>
    for (std::size_t a : idx)
        for (std::size_t b : idx) bell(a, b) = 0.5;
    const LabeledOperator op(bell, FactorList({{"q1", 2}, {"q2", 2}}));
    const auto red = partial_trace(op, "q1");
    CHECK((red.matrix() - cplx(0.5) * ComplexMatrix::identity(2)).max_abs() < 1e-15);
    CHECK(red.matrix().trace().real() == doctest::Approx(1.0));
}

TEST_CASE("permute_factors identity, swap, involution") {
    const auto a = random_herm(FactorList({{"p", 2}, {"q", 2}}), 5);
    const auto same = permute_factors(a, {"p", "q"});
    CHECK((same.matrix() - a.matrix()).max_abs() == 0.0);

    const auto rho = random_herm(FactorList({{"p", 2}}), 1);
    const auto sig = random_herm(FactorList({{"q", 3}}), 2);
    const auto swapped = permute_factors(kron(rho, sig), {"q", "p"});
    CHECK((swapped.matrix() - kron(sig, rho).matrix()).max_abs() == 0.0);

    const auto twice = permute_factors(permute_factors(a, {"q", "p"}), {"p", "q"});
    CHECK((twice.matrix() - a.matrix()).max_abs() == 0.0);

    CHECK_THROWS_AS((void)permute_factors(a, {"p", "p"}), std::invalid_argument);
    CHECK_THROWS_AS((void)permute_factors(a, {"p", "zz"}), std::invalid_argument);
}

TEST_CASE("herm_eig on identity, Pauli-Z, Pauli-X") {
    const auto ei = herm_eig(ComplexMatrix::identity(2));
    CHECK(ei.values[0] == doctest::Approx(1.0));
    CHECK(ei.values[1] == doctest::Approx(1.0));

    const auto ez = herm_eig(kPauliZ);
    CHECK(ez.values[0] == doctest::Approx(1.0));
    CHECK(ez.values[1] == doctest::Approx(-1.0));
    CHECK(std::abs(ez.vectors(0, 0)) == doctest::Approx(1.0));

    const auto ex = herm_eig(kPauliX);
    CHECK(ex.values[0] == doctest::Approx(1.0));
    CHECK(ex.values[1] == doctest::Approx(-1.0));
}

TEST_CASE("herm_eig reconstruction and unitarity on random input") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        const std::size_t n = 5 + seed % 4;
        const ComplexMatrix h = rng.gaussian_hermitian(n);
        const auto e = herm_eig(h);

        ComplexMatrix lam(n, n);
        for (std::size_t i = 0; i < n; ++i) lam(i, i) = e.values[i];
        const ComplexMatrix rec = e.vectors * lam * e.vectors.adjoint();
        const double hnorm = operator_norm(h) + 1e-300;
        CHECK((rec - h).max_abs() <= 1e-10 * hnorm);

        const ComplexMatrix g = e.vectors.adjoint() * e.vectors;
        CHECK((g - ComplexMatrix::identity(n)).max_abs() <= 1e-10);

        for (std::size_t i = 0; i + 1 < n; ++i) CHECK(e.values[i] >= e.values[i + 1]);
    }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;  // strictly upper
    CHECK_THROWS_AS((void)herm_eig(m), std::invalid_argument);
}

TEST_CASE("norms and inner products") {
    CHECK(trace_norm(ComplexMatrix::identity(5)) == doctest::Approx(5.0));
    CHECK(operator_norm(ComplexMatrix::identity(5)) == doctest::Approx(1.0));

    const LabeledOperator i2(ComplexMatrix::identity(2), FactorList({{"a", 2}}));
    const LabeledOperator z(kPauliZ, FactorList({{"a", 2}}));
    CHECK(inner(i2, z).real() == doctest::Approx(0.0));

    ComplexMatrix d(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = -4.0;
    CHECK(trace_norm(d) == doctest::Approx(7.0));

    const LabeledOperator b(ComplexMatrix::identity(3), FactorList({{"b", 3}}));
    CHECK_THROWS_AS((void)inner(i2, b), std::invalid_argument);
}

TEST_CASE("psd_residual") {
    CHECK(psd_residual(ComplexMatrix::identity(2)) == 0.0);
    ComplexMatrix d(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -0.5;
    CHECK(psd_residual(d) == doctest::Approx(0.5));
    CHECK(psd_residual(kPauliX) == doctest::Approx(1.0));
}

TEST_CASE("property: inner factorizes over kron") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = random_herm(FactorList({{"a", 2}}), derive_seed(seed, 1));
        const auto b = random_herm(FactorList({{"b", 3}}), derive_seed(seed, 2));
        const auto c = random_herm(FactorList({{"a", 2}}), derive_seed(seed, 3));
        const auto d = random_herm(FactorList({{"b", 3}}), derive_seed(seed, 4));
        const cplx lhs = inner(kron(a, b), kron(c, d));
        const cplx rhs = inner(a, c) * inner(b, d);
        CHECK(std::abs(lhs - rhs) <=
              1e-10 * (1.0 + std::abs(lhs) + std::abs(rhs)));
    }
}

TEST_CASE("property: partial traces over disjoint labels commute") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const FactorList f({{"x", 2}, {"y", 3}, {"z", 2}});
        const auto a = random_herm(f, derive_seed(seed, 5));
        const auto xy = partial_trace(partial_trace(a, "x"), "y");
        const auto yx = partial_trace(partial_trace(a, "y"), "x");
        CHECK((xy.matrix() - yx.matrix()).max_abs() <= 1e-12 * (1.0 + a.matrix().max_abs()));
    }
}

TEST_CASE("property: permutation preserves inner products") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const FactorList f({{"x", 2}, {"y", 2}, {"z", 3}});
        const auto a = random_herm(f, derive_seed(seed, 6));
        const auto b = random_herm(f, derive_seed(seed, 7));
        const std::vector<std::string> order = {"z", "x", "y"};
        const cplx lhs = inner(permute_factors(a, order), permute_factors(b, order));
        const cplx rhs = inner(a, b);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("property: norm inequality chain") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const FactorList f({{"x", 4}});
        const auto h = random_herm(f, derive_seed(seed, 8));
        const double tn = trace_norm(h);
        const double on = operator_norm(h);
        const double tr = std::abs(h.matrix().trace().real());
        CHECK(tn >= on - 1e-12);
        CHECK(on >= tr / 4.0 - 1e-12);
    }
}

TEST_CASE("finite-entry enforcement") {
    std::vector<cplx> bad = {cplx(1.0), cplx(std::numeric_limits<double>::infinity()),
                             cplx(0.0), cplx(0.0)};
    CHECK_THROWS_AS(ComplexMatrix(2, 2, bad), std::invalid_argument);
}
