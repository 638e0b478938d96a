#include <doctest.h>

#include "stratnorm/oracles.hpp"

using namespace stratnorm;

namespace {

const InteractionShape kState({2}, {1});

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

}  // namespace

TEST_CASE("sampled bound is zero on the zero operator") {
    const auto zero = LabeledOperator::zero(kState.canonical_factors());
    CHECK(sampled_norm_bound(zero, kState, 25, 3) == doctest::Approx(0.0));
}

TEST_CASE("sampling reaches the operator norm at r=1 with trivial output") {
    Rng rng(8);
    LabeledOperator x(rng.gaussian_hermitian(2), kState.canonical_factors());
    const double bound = sampled_norm_bound(x, kState, 2000, 123);
    const double target = operator_norm(x);
    CHECK(bound <= target + 1e-7);
    CHECK(bound >= target - 0.05);
}

TEST_CASE("sampled bound never exceeds the engine value") {
    const InteractionShape shape({2, 2}, {2, 2});
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(derive_seed(seed, 0xABCD));
        LabeledOperator x(rng.gaussian_hermitian(16), shape.canonical_factors());
        const auto rep = sampled_norm_lower_bound(x, shape, 40, seed);
        CHECK(rep.oracle_value <= rep.engine_value + 1e-7);
    }
}

TEST_CASE("state-case closed forms match the engine") {
    ComplexMatrix half(2, 2);
    half(0, 0) = 0.5;
    half(1, 1) = -0.5;
    const LabeledOperator x(half, kState.canonical_factors());
    const auto [primal, dual] = state_case_oracles(x);
    CHECK(primal.oracle_value == doctest::Approx(0.5));
    CHECK(dual.oracle_value == doctest::Approx(1.0));
    CHECK(primal.deviation() <= 1e-6);
    CHECK(dual.deviation() <= 1e-6);

    // orthogonal pure states have trace distance 2
    ComplexMatrix d(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
    const LabeledOperator xd(d, kState.canonical_factors());
    const auto [p2, d2] = state_case_oracles(xd);
    CHECK(d2.oracle_value == doctest::Approx(2.0));
    CHECK(d2.deviation() <= 1e-6);

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(derive_seed(seed, 0x1111));
        const LabeledOperator xr(rng.gaussian_hermitian(2), kState.canonical_factors());
        const auto [pr, dr] = state_case_oracles(xr);
        CHECK(pr.deviation() <= 1e-6);
        CHECK(dr.deviation() <= 1e-6);
    }
}

TEST_CASE("unitary oracle: equal unitaries, Pauli-X, and a quarter phase") {
    const ComplexMatrix eye = ComplexMatrix::identity(2);
    CHECK(unitary_diamond_closed_form(eye, eye) == doctest::Approx(0.0));

    CHECK(unitary_diamond_closed_form(eye, pauli_x()) == doctest::Approx(2.0));

    ComplexMatrix phase(2, 2);
    phase(0, 0) = 1.0;
    phase(1, 1) = cplx(0.0, 1.0);  // e^{i pi/2}
    CHECK(unitary_diamond_closed_form(eye, phase) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));

    ComplexMatrix not_unitary(2, 2);
    not_unitary(0, 0) = 2.0;
    CHECK_THROWS_AS((void)unitary_diamond_closed_form(eye, not_unitary),
                    std::invalid_argument);
}

TEST_CASE("unitary oracle agrees with the diamond-norm engine") {
    const ComplexMatrix eye = ComplexMatrix::identity(2);
    ComplexMatrix phase(2, 2);
    phase(0, 0) = 1.0;
    phase(1, 1) = cplx(0.0, 1.0);
    const auto rep = unitary_channel_diamond_oracle(eye, phase);
    CHECK(rep.oracle_value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(rep.deviation() <= 1e-5);

    const auto repx = unitary_channel_diamond_oracle(eye, pauli_x());
    CHECK(repx.oracle_value == doctest::Approx(2.0));
    CHECK(repx.deviation() <= 1e-6);
}
