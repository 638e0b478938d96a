#include <doctest.h>

#include <cstring>

#include "stratnorm/operational.hpp"

using namespace stratnorm;

namespace {

// Choi matrix of the qubit identity channel: twice the Bell projector.
ComplexMatrix identity_channel_choi() {
    ComplexMatrix j(4, 4);
    const std::size_t idx[2] = {0, 3};
    for (std::size_t a : idx)
        for (std::size_t b : idx) j(a, b) = 1.0;
    return j;
}

LabeledOperator canonical(const ComplexMatrix& m, const InteractionShape& shape) {
    return LabeledOperator(m, shape.canonical_factors());
}

ComplexMatrix projector0() {
    ComplexMatrix p(2, 2);
    p(0, 0) = 1.0;
    return p;
}

}  // namespace

TEST_CASE("validate_strategy accepts ordinary measurements at r=1, trivial Y") {
    const InteractionShape shape({2}, {1});
    const auto w = validate_strategy(canonical(ComplexMatrix::identity(2), shape), shape);
    CHECK(w.accepted);
}

TEST_CASE("trivial strategies validate in both roles") {
    for (const InteractionShape& shape :
         {InteractionShape({2}, {2}), InteractionShape({2, 2}, {2, 2})}) {
        CHECK(validate_rep(trivial_strategy(shape)).accepted);
        CHECK(validate_rep(trivial_costrategy(shape)).accepted);
    }
}

TEST_CASE("identity-channel Choi validates; a shifted version does not") {
    const InteractionShape shape({2}, {2});
    const auto ok = validate_strategy(canonical(identity_channel_choi(), shape), shape);
    CHECK(ok.accepted);

    ComplexMatrix bad = identity_channel_choi();
    for (std::size_t i = 0; i < 4; ++i) bad(i, i) += 0.1;
    const auto rejected = validate_strategy(canonical(bad, shape), shape);
    CHECK_FALSE(rejected.accepted);
    CHECK(rejected.worst_value() > 1e-3);
}

TEST_CASE("validate_costrategy accepts density operators at r=1, trivial Y") {
    const InteractionShape shape({2}, {1});
    ComplexMatrix rho(2, 2);
    rho(0, 0) = 0.25;
    rho(1, 1) = 0.75;
    rho(0, 1) = rho(1, 0) = 0.1;
    CHECK(validate_costrategy(canonical(rho, shape), shape).accepted);
}

TEST_CASE("validate_costrategy trace condition at r=1, dims (2,2)") {
    const InteractionShape shape({2}, {2});
    Rng rng(17);
    ComplexMatrix g = rng.gaussian_matrix(2, 2);
    ComplexMatrix rho = g * g.adjoint();
    rho *= cplx(1.0 / rho.trace().real(), 0.0);
    const LabeledOperator rho_l(rho, FactorList({{"X1", 2}}));
    const auto i_y = LabeledOperator::identity(FactorList({{"Y1", 2}}));
    const auto t = permute_factors(kron(rho_l, i_y), shape.canonical_factors().labels());
    CHECK(validate_costrategy(t, shape).accepted);
    CHECK_FALSE(validate_costrategy(2.0 * t, shape).accepted);
}

TEST_CASE("validate_measuring accepts the coin flip and ordinary POVMs") {
    const InteractionShape shape({2, 2}, {2, 2});
    const double denom = 2.0 * shape.in_total();
    const LabeledOperator half =
        (1.0 / denom) * LabeledOperator::identity(shape.canonical_factors());
    MeasuringStrategy coin;
    coin.shape = shape;
    coin.role = Role::costrategy;
    coin.outcomes.emplace("0", half);
    coin.outcomes.emplace("1", half);
    CHECK(validate_measuring(coin).accepted);

    const InteractionShape state_shape({2}, {1});
    MeasuringStrategy povm;
    povm.shape = state_shape;
    povm.role = Role::strategy;
    povm.outcomes.emplace("0", canonical(projector0(), state_shape));
    povm.outcomes.emplace("1",
                          canonical(ComplexMatrix::identity(2) - projector0(), state_shape));
    CHECK(validate_measuring(povm).accepted);

    // breaking the outcome sum by 0.1 must reject
    MeasuringStrategy broken = povm;
    ComplexMatrix p = projector0();
    p(0, 0) += 0.1;
    broken.outcomes.at("0") = canonical(p, state_shape);
    CHECK_FALSE(validate_measuring(broken).accepted);
}

TEST_CASE("operational_to_choi of the identity channel") {
    const InteractionShape shape({2}, {2});
    OperationalStrategy os;
    os.shape = shape;
    os.memory_dims = {1};
    RoundChannel ch;
    ch.in_labels = {"X1"};
    ch.out_labels = {"Y1", "Z1"};
    ch.choi = LabeledOperator(identity_channel_choi(),
                              FactorList({{"Y1", 2}, {"Z1", 1}, {"X1", 2}}));
    os.round_maps.push_back(ch);

    const StrategyRep rep = operational_to_choi(os);
    CHECK((rep.op.matrix() - identity_channel_choi()).max_abs() < 1e-12);
    CHECK(rep.op.matrix().trace().real() == doctest::Approx(2.0));
    CHECK(validate_rep(rep).accepted);
}

TEST_CASE("operational_to_choi of the trace-to-memory channel gives the identity") {
    // r=1, dim(Y1)=1, the input is moved to memory and traced out
    const InteractionShape shape({2}, {1});
    OperationalStrategy os;
    os.shape = shape;
    os.memory_dims = {2};
    RoundChannel ch;
    ch.in_labels = {"X1"};
    ch.out_labels = {"Y1", "Z1"};
    ch.choi = LabeledOperator(identity_channel_choi(),
                              FactorList({{"Y1", 1}, {"Z1", 2}, {"X1", 2}}));
    os.round_maps.push_back(ch);

    const StrategyRep rep = operational_to_choi(os);
    CHECK((rep.op.matrix() - ComplexMatrix::identity(2)).max_abs() < 1e-12);
}

TEST_CASE("random operational strategies convert to valid reps") {
    const InteractionShape shapes[] = {InteractionShape({2}, {2}),
                                       InteractionShape({2, 2}, {2, 2}),
                                       InteractionShape({2, 3}, {1, 2})};
    for (const auto& shape : shapes) {
        for (std::uint64_t seed = 0; seed < 12; ++seed) {
            const auto os = random_strategy(shape, seed);
            const auto rep = operational_to_choi(os);
            const auto w = validate_rep(rep);
            CAPTURE(seed);
            CHECK(w.accepted);
            // trace preservation pins the Choi trace to the input dimension
            CHECK(rep.op.matrix().trace().real() ==
                  doctest::Approx(static_cast<double>(shape.in_total())).epsilon(1e-10));

            const auto oc = random_costrategy(shape, seed);
            const auto repc = operational_to_choi(oc);
            const auto wc = validate_rep(repc);
            CHECK(wc.accepted);
        }
    }
}

TEST_CASE("random measuring strategies validate and are deterministic in the seed") {
    const InteractionShape shape({2, 2}, {2, 2});
    const auto a = random_measuring_strategy(shape, 42);
    const auto b = random_measuring_strategy(shape, 42);
    for (const auto& [label, op] : a.outcomes) {
        const auto& other = b.outcomes.at(label);
        REQUIRE(op.matrix().entries().size() == other.matrix().entries().size());
        CHECK(std::memcmp(op.matrix().entries().data(), other.matrix().entries().data(),
                          op.matrix().entries().size() * sizeof(cplx)) == 0);
    }
    CHECK(validate_measuring(a).accepted);
    CHECK(validate_measuring(random_measuring_costrategy(shape, 42)).accepted);
}

TEST_CASE("interaction_probability reduces to the measurement postulate") {
    const InteractionShape shape({2}, {1});
    MeasuringStrategy meas;
    meas.shape = shape;
    meas.role = Role::strategy;
    meas.outcomes.emplace("0", canonical(projector0(), shape));
    meas.outcomes.emplace("1", canonical(ComplexMatrix::identity(2) - projector0(), shape));

    ComplexMatrix rho(2, 2);
    rho(0, 0) = 0.7;
    rho(1, 1) = 0.3;
    rho(0, 1) = rho(1, 0) = cplx(0.1, 0.05);
    rho.hermitize();
    MeasuringStrategy state;
    state.shape = shape;
    state.role = Role::costrategy;
    state.outcomes.emplace("only", canonical(rho, shape));

    const auto p = interaction_probability(meas, state);
    CHECK(p.at({"0", "only"}) == doctest::Approx(0.7));
    CHECK(p.at({"1", "only"}) == doctest::Approx(0.3));

    CHECK_THROWS_AS((void)interaction_probability(meas, meas), std::invalid_argument);
}

TEST_CASE("non-measuring versus non-measuring gives probability one") {
    const InteractionShape shape({2, 2}, {2, 2});
    MeasuringStrategy s, t;
    s.shape = t.shape = shape;
    s.role = Role::strategy;
    t.role = Role::costrategy;
    s.outcomes.emplace("s", operational_to_choi(random_strategy(shape, 5)).op);
    t.outcomes.emplace("t", operational_to_choi(random_costrategy(shape, 6)).op);
    const auto p = interaction_probability(s, t);
    CHECK(p.at({"s", "t"}) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("simulate_interaction reproduces the Helstrom game at r=1") {
    const InteractionShape shape({2}, {1});
    // Alice: moves the input to memory, measures {P, I-P} there.
    OperationalStrategy os;
    os.shape = shape;
    os.memory_dims = {2};
    RoundChannel ch;
    ch.in_labels = {"X1"};
    ch.out_labels = {"Y1", "Z1"};
    ch.choi = LabeledOperator(identity_channel_choi(),
                              FactorList({{"Y1", 1}, {"Z1", 2}, {"X1", 2}}));
    os.round_maps.push_back(ch);

    Rng rng(99);
    const ComplexMatrix p0 = random_projector(2, 1, rng);
    std::map<std::string, ComplexMatrix> ameas;
    ameas.emplace("0", p0);
    ameas.emplace("1", ComplexMatrix::identity(2) - p0);

    // Bob prepares rho_a; trivial memories and a one-outcome measurement.
    auto make_prep = [&](const ComplexMatrix& rho) {
        OperationalCoStrategy oc;
        oc.shape = shape;
        oc.memory_dims = {1, 1};
        oc.initial_state = LabeledOperator(rho, FactorList({{"X1", 2}, {"W0", 1}}));
        RoundChannel psi1;
        psi1.in_labels = {"Y1", "W0"};
        psi1.out_labels = {"W1"};
        psi1.choi = LabeledOperator(ComplexMatrix::identity(1),
                                    FactorList({{"W1", 1}, {"Y1", 1}, {"W0", 1}}));
        oc.round_maps.push_back(psi1);
        return oc;
    };
    const ComplexMatrix rho0 = random_projector(2, 1, rng);
    const ComplexMatrix rho1 = random_projector(2, 1, rng);
    std::map<std::string, ComplexMatrix> bmeas;
    bmeas.emplace("b", ComplexMatrix::identity(1));

    const auto pr0 = simulate_interaction(os, make_prep(rho0), ameas, bmeas);
    const auto pr1 = simulate_interaction(os, make_prep(rho1), ameas, bmeas);
    const double success = 0.5 * (pr0.at({"0", "b"}) + pr1.at({"1", "b"}));

    double overlap = 0.0;  // <P0 - P1, rho0 - rho1>
    {
        const ComplexMatrix dm = p0 + p0 - ComplexMatrix::identity(2);
        const ComplexMatrix dr = rho0 - rho1;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                overlap += (std::conj(dm(i, j)) * dr(i, j)).real();
    }
    CHECK(success == doctest::Approx(0.5 + 0.25 * overlap).epsilon(1e-10));
}

TEST_CASE("oracle equivalence: simulation matches Choi inner products") {
    const InteractionShape shapes[] = {InteractionShape({2}, {2}),
                                       InteractionShape({2, 2}, {2, 2})};
    for (const auto& shape : shapes) {
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const auto os = random_strategy(shape, seed);
            const auto oc = random_costrategy(shape, seed + 1000);
            Rng rng(derive_seed(seed, 0xFEED));
            const auto ameas = random_binary_measurement(os.memory_dims.back(), rng);
            const auto bmeas = random_binary_measurement(oc.memory_dims.back(), rng);

            const auto sim = simulate_interaction(os, oc, ameas, bmeas);
            const auto sm = operational_to_choi_measuring(os, ameas);
            const auto tm = operational_to_choi_measuring(oc, bmeas);
            const auto ip = interaction_probability(sm, tm);

            double total = 0.0;
            for (const auto& [key, value] : sim) {
                CAPTURE(seed);
                CHECK(std::abs(value - ip.at(key)) <= 1e-10);
                CHECK(value >= -1e-10);
                total += value;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("outcome-sum collapse: family validity iff sum validity") {
    const InteractionShape shape({2, 2}, {2, 2});
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto ms = random_measuring_strategy(shape, seed);
        const auto family = validate_measuring(ms);
        const auto sum = validate_strategy(ms.outcome_sum(), shape);
        CHECK(family.accepted == sum.accepted);
        CHECK(family.accepted);

        // skewing one outcome breaks both checks
        MeasuringStrategy bad = ms;
        ComplexMatrix m = bad.outcomes.at("0").matrix();
        for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += 0.05;
        bad.outcomes.at("0") = LabeledOperator(m, shape.canonical_factors());
        const auto family_bad = validate_measuring(bad);
        const auto sum_bad = validate_strategy(bad.outcome_sum(), shape);
        CHECK(family_bad.accepted == sum_bad.accepted);
        CHECK_FALSE(family_bad.accepted);
    }
}

TEST_CASE("simulate_interaction rejects mismatched rounds with the round named") {
    const InteractionShape shape({2, 2}, {2, 2});
    auto os = random_strategy(shape, 1);
    const auto oc = random_costrategy(shape, 2);
    // corrupt round 2 of the strategy: wrong memory dimension
    os.memory_dims[0] = 3;
    Rng rng(5);
    const auto am = random_binary_measurement(os.memory_dims.back(), rng);
    const auto bm = random_binary_measurement(oc.memory_dims.back(), rng);
    try {
        (void)simulate_interaction(os, oc, am, bm);
        FAIL("expected a dimension error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("round") != std::string::npos);
    }
}
