#include <doctest.h>

#include "stratnorm/discrimination.hpp"
#include "stratnorm/operational.hpp"
#include "stratnorm/oracles.hpp"

using namespace stratnorm;

namespace {

const InteractionShape kTwoRound({2, 2}, {2, 2});
const InteractionShape kState({2}, {1});

ConvexStrategySet seeded_set(const InteractionShape& shape, Role role, std::size_t n,
                             std::uint64_t seed) {
    std::vector<StrategyRep> v;
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t s = derive_seed(seed, k);
        v.push_back(role == Role::strategy ? operational_to_choi(random_strategy(shape, s))
                                           : operational_to_choi(random_costrategy(shape, s)));
    }
    return ConvexStrategySet(std::move(v));
}

StrategyRep density_costrategy(const ComplexMatrix& rho) {
    return StrategyRep{LabeledOperator(rho, kState.canonical_factors()), kState,
                       Role::costrategy};
}

}  // namespace

TEST_CASE("identical singleton sets are at distance zero with a coin flip") {
    const auto s = operational_to_choi(random_strategy(kTwoRound, 4));
    const ConvexStrategySet a({s}), b({s});
    const auto md = min_distance(a, b);
    CHECK(md.distance <= 1e-6);

    const auto sep = separator(a, b);
    CHECK_FALSE(sep.degenerate);
    CHECK(sep.distance <= 1e-6);
    const auto& t0 = sep.separator.outcomes.at("0");
    const auto& t1 = sep.separator.outcomes.at("1");
    CHECK((t0.matrix() - t1.matrix()).max_abs() == 0.0);
    CHECK(t0.matrix()(0, 0).real() == doctest::Approx(1.0 / 8.0));  // I / (2 dim X)
    CHECK(std::abs(sep.min_margin()) <= 1e-9);
    CHECK(guessing_game(sep.separator, s, s) == doctest::Approx(0.5));
}

TEST_CASE("singleton sets reproduce the strategy norm") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto s0 = operational_to_choi(random_strategy(kTwoRound, derive_seed(seed, 1)));
        const auto s1 = operational_to_choi(random_strategy(kTwoRound, derive_seed(seed, 2)));
        const double norm = strategy_norm(s0.op - s1.op, kTwoRound).value;
        const auto md = min_distance(ConvexStrategySet({s0}), ConvexStrategySet({s1}));
        CHECK(md.distance == doctest::Approx(norm).epsilon(1e-6));

        const auto sep = separator(ConvexStrategySet({s0}), ConvexStrategySet({s1}));
        CHECK_FALSE(sep.degenerate);
        CHECK(validate_measuring(sep.separator).accepted);
        CHECK(sep.separator.role == Role::costrategy);
        const double success = guessing_game(sep.separator, s0, s1);
        CHECK(success == doctest::Approx(0.5 + 0.25 * md.distance).epsilon(1e-6));
    }
}

TEST_CASE("state sets at r=1 reduce to trace-norm set distance (grid oracle)") {
    // two 2-vertex sets of qubit density operators, compared against a fine
    // grid over the convex weights with the trace norm from the eigensolver
    Rng rng(77);
    auto rho = [&]() {
        ComplexMatrix g = rng.gaussian_matrix(2, 2);
        ComplexMatrix r = g * g.adjoint();
        r *= cplx(1.0 / r.trace().real(), 0.0);
        r.hermitize();
        return r;
    };
    const ComplexMatrix a0 = rho(), a1 = rho(), b0 = rho(), b1 = rho();
    const ConvexStrategySet sa({density_costrategy(a0), density_costrategy(a1)});
    const ConvexStrategySet sb({density_costrategy(b0), density_costrategy(b1)});

    const auto md = min_distance(sa, sb);

    double grid_best = 1e300;
    const int steps = 400;
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; j <= steps; ++j) {
            const double lam = static_cast<double>(i) / steps;
            const double mu = static_cast<double>(j) / steps;
            ComplexMatrix diff = lam * a0 + (1.0 - lam) * a1 - mu * b0 - (1.0 - mu) * b1;
            diff.hermitize();
            grid_best = std::min(grid_best, trace_norm(diff));
        }
    CHECK(md.distance == doctest::Approx(grid_best).epsilon(2e-4));
    CHECK(md.distance <= grid_best + 1e-6);
}

TEST_CASE("separator margins dominate the distance on seeded 3-vertex sets") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto a = seeded_set(kTwoRound, Role::strategy, 3, derive_seed(seed, 100));
        const auto b = seeded_set(kTwoRound, Role::strategy, 3, derive_seed(seed, 200));
        const auto sep = separator(a, b);
        CHECK_FALSE(sep.degenerate);
        CHECK(validate_measuring(sep.separator).accepted);
        REQUIRE(sep.margins.size() == 3);
        for (const auto& row : sep.margins)
            for (double mgn : row) CHECK(mgn >= sep.distance - 1e-6 * (1.0 + sep.distance));

        // margins are bilinear in the hull weights: interior points obey the
        // vertex bound
        Rng rng(derive_seed(seed, 300));
        const LabeledOperator diff =
            sep.separator.outcomes.at("0") - sep.separator.outcomes.at("1");
        for (int trial = 0; trial < 20; ++trial) {
            double wa[3], wb[3], sa = 0.0, sb = 0.0;
            for (int k = 0; k < 3; ++k) {
                wa[k] = rng.uniform();
                wb[k] = rng.uniform();
                sa += wa[k];
                sb += wb[k];
            }
            LabeledOperator mix_a = (wa[0] / sa) * a.vertices[0].op;
            LabeledOperator mix_b = (wb[0] / sb) * b.vertices[0].op;
            double expect = 0.0;
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    expect += (wa[k] / sa) * (wb[l] / sb) * sep.margins[k][l];
            for (int k = 1; k < 3; ++k) {
                mix_a = mix_a + (wa[k] / sa) * a.vertices[k].op;
                mix_b = mix_b + (wb[k] / sb) * b.vertices[k].op;
            }
            const double actual = inner_re(diff, mix_a - mix_b);
            CHECK(std::abs(actual - expect) <= 1e-9 * (1.0 + std::abs(expect)));
            CHECK(actual >= sep.distance - 1e-6 * (1.0 + sep.distance));
        }
    }
}

TEST_CASE("lower-bound consistency and monotonicity under added vertices") {
    const auto a = seeded_set(kTwoRound, Role::strategy, 2, 11);
    const auto b = seeded_set(kTwoRound, Role::strategy, 2, 22);
    const auto md = min_distance(a, b);
    for (const auto& va : a.vertices)
        for (const auto& vb : b.vertices) {
            const double pairnorm = strategy_norm(va.op - vb.op, kTwoRound).value;
            CHECK(md.distance <= pairnorm + 1e-7);
        }

    // growing a set can only shrink the distance
    auto grown = a.vertices;
    grown.push_back(operational_to_choi(random_strategy(kTwoRound, 999)));
    const auto md2 = min_distance(ConvexStrategySet(grown), b);
    CHECK(md2.distance <= md.distance + 1e-7);
}

TEST_CASE("closest pair is a valid convex combination") {
    const auto a = seeded_set(kTwoRound, Role::strategy, 3, 5);
    const auto b = seeded_set(kTwoRound, Role::strategy, 3, 6);
    const auto md = min_distance(a, b);
    double sum = 0.0;
    for (double w : md.weights_a) {
        CHECK(w >= 0.0);
        sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(validate_rep(md.closest_a).accepted);
    CHECK(validate_rep(md.closest_b).accepted);
    CHECK(strategy_norm(md.closest_a.op - md.closest_b.op, kTwoRound).value ==
          doctest::Approx(md.distance).epsilon(1e-5));
}

TEST_CASE("co-strategy sets run through the dual norm") {
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
        const auto t0 = operational_to_choi(random_costrategy(kTwoRound, derive_seed(seed, 7)));
        const auto t1 = operational_to_choi(random_costrategy(kTwoRound, derive_seed(seed, 8)));
        const double dn = dual_strategy_norm(t0.op - t1.op, kTwoRound).value;
        const auto md = min_distance(ConvexStrategySet({t0}), ConvexStrategySet({t1}));
        CHECK(md.distance == doctest::Approx(dn).epsilon(1e-6));

        const auto sep = separator(ConvexStrategySet({t0}), ConvexStrategySet({t1}));
        CHECK_FALSE(sep.degenerate);
        CHECK(sep.separator.role == Role::strategy);
        CHECK(validate_measuring(sep.separator).accepted);
        CHECK(guessing_game(sep.separator, t0, t1) ==
              doctest::Approx(0.5 + 0.25 * dn).epsilon(1e-6));
    }
}

TEST_CASE("identical co-strategy singletons give the strategy-side coin flip") {
    const auto t = operational_to_choi(random_costrategy(kTwoRound, 3));
    const auto sep = separator(ConvexStrategySet({t}), ConvexStrategySet({t}));
    CHECK(sep.distance <= 1e-6);
    CHECK(sep.separator.role == Role::strategy);
    CHECK(sep.separator.outcomes.at("0").matrix()(0, 0).real() ==
          doctest::Approx(1.0 / 8.0));  // I / (2 dim Y)
}

TEST_CASE("mixed shapes or roles are rejected") {
    const auto s = operational_to_choi(random_strategy(kTwoRound, 1));
    const auto t = operational_to_choi(random_costrategy(kTwoRound, 1));
    CHECK_THROWS_AS((void)ConvexStrategySet({s, t}), std::invalid_argument);
    CHECK_THROWS_AS((void)min_distance(ConvexStrategySet({s}), ConvexStrategySet({t})),
                    std::invalid_argument);

    MeasuringStrategy not_binary;
    not_binary.shape = kTwoRound;
    not_binary.role = Role::costrategy;
    not_binary.outcomes.emplace("a", t.op);
    CHECK_THROWS_AS((void)guessing_game(not_binary, s, s), std::invalid_argument);
}

TEST_CASE("guessing game stays within the unit interval") {
    const auto a = seeded_set(kTwoRound, Role::strategy, 2, 31);
    const auto b = seeded_set(kTwoRound, Role::strategy, 2, 32);
    const auto sep = separator(a, b);
    for (const auto& va : a.vertices)
        for (const auto& vb : b.vertices) {
            const double p = guessing_game(sep.separator, va, vb);
            CHECK(p >= -1e-9);
            CHECK(p <= 1.0 + 1e-9);
            CHECK(p >= 0.5 + 0.25 * sep.distance - 1e-6);
        }
}
