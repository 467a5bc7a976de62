#include <doctest.h>

#include <cmath>
#include <random>

#include "doubletopt/errors.hpp"
#include "doubletopt/hydro.hpp"

#include "support/fixtures.hpp"

using namespace doubletopt;
using testsupport::make_sample;

TEST_CASE("drawdown limit") {
    CHECK(drawdown_limit(make_sample(0.0, 10.0, 1.0, 1e-3)) == 0.0);
    // 0.195 * 2e-3 * 10^2 = 0.039 m3/s = 39 l/s
    CHECK(drawdown_limit(make_sample(2e-3, 10.0, 1.0, 1e-3)) ==
          doctest::Approx(0.039).epsilon(1e-12));
    // below the 1 l/s filter threshold
    CHECK(drawdown_limit(make_sample(1e-4, 5.0, 1.0, 1e-3)) ==
          doctest::Approx(4.875e-4).epsilon(1e-12));
}

TEST_CASE("upconing limit") {
    CHECK(upconing_limit(make_sample(1e-3, 10.0, 0.0, 1e-3)) == 0.0);
    CHECK(upconing_limit(make_sample(1e-3, 10.0, 1.0, 1e-3)) ==
          doctest::Approx(0.006471208681040656).epsilon(1e-12));
    // negative headroom clamps to zero instead of a negative rate
    CHECK(upconing_limit(make_sample(2e-3, 15.0, -0.5, 1e-3)) == 0.0);
}

TEST_CASE("breakthrough parameter") {
    HydroSample stagnant = make_sample(1e-3, 10.0, 1.0, 1e-3);
    stagnant.darcy_velocity = 0.0;
    CHECK(breakthrough_param(stagnant) == 0.0);

    // derived Darcy velocity: v_D = K * grad_h = 1e-6 m/s
    const HydroSample derived = make_sample(1e-3, 10.0, 1.0, 1e-3);
    CHECK(breakthrough_param(derived) == doctest::Approx(1.60285339468867e-5).epsilon(1e-12));

    HydroSample explicit_v = derived;
    explicit_v.darcy_velocity = 1e-6;
    CHECK(breakthrough_param(explicit_v) ==
          doctest::Approx(breakthrough_param(derived)).epsilon(1e-12));
}

TEST_CASE("breakthrough limit") {
    CHECK(breakthrough_limit(1.603e-5, 0.0) == 0.0);
    CHECK(breakthrough_limit(5e-4, 20.0) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(breakthrough_limit(1.60285339468867e-5, 50.0) ==
          doctest::Approx(8.014266973443351e-4).epsilon(1e-12));
}

TEST_CASE("monotonicity over sampled parameter pairs") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> k_d(1e-4, 5e-3);
    std::uniform_real_distribution<double> b_d(2.0, 20.0);
    std::uniform_real_distribution<double> h_d(-1.0, 3.0);
    std::uniform_real_distribution<double> g_d(1e-4, 5e-3);
    for (int i = 0; i < 500; ++i) {
        const double k1 = k_d(rng), k2 = k_d(rng);
        const double b1 = b_d(rng), b2 = b_d(rng);
        const double h1 = h_d(rng), h2 = h_d(rng);
        const double g = g_d(rng);

        const auto lo_k = make_sample(std::min(k1, k2), b1, 1.0, g);
        const auto hi_k = make_sample(std::max(k1, k2), b1, 1.0, g);
        CHECK(drawdown_limit(lo_k) <= drawdown_limit(hi_k));

        const auto lo_b = make_sample(k1, std::min(b1, b2), 1.0, g);
        const auto hi_b = make_sample(k1, std::max(b1, b2), 1.0, g);
        CHECK(drawdown_limit(lo_b) <= drawdown_limit(hi_b));

        const auto lo_h = make_sample(k1, b1, std::min(h1, h2), g);
        const auto hi_h = make_sample(k1, b1, std::max(h1, h2), g);
        CHECK(upconing_limit(lo_h) <= upconing_limit(hi_h));
        CHECK(upconing_limit(lo_h) >= 0.0);
    }
}

TEST_CASE("breakthrough limit is additive in distance") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> a_d(0.0, 1e-3);
    std::uniform_real_distribution<double> d_d(0.0, 200.0);
    for (int i = 0; i < 500; ++i) {
        const double alpha = a_d(rng);
        const double da = d_d(rng), db = d_d(rng);
        const double lhs = breakthrough_limit(alpha, da + db);
        const double rhs = breakthrough_limit(alpha, da) + breakthrough_limit(alpha, db);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("explicit Darcy velocity matches the derived path") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> k_d(1e-4, 5e-3);
    std::uniform_real_distribution<double> b_d(2.0, 20.0);
    std::uniform_real_distribution<double> g_d(1e-4, 5e-3);
    for (int i = 0; i < 200; ++i) {
        HydroSample s = make_sample(k_d(rng), b_d(rng), 1.0, g_d(rng));
        HydroSample e = s;
        e.darcy_velocity = s.conductivity * s.gradient;
        CHECK(breakthrough_param(e) == doctest::Approx(breakthrough_param(s)).epsilon(1e-12));
    }
}

TEST_CASE("sample validation") {
    CHECK_THROWS_AS(validate(make_sample(-1e-3, 10.0, 1.0, 1e-3)), ValidationError);
    HydroSample bad_dir = make_sample(1e-3, 10.0, 1.0, 1e-3);
    bad_dir.flow_dir = Vec2{0.5, 0.5};
    CHECK_THROWS_AS(validate(bad_dir), ValidationError);
    CHECK_NOTHROW(validate(make_sample(1e-3, 10.0, 1.0, 1e-3)));
}
