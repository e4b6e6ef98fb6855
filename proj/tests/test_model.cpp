#include <catch2/catch_amalgamated.hpp>

#include "ampforge/model.hpp"
#include "ampforge/model_io.hpp"
#include "support/builders.hpp"
#include "support/systems.hpp"

#include <cmath>

using namespace ampforge;
using namespace tsup;

TEST_CASE("cubic oscillator system builds as written") {
    auto sys = duffing_system();
    validate_system(sys);
    CHECK(sys.n == 1);
    CHECK(sys.second_order);
    REQUIRE(sys.nonlin.size() == 1);
    CHECK(sys.nonlin[0].eps_power == 1);
    CHECK(sys.nonlin[0].coeff == q(1));
    CHECK(sys.nonlin[0].sm.pow == std::vector<int>{3});
}

TEST_CASE("predator-prey system carries the -+ eps x y terms") {
    auto sys = lv_system();
    validate_system(sys);
    CHECK_FALSE(sys.second_order);
    REQUIRE(sys.nonlin.size() == 2);
    CHECK(sys.nonlin[0].coeff == q(-1));
    CHECK(sys.nonlin[1].coeff == q(1));
    CHECK(sys.nonlin[0].sm.pow == std::vector<int>{1, 1});
}

TEST_CASE("empty nonlinearity is a valid linear system") {
    auto sys = duffing_system();
    sys.nonlin.clear();
    CHECK_NOTHROW(validate_system(sys));
}

TEST_CASE("invalid systems are rejected") {
    auto sys = duffing_system();
    sys.epsilon = 0.0;
    CHECK_THROWS_AS(validate_system(sys), std::invalid_argument);
    sys = duffing_system();
    sys.ics = {1.0};
    CHECK_THROWS_AS(validate_system(sys), std::invalid_argument);
}

TEST_CASE("modes of the predator-prey linear part") {
    auto md = linear_modes(lv_system());
    CHECK(md.omega == Rational(1));
    REQUIRE(md.modes.size() == 1);
    CHECK(md.modes[0].k == 1);
    REQUIRE(md.modes[0].vec.size() == 2);
    CHECK(md.modes[0].vec[0] == qi(1));
    CHECK(md.modes[0].vec[1] == q(1));
    CHECK(md.tab->n_amplitudes() == 1);
}

TEST_CASE("modes of the coupled second-order pair: frequencies 1 and 2") {
    auto md = linear_modes(twomode_system(), twomode_overrides());
    CHECK(md.omega == Rational(1));
    REQUIRE(md.modes.size() == 2);
    CHECK(md.modes[0].k == 1);
    CHECK(md.modes[1].k == 2);
    CHECK(md.modes[0].vec == std::vector<ExactComplex>{q(1), q(1)});
    CHECK(md.modes[1].vec == std::vector<ExactComplex>{q(-1), q(2)});
    CHECK(md.modes[0].amp_name == "A");
    CHECK(md.modes[1].amp_name == "B");
}

TEST_CASE("rotation scaled by three") {
    OdeSystem<ExactComplex> sys;
    sys.name = "rot3";
    sys.n = 2;
    sys.second_order = false;
    sys.G = {{q(0), q(3)}, {q(-3), q(0)}};
    sys.ics = {0.0, 1.0};
    sys.epsilon = 0.1;
    auto md = linear_modes(sys);
    CHECK(md.omega == Rational(3));
    REQUIRE(md.modes.size() == 1);
    CHECK(md.modes[0].k == 1);
}

TEST_CASE("non-imaginary spectrum is rejected") {
    OdeSystem<ExactComplex> sys;
    sys.name = "bad";
    sys.n = 2;
    sys.second_order = false;
    sys.G = {{q(1), q(1)}, {q(-1), q(0)}};
    sys.ics = {0.0, 1.0};
    sys.epsilon = 0.1;
    CHECK_THROWS_AS(linear_modes(sys), std::invalid_argument);
}

TEST_CASE("incommensurate numeric frequencies are rejected") {
    OdeSystem<NumericComplex> sys;
    sys.name = "irr";
    sys.n = 2;
    sys.second_order = true;
    // frequencies 1 and sqrt(2)
    sys.G = {{NumericComplex(1.0), NumericComplex(0.0)}, {NumericComplex(0.0), NumericComplex(2.0)}};
    sys.ics = {1.0, 0.0, 0.0, 0.0};
    sys.epsilon = 0.1;
    CHECK_THROWS_AS(linear_modes(sys), std::invalid_argument);
}

TEST_CASE("hopf preparation at a = 1/10") {
    auto [prep, sys] = selkov_prepare(0.1, 0.1, {1.0, 0.0});
    CHECK(std::abs(prep.omega - 0.5257) < 1e-4);
    CHECK(prep.b_c > 0);
    // a = (w^2 - w^4)/2 consistency
    double w2 = prep.omega * prep.omega;
    CHECK(std::abs((w2 - w2 * w2) / 2 - 0.1) < 1e-14);
}

TEST_CASE("hopf preparation limit a -> 1/8") {
    auto [prep, sys] = selkov_prepare(0.125 - 1e-13, 0.1, {1.0, 0.0});
    CHECK(std::abs(prep.omega - 1.0 / std::sqrt(2.0)) < 1e-6);
}

TEST_CASE("hopf preparation rejects a outside (0, 1/8)") {
    CHECK_THROWS_AS(selkov_prepare(0.2, 0.1, {1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(selkov_prepare(0.0, 0.1, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("hopf preparation at a = 0.05: frozen oracle values") {
    // independent evaluation of the closed-form preparation
    double a = 0.05;
    double root = std::sqrt(1 - 8 * a);  // sqrt(0.6)
    double w_expect = std::sqrt((1 - root) / 2);
    double bc_expect = std::sqrt((1 - root - 2 * a) / 2);
    auto [prep, sys] = selkov_prepare(a, 0.1, {1.0, 0.0});
    CHECK(std::abs(prep.omega - w_expect) < 1e-15);
    CHECK(std::abs(prep.b_c - bc_expect) < 1e-15);

    // B0 eigenvalues are +- i w to 1e-12: char poly lambda^2 + w^2
    double tr = prep.B0[0][0] + prep.B0[1][1];
    double det = prep.B0[0][0] * prep.B0[1][1] - prep.B0[0][1] * prep.B0[1][0];
    CHECK(std::abs(tr) < 1e-12);
    CHECK(std::abs(det - prep.omega * prep.omega) < 1e-12);

    // substituting b = b_c into the original Jacobian reproduces B0 entrywise
    double xb = prep.b_c, yb = prep.b_c / (a + prep.b_c * prep.b_c);
    double M[2][2] = {{2 * xb * yb - 1, a + xb * xb}, {-2 * xb * yb, -(a + xb * xb)}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(M[i][j] - prep.B0[i][j]) < 1e-10);
}

TEST_CASE("prepared hopf system has modes +- i w and matches the pinned eigenvector") {
    auto [prep, sys] = selkov_prepare(0.1, 0.1, {1.0, 0.0});
    auto md = linear_modes(sys, selkov_overrides(prep.omega));
    CHECK(std::abs(md.omega - prep.omega) < 1e-12);
    REQUIRE(md.modes.size() == 1);
    CHECK(std::abs(md.modes[0].vec[0].v - std::complex<double>(prep.omega, 0)) < 1e-12);
    CHECK(std::abs(md.modes[0].vec[1].v - std::complex<double>(-prep.omega, 1)) < 1e-12);
}

TEST_CASE("system json round trip") {
    auto sys = lv_system();
    auto j = system_to_json(sys);
    auto back = system_from_json<ExactComplex>(j);
    CHECK(back == sys);
    auto [prep, ssys] = selkov_prepare(0.1, 0.1, {1.0, 0.0});
    CHECK(system_from_json<NumericComplex>(system_to_json(ssys)) == ssys);
}
