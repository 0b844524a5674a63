#include <cmath>
#include <random>

#include "doctest.h"
#include "dynamics.hpp"
#include "errors.hpp"

using namespace idob;

namespace {

QuadState hover_state() {
    QuadState s{};
    s[6] = 1, s[8] = 1, s[10] = 1;
    return s;
}

double max_abs_diff(const QuadState& a, const QuadState& b) {
    double m = 0;
    for (int i = 0; i < 12; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("hover thrust gives a zero derivative in both models") {
    const PhysParams p;
    const ControlInput u{p.m * p.g, 0, 0, 0};
    for (const QuadState& ds : {simplified_derivative(hover_state(), u, p, 0),
                                full_derivative(hover_state(), u, p, 0)})
        for (double v : ds) CHECK(std::abs(v) <= 1e-15);
}

TEST_CASE("small angles: simplified and full models agree") {
    const PhysParams p;
    QuadState s{};
    s[0] = s[2] = s[4] = 0.01;
    const ControlInput u{p.m * p.g, 0, 0, 0};
    const QuadState a = simplified_derivative(s, u, p, 0), b = full_derivative(s, u, p, 0);
    CHECK(max_abs_diff(a, b) < 1e-3);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-0.02, 0.02), V(-1, 1);
    for (int t = 0; t < 100; ++t) {
        QuadState r{};
        r[0] = U(rng), r[2] = U(rng), r[4] = U(rng);
        for (int i : {1, 3, 5, 7, 9, 11}) r[i] = V(rng);
        const QuadState x = simplified_derivative(r, u, p, 0), y = full_derivative(r, u, p, 0);
        // Thrust acceleration sets the scale of the translational rows.
        double scale = u.u1 / p.m;
        for (int i = 0; i < 12; ++i) scale = std::max({scale, std::abs(x[i]), std::abs(y[i])});
        CHECK(max_abs_diff(x, y) <= 5e-3 * scale);
    }
}

TEST_CASE("vertical acceleration from thrust surplus") {
    const PhysParams p;
    const QuadState ds = simplified_derivative(QuadState{}, {p.m * (p.g + 1), 0, 0, 0}, p, 0);
    CHECK(ds[11] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rk4 on the scalar decay x' = -x") {
    std::array<double, 1> x{1.0};
    x = rk4_advance([](const std::array<double, 1>& v) { return std::array<double, 1>{-v[0]}; }, x, 0.1);
    CHECK(std::abs(x[0] - std::exp(-0.1)) < 1e-7);
    CHECK(std::abs(x[0] - 0.90483742) < 1e-7);
}

TEST_CASE("rk4 hover invariance over 1000 steps") {
    const PhysParams p;
    for (Model m : {Model::Full, Model::Simplified}) {
        QuadState s = hover_state();
        const QuadState s0 = s;
        CHECK(max_abs_diff(rk4_step(s, {p.hover_thrust(), 0, 0, 0}, p, 0, 0.01, m), s0) <= 1e-12);
        for (int k = 0; k < 1000; ++k) s = rk4_step(s, {p.hover_thrust(), 0, 0, 0}, p, 0, 0.01, m);
        CHECK(max_abs_diff(s, s0) <= 1e-9);
    }
}

TEST_CASE("rk4 self-convergence order on the nonlinear model") {
    const PhysParams p;
    QuadState s0{};
    s0[0] = 0.3, s0[1] = -0.5, s0[2] = 0.2, s0[3] = 0.4, s0[4] = 0.1, s0[5] = 0.3, s0[7] = 0.5;
    const ControlInput u{p.m * p.g * 1.1, 0.01, -0.02, 0.005};
    auto run = [&](double h) {
        QuadState s = s0;
        for (int k = 0; k < static_cast<int>(std::lround(1.0 / h)); ++k)
            s = rk4_step(s, u, p, 0.3, h, Model::Full);
        return s;
    };
    const QuadState ref = run(0.04 / 64);
    const double e1 = max_abs_diff(run(0.04), ref), e2 = max_abs_diff(run(0.02), ref);
    CHECK(e1 / e2 == doctest::Approx(16).epsilon(0.2));
    const double order = std::log2(e1 / e2);
    CHECK(order >= 3.8);
    CHECK(order <= 4.2);
}

TEST_CASE("rk4 rejects bad step sizes and reports blowups with the step index") {
    const PhysParams p;
    CHECK_THROWS_AS(rk4_step(hover_state(), {}, p, 0, 0.0, Model::Full), Error);
    QuadState s = hover_state();
    s[1] = s[3] = s[5] = 1e200;
    try {
        rk4_step(s, {}, p, 0, 0.01, Model::Full, 42);
        FAIL("expected an integration blowup");
    } catch (const StepError& e) {
        CHECK(e.code() == ErrorCode::IntegrationBlowup);
        CHECK(e.step() == 42);
    }
}

TEST_CASE("mixing matrix columns and symmetric inputs") {
    PhysParams p;
    MotorSpeeds w;
    w.w = {300, 300, 300, 300};
    const ControlInput u = mix_motors(w, p);
    CHECK(u.u1 == doctest::Approx(4 * p.kF * 300 * 300));
    CHECK(std::abs(u.u2) < 1e-15);
    CHECK(std::abs(u.u3) < 1e-15);
    CHECK(std::abs(u.u4) < 1e-15);

    p.kF = 1, p.kM = 0.1, p.arm = 0.2;
    w.w = {1, 0, 0, 0};
    const ControlInput c = mix_motors(w, p);
    CHECK(c.u1 == doctest::Approx(1));
    CHECK(c.u2 == doctest::Approx(0));
    CHECK(c.u3 == doctest::Approx(-0.2));
    CHECK(c.u4 == doctest::Approx(0.1));
}

TEST_CASE("unmixing: symmetric hover, infeasible demand, round trip") {
    const PhysParams p;
    const MotorSpeeds w = unmix_motors({4 * p.kF, 0, 0, 0}, p);
    for (double v : w.w) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    try {
        unmix_motors({0, 0, 1.0, 0}, p);
        FAIL("expected infeasible thrust");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InfeasibleThrust);
        CHECK(std::string(e.what()).find("rotor 1") != std::string::npos);
    }

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> W(100, 1000);
    for (int t = 0; t < 500; ++t) {
        MotorSpeeds m;
        for (double& v : m.w) v = W(rng);
        const ControlInput u = mix_motors(m, p);
        const ControlInput back = mix_motors(unmix_motors(u, p), p);
        CHECK(std::abs(back.u1 - u.u1) <= 1e-10);
        CHECK(std::abs(back.u2 - u.u2) <= 1e-10);
        CHECK(std::abs(back.u3 - u.u3) <= 1e-10);
        CHECK(std::abs(back.u4 - u.u4) <= 1e-10);
    }
}

TEST_CASE("z nominal model is the exact ZOH double integrator") {
    const PhysParams p;
    const StateSpaceBlock g = z_nominal_model(p, 0.01);
    CHECK(g.A(0, 0) == 1);
    CHECK(g.A(0, 1) == 0.01);
    CHECK(g.A(1, 0) == 0);
    CHECK(g.A(1, 1) == 1);
    CHECK(g.B(0, 0) == doctest::Approx(0.00005).epsilon(1e-14));
    CHECK(g.B(1, 0) == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(g.C(0, 0) == 1);
    CHECK(g.C(0, 1) == 0);
    CHECK(g.D(0, 0) == 0);

    // Unit input held for k steps: z(k) = k^2 dt^2 / 2 / m, and it matches the
    // continuous solution at the sample instants.
    StateSpaceBlock s = g;
    s.reset();
    for (int k = 1; k <= 50; ++k) {
        s.advance(1.0);
        const double z = (s.C * s.state)(0);
        CHECK(z == doctest::Approx(k * k * 1e-4 / 2 / p.m).epsilon(1e-12));
    }
}
