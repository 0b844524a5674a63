#include <cmath>
#include <random>

#include "config.hpp"
#include "control.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "sim.hpp"

using namespace idob;

namespace {

// Closed loop with a constant reference, no saturation, no disturbance.
// Returns the worst position error over [t_check, t_end].
double step_loop(const QuadState& s0, const Reference& r, double t_check, double t_end) {
    const PhysParams p;
    const BacksteppingGains g;
    const double dt = 0.01;
    Controller c(p, g, dt);
    QuadState s = s0;
    double worst = 0;
    for (int k = 0; k * dt <= t_end; ++k) {
        if (k * dt >= t_check)
            worst = std::max({worst, std::abs(s[6] - r.x), std::abs(s[8] - r.y), std::abs(s[10] - r.z)});
        s = rk4_step(s, c.step(s, r), p, 0, dt, Model::Full);
    }
    return worst;
}

}  // namespace

TEST_CASE("thrust law") {
    const PhysParams p;
    BacksteppingGains g;
    QuadState s{};
    s[10] = 0.7, s[11] = -0.2;
    CHECK(thrust_law(s, 0.7, -0.2, p, g) == p.m * p.g);

    g.kz_p = g.kz_d = 1;
    QuadState t{};
    t[10] = 1;
    CHECK(thrust_law(t, 0, 0, p, g) == doctest::Approx(8.81).epsilon(1e-14));
    // Regulation form with unit gains: m (g - x11 - x12).
    t[11] = 0.3;
    CHECK(thrust_law(t, 0, 0, p, g) == p.m * (p.g + (0 - t[10]) + (0 - t[11])));

    g.kz_d = 0;
    const double a = thrust_law(QuadState{}, 0.5, 0, p, g) - p.m * p.g;
    const double b = thrust_law(QuadState{}, 1.0, 0, p, g) - p.m * p.g;
    CHECK(b == doctest::Approx(2 * a));
}

TEST_CASE("virtual angle references") {
    const PhysParams p;
    const VirtualRefs z = virtual_angles(QuadState{}, Reference{}, p);
    CHECK(z.x1 == 0);
    CHECK(z.x3 == 0);
    CHECK(z.x5 == 0);

    QuadState s{};
    s[8] = 0.981;
    CHECK(virtual_angles(s, Reference{}, p).x1 == doctest::Approx(0.1).epsilon(1e-14));

    QuadState d{};
    d[10] = 5, d[11] = 4.81;
    try {
        virtual_angles(d, Reference{}, p);
        FAIL("expected a degenerate denominator");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateDenominator);
    }

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-50, 50);
    for (int i = 0; i < 1000; ++i) {
        QuadState r{};
        for (int j : {6, 7, 8, 9}) r[j] = U(rng);
        const VirtualRefs v = virtual_angles(r, Reference{}, p);
        CHECK(std::abs(v.x1) <= kAngleClamp);
        CHECK(std::abs(v.x3) <= kAngleClamp);
    }
}

TEST_CASE("torque laws") {
    PhysParams p;
    BacksteppingGains g;
    const ControlInput zero = torque_laws(QuadState{}, VirtualRefs{}, p, g);
    CHECK(zero.u2 == 0);
    CHECK(zero.u3 == 0);
    CHECK(zero.u4 == 0);

    g.k1 = g.k2 = 2;
    QuadState s{};
    s[0] = 0.1;
    REQUIRE(p.c4() == doctest::Approx(20));
    CHECK(torque_laws(s, VirtualRefs{}, p, g).u2 == doctest::Approx(-0.02).epsilon(1e-12));

    p.Jy = 0.02, p.Jz = 0.015;
    REQUIRE(p.c1() == doctest::Approx(0.5));
    QuadState c{};
    c[3] = c[5] = 1;
    CHECK(torque_laws(c, VirtualRefs{}, p, g).u2 == doctest::Approx(-0.025).epsilon(1e-12));
}

TEST_CASE("controller: hover output, determinism, derivative start-up") {
    const PhysParams p;
    Controller a(p, BacksteppingGains{}, 0.01), b(p, BacksteppingGains{}, 0.01);
    QuadState s{};
    s[6] = s[8] = s[10] = 1;
    const Reference r{1, 0, 1, 0, 1, 0};
    const ControlInput u = a.step(s, r);
    CHECK(u.u1 == p.m * p.g);
    CHECK(u.u2 == 0);
    CHECK(u.u3 == 0);
    CHECK(u.u4 == 0);

    QuadState q{};
    q[6] = 0.3, q[9] = -0.2, q[0] = 0.05;
    Controller c(p, BacksteppingGains{}, 0.01), d(p, BacksteppingGains{}, 0.01);
    const ControlInput x = c.step(q, r), y = d.step(q, r);
    CHECK(x.u1 == y.u1);
    CHECK(x.u2 == y.u2);
    CHECK(x.u3 == y.u3);
    CHECK(x.u4 == y.u4);
    // First call of a fresh controller: history equals the first value.
    CHECK(std::abs(d.last_refs().dx1) < 1e-12);
    CHECK(std::abs(d.last_refs().ddx3) < 1e-9);
}

TEST_CASE("controller: backward differences of the virtual references") {
    const PhysParams p;
    const double dt = 0.01;
    Controller c(p, BacksteppingGains{}, dt);
    QuadState s{};
    double f[3];
    for (int k = 0; k < 3; ++k) {
        s[8] = 0.05 * (k + 1) * (k + 1);
        f[k] = c.virtual_refs(s, Reference{}).x1;
    }
    const VirtualRefs& v = c.last_refs();
    CHECK(v.dx1 == doctest::Approx((3 * f[2] - 4 * f[1] + f[0]) / (2 * dt)));
    CHECK(v.ddx1 == doctest::Approx((f[2] - 2 * f[1] + f[0]) / (dt * dt)));
}

TEST_CASE("closed loop: takeoff to the waypoint settles by 5 s") {
    Config c;
    FlightOptions o;
    const FlightResult r = simulate_flight(c, o);
    REQUIRE_FALSE(r.diverged);
    double worst = 0;
    for (std::size_t k = 0; k < r.log.size(); ++k)
        if (r.log.t[k] >= 5.0)
            worst = std::max({worst, std::abs(r.log.x[k] - 1), std::abs(r.log.y[k] - 1),
                              std::abs(r.log.z[k] - 1)});
    CHECK(worst < 0.02);
}

TEST_CASE("closed loop: step in z has no steady-state error") {
    QuadState s{};
    const Reference r{0, 0, 0, 0, 1, 0};
    CHECK(step_loop(s, r, 8.0, 12.0) < 0.01);
}

TEST_CASE("closed loop: converges from anywhere in a 2 m cube around the waypoint within 8 s") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> U(0, 2);
    const Reference r{1, 0, 1, 0, 1, 0};
    for (int t = 0; t < 20; ++t) {
        QuadState s{};
        s[6] = U(rng), s[8] = U(rng), s[10] = U(rng);
        CHECK(step_loop(s, r, 8.0, 12.0) < 0.02);
    }
    for (int cx : {0, 2})
        for (int cy : {0, 2})
            for (int cz : {0, 2}) {
                QuadState s{};
                s[6] = cx, s[8] = cy, s[10] = cz;
                CHECK(step_loop(s, r, 8.0, 12.0) < 0.02);
            }
}
