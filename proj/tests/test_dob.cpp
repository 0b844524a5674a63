#include <cmath>
#include <limits>
#include <random>

#include "dob.hpp"
#include "doctest.h"
#include "dynamics.hpp"
#include "errors.hpp"
#include "learnfilter.hpp"
#include "oracles.hpp"

using namespace idob;

namespace {

const double kDt = 0.01;
const double kWc = 2.1;

StateSpaceBlock gn() { return z_nominal_model(PhysParams{}, kDt); }

// Linear z loop: PD controller, DOB, constant input disturbance d0.
// Returns the estimate series.
std::vector<double> linear_loop(const DobConfig& cfg, double d0, int steps, bool use_estimate) {
    StateSpaceBlock g = gn(), c = pd_controller_block(4, 3, kDt);
    g.reset();
    c.reset();
    Dob dob(cfg);
    double u_prev = 0;
    std::vector<double> est;
    for (int k = 0; k < steps; ++k) {
        const double z = (g.C * g.state)(0);
        const double ubar = c.step(-z);
        const double dh = dob.step(z, u_prev);
        est.push_back(dh);
        const double u = compensated_input(ubar, use_estimate ? dob.saturate(dh) : 0.0, 0.0);
        g.advance(u + d0);
        u_prev = u;
    }
    return est;
}

}  // namespace

TEST_CASE("low-pass ZOH matches the continuous step response at the samples") {
    StateSpaceBlock f = lowpass_zoh(kWc, kDt);
    f.reset();
    for (int k = 0; k <= 500; ++k) {
        const double t = k * kDt, exact = 1 - std::exp(-kWc * t) * (1 + kWc * t);
        CHECK(f.output(1.0) == doctest::Approx(exact).epsilon(1e-12).scale(1));
        f.advance(1.0);
    }
}

TEST_CASE("cutoff outside (0, Nyquist) is rejected") {
    for (double wc : {0.0, -1.0, M_PI / kDt, 400.0}) {
        try {
            build_inverse_D(gn(), wc);
            FAIL("expected invalid cutoff");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidCutoff);
        }
    }
    CHECK_THROWS_AS(build_inverse_D(scalar_block(1, 1, 1, 0), kWc), Error);
}

TEST_CASE("delay Q reproduces its input one step later") {
    StateSpaceBlock q = make_delay_q();
    q.reset();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-3, 3);
    double prev = 0;
    for (int k = 0; k < 200; ++k) {
        const double u = U(rng);
        CHECK(q.step(u) == prev);
        prev = u;
    }
}

TEST_CASE("low-pass Q is strictly proper with unit DC gain") {
    StateSpaceBlock q = make_lowpass_q(kWc, kDt);
    CHECK(q.D(0, 0) == 0);
    q.reset();
    double y = 0;
    for (int k = 0; k < 3000; ++k) y = q.step(1.0);
    CHECK(y == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("D composed with Gn equals Q") {
    StateSpaceBlock g = gn(), d = build_inverse_D(gn(), kWc), q = make_lowpass_q(kWc, kDt);
    g.reset(), d.reset(), q.reset();
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> U(-5, 5);
    double worst = 0;
    for (int k = 0; k < 2000; ++k) {
        const double u = U(rng);
        const double alpha = d.step((g.C * g.state)(0));
        const double beta = q.step(u);
        worst = std::max(worst, std::abs(alpha - beta));
        g.advance(u);
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("D on the held-input step response of Gn converges to the input") {
    StateSpaceBlock g = gn(), d = build_inverse_D(gn(), kWc);
    g.reset(), d.reset();
    // A critically damped second-order filter leaves 1 - (1 + x) e^-x after
    // x time constants: 4% at five, 0.7% at seven.
    const int n7 = static_cast<int>(std::ceil(7.0 / kWc / kDt)) + 1;
    double y = 0;
    for (int k = 0; k <= n7; ++k) {
        y = d.step((g.C * g.state)(0));
        g.advance(1.0);
    }
    CHECK(std::abs(y - 1.0) < 0.01);
}

TEST_CASE("D: zero in, zero out; internally stable") {
    StateSpaceBlock d = build_inverse_D(gn(), kWc);
    d.reset();
    for (int k = 0; k < 100; ++k) CHECK(d.step(0.0) == 0.0);
    CHECK(Eigen::EigenSolver<Mat>(d.A, false).eigenvalues().cwiseAbs().maxCoeff() < 1);
    CHECK(oracle::companion_spectral_radius(d.A) < 1);
}

TEST_CASE("dob step: zero history, delay bookkeeping, estimate identity") {
    Dob zero(default_dob_config(gn(), kWc, 0));
    CHECK(zero.step(0, 0) == 0);

    DobConfig cfg = default_dob_config(gn(), kWc, 0);
    cfg.q_block = make_delay_q();
    Dob dob(cfg);
    CHECK(dob.step(0.0, 1.0) == -1.0);
    CHECK(dob.signals().beta == 1.0);

    Dob live(default_dob_config(gn(), kWc, 0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int k = 0; k < 300; ++k) {
        const double dh = live.step(U(rng), U(rng));
        CHECK(dh == live.signals().alpha - live.signals().beta);
    }
}

TEST_CASE("dob step: non-finite input raises an estimator fault and holds state") {
    Dob dob(default_dob_config(gn(), kWc, 0));
    dob.step(0.1, 0.2);
    const DobSignals before = dob.signals();
    try {
        dob.step(std::numeric_limits<double>::quiet_NaN(), 0);
        FAIL("expected an estimator fault");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EstimatorFault);
    }
    CHECK(dob.signals().d_hat == before.d_hat);
    Dob twin(default_dob_config(gn(), kWc, 0));
    twin.step(0.1, 0.2);
    CHECK(dob.step(0.3, 0.4) == twin.step(0.3, 0.4));
}

TEST_CASE("disabled dob returns zero") {
    DobConfig cfg = default_dob_config(gn(), kWc, 0);
    cfg.enabled = false;
    Dob dob(cfg);
    CHECK(dob.step(1.0, 2.0) == 0);
}

TEST_CASE("constant disturbance is recovered within 2% after 3 s") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0.5, 5.0);
    const int settle = static_cast<int>(std::lround(3.0 / kDt));
    for (int t = 0; t < 10; ++t) {
        const double d0 = t == 0 ? 0.5 : t == 1 ? 5.0 : U(rng);
        const auto est = linear_loop(default_dob_config(gn(), kWc, 2 * 9.81), d0, settle + 400, true);
        for (std::size_t k = settle; k < est.size(); ++k)
            CHECK(std::abs(est[k] - d0) / d0 < 0.02);
    }
}

TEST_CASE("compensated input arithmetic and perfect cancellation") {
    CHECK(compensated_input(10, 0, 0) == 10);
    CHECK(compensated_input(10, 3, 1) == 6);

    // With d_hat = d the plant sees u_bar: the loop matches the undisturbed one.
    StateSpaceBlock g1 = gn(), g2 = gn(), c1 = pd_controller_block(4, 3, kDt), c2 = c1;
    g1.reset(), g2.reset(), c1.reset(), c2.reset();
    for (int k = 0; k < 500; ++k) {
        const double r = 1.0, d = 0.7 * std::sin(0.05 * k);
        const double u1 = compensated_input(c1.step(r - (g1.C * g1.state)(0)), d, 0);
        g1.advance(u1 + d);
        g2.advance(c2.step(r - (g2.C * g2.state)(0)));
        CHECK((g1.C * g1.state)(0) == doctest::Approx((g2.C * g2.state)(0)).epsilon(1e-12).scale(1));
    }
}

TEST_CASE("dob config validation") {
    DobConfig cfg = default_dob_config(gn(), kWc, 0);
    cfg.q_block = scalar_block(0, 1, 1, 0.5);
    CHECK_THROWS_AS(Dob{cfg}, Error);
    cfg.q_block = make_delay_q();
    cfg.d_block.B = Mat::Zero(4, 2);
    cfg.d_block.D = Mat::Zero(1, 2);
    CHECK_THROWS_AS(Dob{cfg}, Error);
}
