#include "dynamics.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace idob {

void PhysParams::validate() const {
    for (double v : {m, arm, g, Jx, Jy, Jz, kF, kM})
        if (!(v > 0) || !std::isfinite(v))
            throw Error(ErrorCode::InvalidInput, "physical parameters must be positive and finite");
}

namespace {

void check_inputs(const QuadState& s, const ControlInput& u, double d) {
    for (double v : s)
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "non-finite state");
    for (double v : {u.u1, u.u2, u.u3, u.u4, d})
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "non-finite input");
}

// Attitude rows are shared by both models.
void attitude_rows(const QuadState& s, const ControlInput& u, const PhysParams& p, QuadState& ds) {
    ds[0] = s[1];
    ds[1] = p.c1() * s[3] * s[5] + p.c4() * u.u2;
    ds[2] = s[3];
    ds[3] = p.c2() * s[1] * s[5] + p.c5() * u.u3;
    ds[4] = s[5];
    ds[5] = p.c3() * s[1] * s[3] + p.c6() * u.u4;
    ds[6] = s[7];
    ds[8] = s[9];
    ds[10] = s[11];
}

}  // namespace

namespace {

QuadState full_raw(const QuadState& s, const ControlInput& u, const PhysParams& p, double d) {
    QuadState ds{};
    attitude_rows(s, u, p, ds);
    const double f = (u.u1 + d) / p.m;
    const double c1 = std::cos(s[0]), s1 = std::sin(s[0]);
    const double c3 = std::cos(s[2]), s3 = std::sin(s[2]);
    const double c5 = std::cos(s[4]), s5 = std::sin(s[4]);
    ds[7] = f * (c1 * s3 * c5 + s1 * s5);
    ds[9] = f * (c1 * s3 * s5 - s1 * c5);
    ds[11] = f * c1 * c3 - p.g;
    return ds;
}

QuadState simplified_raw(const QuadState& s, const ControlInput& u, const PhysParams& p, double d) {
    QuadState ds{};
    attitude_rows(s, u, p, ds);
    const double f = (u.u1 + d) / p.m;
    ds[7] = f * (s[2] + s[0] * s[4]);
    ds[9] = f * (s[2] * s[4] - s[0]);
    ds[11] = f - p.g;
    return ds;
}

}  // namespace

QuadState full_derivative(const QuadState& s, const ControlInput& u, const PhysParams& p,
                          double d_force) {
    check_inputs(s, u, d_force);
    return full_raw(s, u, p, d_force);
}

QuadState simplified_derivative(const QuadState& s, const ControlInput& u, const PhysParams& p,
                                double d_force) {
    check_inputs(s, u, d_force);
    return simplified_raw(s, u, p, d_force);
}

QuadState rk4_step(const QuadState& s, const ControlInput& u, const PhysParams& p, double d_force,
                   double dt, Model model, long step) {
    if (!(dt > 0)) throw Error(ErrorCode::InvalidInput, "dt must be positive");
    check_inputs(s, u, d_force);
    auto f = model == Model::Full ? full_raw : simplified_raw;
    const QuadState out = rk4_advance([&](const QuadState& x) { return f(x, u, p, d_force); }, s, dt);
    for (double v : out)
        if (!std::isfinite(v))
            throw StepError(ErrorCode::IntegrationBlowup, "rk4 produced a non-finite state", step);
    return out;
}

Eigen::Matrix4d mixing_matrix(const PhysParams& p) {
    const double a = p.kF, b = p.kF * p.arm, c = p.kM;
    Eigen::Matrix4d M;
    M << a, a, a, a,
         0, b, 0, -b,
         -b, 0, b, 0,
         c, -c, c, -c;
    return M;
}

ControlInput mix_motors(const MotorSpeeds& w, const PhysParams& p) {
    Eigen::Vector4d sq;
    for (int i = 0; i < 4; ++i) {
        if (!(w.w[i] >= 0) || !std::isfinite(w.w[i]))
            throw Error(ErrorCode::InvalidInput, "rotor speeds must be finite and non-negative");
        sq[i] = w.w[i] * w.w[i];
    }
    const Eigen::Vector4d u = mixing_matrix(p) * sq;
    return {u[0], u[1], u[2], u[3]};
}

MotorSpeeds unmix_motors(const ControlInput& u, const PhysParams& p) {
    check_inputs(QuadState{}, u, 0.0);
    const Eigen::Vector4d sq =
        mixing_matrix(p).partialPivLu().solve(Eigen::Vector4d(u.u1, u.u2, u.u3, u.u4));
    MotorSpeeds w;
    for (int i = 0; i < 4; ++i) {
        if (sq[i] < 0)
            throw Error(ErrorCode::InfeasibleThrust,
                        "rotor " + std::to_string(i + 1) + " needs negative squared speed");
        w.w[i] = std::sqrt(sq[i]);
    }
    return w;
}

StateSpaceBlock z_nominal_model(const PhysParams& p, double dt) {
    if (!(dt > 0)) throw Error(ErrorCode::InvalidInput, "dt must be positive");
    Mat A(2, 2), B(2, 1), C(1, 2), D(1, 1);
    A << 1, dt, 0, 1;
    B << dt * dt / 2 / p.m, dt / p.m;
    C << 1, 0;
    D << 0;
    return {A, B, C, D};
}

}  // namespace idob
