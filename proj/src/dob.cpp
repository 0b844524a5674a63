#include "dob.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace idob {

StateSpaceBlock lowpass_zoh(double wc, double dt) {
    if (!(dt > 0)) throw Error(ErrorCode::InvalidInput, "dt must be positive");
    if (!(wc > 0) || !(wc < M_PI / dt))
        throw Error(ErrorCode::InvalidCutoff, "cutoff must lie in (0, pi/dt)");
    const double h = wc * dt, a = std::exp(-h);
    Mat A(2, 2), B(2, 1), C(1, 2), D(1, 1);
    A << a, 0, h * a, a;
    B << 1 - a, 1 - a * (1 + h);
    C << 0, 1;
    D << 0;
    return {A, B, C, D};
}

StateSpaceBlock make_lowpass_q(double wc, double dt) {
    const StateSpaceBlock f = lowpass_zoh(wc, dt);
    Mat A = Mat::Zero(3, 3), B(3, 1), C(1, 3), D(1, 1);
    A.topLeftCorner(2, 2) = f.A;
    A.block(0, 2, 2, 1) = f.B / 2;
    B << f.B(0) / 2, f.B(1) / 2, 1;
    C << 0, 1, 0;
    D << 0;
    return {A, B, C, D};
}

StateSpaceBlock make_delay_q() { return scalar_block(0, 1, 1, 0); }

StateSpaceBlock build_inverse_D(const StateSpaceBlock& gn, double rolloff) {
    gn.validate("gn");
    if (gn.n() != 2 || gn.A(0, 0) != 1 || gn.A(1, 1) != 1 || gn.A(1, 0) != 0 || !(gn.A(0, 1) > 0))
        throw Error(ErrorCode::Precondition, "gn is not a discrete double integrator");
    const double dt = gn.A(0, 1);
    const double m = dt / gn.B(1, 0);
    const StateSpaceBlock f = lowpass_zoh(rolloff, dt);
    const double s = m / (dt * dt);

    // State: z(k-1), z(k-2), filter state.
    Mat A = Mat::Zero(4, 4), B = Mat::Zero(4, 1), C(1, 4), D(1, 1);
    A(1, 0) = 1;
    A.block(2, 0, 2, 1) = -2 * s * f.B;
    A.block(2, 1, 2, 1) = s * f.B;
    A.bottomRightCorner(2, 2) = f.A;
    B(0, 0) = 1;
    B.block(2, 0, 2, 1) = s * f.B;
    const double cb = (f.C * f.B)(0);
    C(0, 0) = -2 * s * cb;
    C(0, 1) = s * cb;
    C.block(0, 2, 1, 2) = f.C * f.A;
    D << s * cb;
    return {A, B, C, D};
}

void DobConfig::validate() const {
    q_block.validate("q_block");
    d_block.validate("d_block");
    if (q_block.inputs() != 1 || q_block.outputs() != 1 || d_block.inputs() != 1 ||
        d_block.outputs() != 1)
        throw Error(ErrorCode::DimensionMismatch, "dob blocks must be SISO");
    if (q_block.D(0, 0) != 0)
        throw Error(ErrorCode::Precondition, "q_block must have zero feedthrough");
}

DobConfig default_dob_config(const StateSpaceBlock& gn, double rolloff, double estimate_sat) {
    DobConfig c;
    c.q_block = make_lowpass_q(rolloff, gn.A(0, 1));
    c.d_block = build_inverse_D(gn, rolloff);
    c.estimate_sat = estimate_sat;
    return c;
}

Dob::Dob(DobConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    reset();
}

void Dob::reset() {
    cfg_.q_block.reset();
    cfg_.d_block.reset();
    sig_ = DobSignals{};
}

double Dob::saturate(double d_hat) const {
    if (cfg_.estimate_sat <= 0) return d_hat;
    return std::clamp(d_hat, -cfg_.estimate_sat, cfg_.estimate_sat);
}

double Dob::step(double z_meas, double u_prev) {
    if (!cfg_.enabled) return 0.0;
    if (!std::isfinite(z_meas) || !std::isfinite(u_prev))
        throw Error(ErrorCode::EstimatorFault, "non-finite dob input; estimate held");
    cfg_.q_block.advance(u_prev);
    sig_.beta = cfg_.q_block.output(0.0);
    sig_.alpha = cfg_.d_block.step(z_meas);
    sig_.d_hat = sig_.alpha - sig_.beta;
    return sig_.d_hat;
}

}  // namespace idob
