#include "control.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace idob {

void BacksteppingGains::validate() const {
    for (double v : {k1, k2, k3, k4, k5, k6, kz_p, kz_d})
        if (!(v > 0) || !std::isfinite(v))
            throw Error(ErrorCode::InvalidInput, "gains must be positive and finite");
}

double thrust_law(const QuadState& s, double r_z, double r_zdot, const PhysParams& p,
                  const BacksteppingGains& g) {
    return p.m * (p.g + g.kz_p * (r_z - s[10]) + g.kz_d * (r_zdot - s[11]));
}

VirtualRefs virtual_angles(const QuadState& s, const Reference& r, const PhysParams& p) {
    const double den = p.g - s[10] - s[11];
    if (!(std::abs(den) >= 0.1 * p.g))
        throw Error(ErrorCode::DegenerateDenominator, "g - x11 - x12 too close to zero");
    const double ex = s[6] - r.x, evx = s[7] - r.vx;
    const double ey = s[8] - r.y, evy = s[9] - r.vy;
    VirtualRefs v;
    const double f_ref = p.g + r.az;  // specific thrust along the reference
    v.x1 = std::clamp((ey + evy) / den - r.ay / f_ref, -kAngleClamp, kAngleClamp);
    v.x3 = std::clamp(-(ex + evx) / den + r.ax / f_ref, -kAngleClamp, kAngleClamp);
    v.x5 = 0.0;
    return v;
}

ControlInput torque_laws(const QuadState& s, const VirtualRefs& v, const PhysParams& p,
                         const BacksteppingGains& g) {
    const double e1 = s[0] - v.x1, de1 = s[1] - v.dx1, e2 = s[1] - (v.dx1 - g.k1 * e1);
    const double e3 = s[2] - v.x3, de3 = s[3] - v.dx3, e4 = s[3] - (v.dx3 - g.k3 * e3);
    const double e5 = s[4] - v.x5, de5 = s[5] - v.dx5, e6 = s[5] - (v.dx5 - g.k5 * e5);
    ControlInput u;
    u.u2 = (v.ddx1 - g.k1 * de1 - g.k2 * e2 - p.c1() * s[3] * s[5]) / p.c4();
    u.u3 = (v.ddx3 - g.k3 * de3 - g.k4 * e4 - p.c2() * s[1] * s[5]) / p.c5();
    u.u4 = (v.ddx5 - g.k5 * de5 - g.k6 * e6 - p.c3() * s[1] * s[3]) / p.c6();
    return u;
}

Controller::Controller(PhysParams p, BacksteppingGains g, double dt) : p_(p), g_(g), dt_(dt) {
    p_.validate();
    g_.validate();
    if (!(dt > 0)) throw Error(ErrorCode::InvalidInput, "dt must be positive");
}

void Controller::reset() {
    primed_ = false;
    last_ = VirtualRefs{};
}

VirtualRefs Controller::virtual_refs(const QuadState& s, const Reference& r) {
    VirtualRefs v = virtual_angles(s, r, p_);
    if (!primed_) {
        h1_[0] = h1_[1] = v.x1;
        h3_[0] = h3_[1] = v.x3;
        h5_[0] = h5_[1] = v.x5;
        primed_ = true;
    }
    auto d1 = [&](double f, const double* h) { return (3 * f - 4 * h[0] + h[1]) / (2 * dt_); };
    auto d2 = [&](double f, const double* h) { return (f - 2 * h[0] + h[1]) / (dt_ * dt_); };
    v.dx1 = d1(v.x1, h1_);
    v.dx3 = d1(v.x3, h3_);
    v.dx5 = d1(v.x5, h5_);
    v.ddx1 = d2(v.x1, h1_);
    v.ddx3 = d2(v.x3, h3_);
    v.ddx5 = d2(v.x5, h5_);
    h1_[1] = h1_[0], h1_[0] = v.x1;
    h3_[1] = h3_[0], h3_[0] = v.x3;
    h5_[1] = h5_[0], h5_[0] = v.x5;
    last_ = v;
    return v;
}

ControlInput Controller::step(const QuadState& s, const Reference& r) {
    const double u1 = thrust_law(s, r.z, r.vz, p_, g_);
    const VirtualRefs v = virtual_refs(s, r);
    ControlInput u = torque_laws(s, v, p_, g_);
    u.u1 = u1;
    return u;
}

ControlInput Controller::step_hold(const QuadState& s, const Reference& r) {
    ControlInput u = torque_laws(s, last_, p_, g_);
    u.u1 = thrust_law(s, r.z, r.vz, p_, g_);
    return u;
}

}  // namespace idob
