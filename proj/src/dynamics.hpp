#pragma once

#include <array>

#include "statespace.hpp"

namespace idob {

struct PhysParams {
    double m = 1.0;
    double arm = 0.2;
    double g = 9.81;
    double Jx = 0.01, Jy = 0.01, Jz = 0.02;
    double kF = 1e-5;
    double kM = 1e-6;

    double c1() const { return (Jy - Jz) / Jx; }
    double c2() const { return (Jz - Jx) / Jy; }
    double c3() const { return (Jx - Jy) / Jz; }
    double c4() const { return arm / Jx; }
    double c5() const { return arm / Jy; }
    double c6() const { return arm / Jz; }
    double hover_thrust() const { return m * g; }

    void validate() const;
};

// x1..x12 stored at indices 0..11: phi, p, theta, q, psi, r, x, vx, y, vy, z, vz.
using QuadState = std::array<double, 12>;

struct ControlInput {
    double u1 = 0, u2 = 0, u3 = 0, u4 = 0;
};

struct MotorSpeeds {
    std::array<double, 4> w{};
};

enum class Model { Full, Simplified };

QuadState full_derivative(const QuadState& s, const ControlInput& u, const PhysParams& p,
                          double d_force);
QuadState simplified_derivative(const QuadState& s, const ControlInput& u, const PhysParams& p,
                                double d_force);

// Classical fourth-order Runge-Kutta step for any fixed-size array state.
template <class F, class S>
S rk4_advance(F&& f, const S& x, double h) {
    auto axpy = [](const S& a, const S& k, double c) {
        S y = a;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * k[i];
        return y;
    };
    const S k1 = f(x);
    const S k2 = f(axpy(x, k1, h / 2));
    const S k3 = f(axpy(x, k2, h / 2));
    const S k4 = f(axpy(x, k3, h));
    S out = x;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return out;
}

// `step` only labels the blowup error.
QuadState rk4_step(const QuadState& s, const ControlInput& u, const PhysParams& p, double d_force,
                   double dt, Model model, long step = 0);

Eigen::Matrix4d mixing_matrix(const PhysParams& p);
ControlInput mix_motors(const MotorSpeeds& w, const PhysParams& p);
MotorSpeeds unmix_motors(const ControlInput& u, const PhysParams& p);

// ZOH double integrator from the thrust deviation (N) to z.
StateSpaceBlock z_nominal_model(const PhysParams& p, double dt);

}  // namespace idob
