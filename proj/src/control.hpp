#pragma once

#include "dynamics.hpp"

namespace idob {

struct BacksteppingGains {
    double k1 = 4, k2 = 4, k3 = 4, k4 = 4, k5 = 2, k6 = 2;
    double kz_p = 4.0, kz_d = 3.0;
    void validate() const;
};

// Position, velocity and acceleration references for the three axes.
struct Reference {
    double x = 0, vx = 0, y = 0, vy = 0, z = 0, vz = 0;
    double ax = 0, ay = 0, az = 0;
};

struct VirtualRefs {
    double x1 = 0, x3 = 0, x5 = 0;
    double dx1 = 0, dx3 = 0, dx5 = 0;
    double ddx1 = 0, ddx3 = 0, ddx5 = 0;
};

inline constexpr double kAngleClamp = 0.78539816339744830962;  // pi/4

double thrust_law(const QuadState& s, double r_z, double r_zdot, const PhysParams& p,
                  const BacksteppingGains& g);

// Clamped attitude references without derivatives. Reference accelerations
// enter as a feedforward a / (g + a_z). Throws DegenerateDenominator.
VirtualRefs virtual_angles(const QuadState& s, const Reference& r, const PhysParams& p);

ControlInput torque_laws(const QuadState& s, const VirtualRefs& v, const PhysParams& p,
                         const BacksteppingGains& g);

// Backstepping controller. Keeps the last two virtual references so their
// first and second derivatives can be taken by backward differences.
class Controller {
public:
    Controller(PhysParams p, BacksteppingGains g, double dt);

    // Full control step. On a degenerate denominator the stored references are
    // left untouched and the error propagates; step_hold() then reuses them.
    ControlInput step(const QuadState& s, const Reference& r);
    ControlInput step_hold(const QuadState& s, const Reference& r);

    // Virtual references with derivatives; advances the history.
    VirtualRefs virtual_refs(const QuadState& s, const Reference& r);
    const VirtualRefs& last_refs() const { return last_; }
    void reset();

private:
    PhysParams p_;
    BacksteppingGains g_;
    double dt_;
    bool primed_ = false;
    double h1_[2]{}, h3_[2]{}, h5_[2]{};  // values at k-1, k-2
    VirtualRefs last_;
};

}  // namespace idob
