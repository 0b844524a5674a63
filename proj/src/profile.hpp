#pragma once

#include <vector>

namespace idob {

// Uniformly sampled force series with a trapezoid envelope:
// zero, ramp up, plateau, ramp down, zero.
struct DisturbanceProfile {
    std::vector<double> samples;
    double dt = 0.01;
    double t_grasp_start = 5, t_grasp_end = 6;
    double t_release_start = 15, t_release_end = 16;

    double plateau() const;
};

struct ProfileTiming {
    double t_grasp_start = 5, t_grasp_end = 6;
    double t_release_start = 15, t_release_end = 16;
    double duration = 21;
};

// Trapezoid with linear ramps; samples at k*dt for k = 0..round(duration/dt).
DisturbanceProfile make_trapezoid(double magnitude, const ProfileTiming& t, double dt);

// Samples multiplied by the class index; edges unchanged.
DisturbanceProfile form_output_profile(int weight_class, const DisturbanceProfile& base);

// Appends zeros so the series covers `seconds` more time.
std::vector<double> zero_padded(const std::vector<double>& s, double dt, double seconds);

}  // namespace idob
