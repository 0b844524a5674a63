#include "profile.hpp"

#include <cmath>

#include "errors.hpp"

namespace idob {

double DisturbanceProfile::plateau() const {
    const auto k = static_cast<std::size_t>(std::lround((t_grasp_end + t_release_start) / 2 / dt));
    return k < samples.size() ? samples[k] : 0.0;
}

DisturbanceProfile make_trapezoid(double magnitude, const ProfileTiming& t, double dt) {
    if (!(dt > 0) || !(0 <= t.t_grasp_start && t.t_grasp_start <= t.t_grasp_end &&
                       t.t_grasp_end < t.t_release_start &&
                       t.t_release_start <= t.t_release_end && t.t_release_end <= t.duration))
        throw Error(ErrorCode::InvalidInput, "profile edges out of order");
    DisturbanceProfile p;
    p.dt = dt;
    p.t_grasp_start = t.t_grasp_start;
    p.t_grasp_end = t.t_grasp_end;
    p.t_release_start = t.t_release_start;
    p.t_release_end = t.t_release_end;
    const long n = std::lround(t.duration / dt) + 1;
    p.samples.resize(n);
    for (long k = 0; k < n; ++k) {
        const double tk = k * dt;
        double v = 0;
        if (tk <= t.t_grasp_start || tk >= t.t_release_end)
            v = 0;
        else if (tk < t.t_grasp_end)
            v = (tk - t.t_grasp_start) / (t.t_grasp_end - t.t_grasp_start);
        else if (tk <= t.t_release_start)
            v = 1;
        else
            v = (t.t_release_end - tk) / (t.t_release_end - t.t_release_start);
        p.samples[k] = magnitude * v;
    }
    return p;
}

DisturbanceProfile form_output_profile(int weight_class, const DisturbanceProfile& base) {
    if (weight_class < 1) throw Error(ErrorCode::InvalidInput, "weight class must be >= 1");
    DisturbanceProfile p = base;
    for (double& v : p.samples) v *= weight_class;
    return p;
}

std::vector<double> zero_padded(const std::vector<double>& s, double dt, double seconds) {
    std::vector<double> out = s;
    out.resize(s.size() + static_cast<std::size_t>(std::lround(seconds / dt)), 0.0);
    return out;
}

}  // namespace idob
