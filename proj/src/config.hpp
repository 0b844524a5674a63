#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "control.hpp"
#include "dynamics.hpp"
#include "profile.hpp"

namespace idob {

struct Config {
    PhysParams phys;
    BacksteppingGains gains;
    double dt = 0.01;
    Model model = Model::Full;

    // DOB
    bool dob_enabled = true;
    double d_rolloff_rad_s = 2.1;
    double estimate_sat = 0;  // <= 0 selects 2 * m * g
    double thrust_max_factor = 4.0;
    double torque_sat = 1.0;

    // Scenario
    double duration = 21;
    double t_grasp = 5, t_release = 15, ramp_s = 1;
    double takeoff_s = 3.5;
    double hover_before_image_s = 1;
    double start_x = 0, start_y = 0, start_z = 0;
    double waypoint_x = 1, waypoint_y = 1, waypoint_z = 1;
    double base_magnitude = -1.5;  // N per class unit; negative pulls down
    int n_classes = 5;

    // Learning filter
    int n_taps = 8;
    double gamma_cap = 1.5;
    double pad_seconds = 2;

    // Perception
    std::uint64_t seed = 7;
    int n_images = 200, n_train = 120, n_val = 40;
    int cnn_filters = 8, cnn_epochs = 50;
    double cnn_lr = 0.01;
    int lstm_samples = 1000, lstm_hidden = 16, lstm_epochs = 150, lstm_batch = 256;
    int lstm_downsample = 10;
    double lstm_lr = 0.01;
    double lstm_amp_min = 0.25, lstm_amp_max = 5.5, lstm_jitter_s = 0.2;

    double effective_estimate_sat() const {
        return estimate_sat > 0 ? estimate_sat : 2 * phys.m * phys.g;
    }
    ProfileTiming timing() const {
        return {t_grasp, t_grasp + ramp_s, t_release, t_release + ramp_s, duration};
    }
    DisturbanceProfile base_profile() const { return make_trapezoid(base_magnitude, timing(), dt); }

    // Throws Config on unknown keys or unparsable values.
    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;
    void validate() const;
    static const std::vector<std::string>& keys();
};

// key = value lines; '#' starts a comment.
Config load_config(const std::string& path);
void save_config(const Config& c, const std::string& path);

}  // namespace idob
