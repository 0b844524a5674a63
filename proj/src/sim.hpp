#pragma once

#include <vector>

#include "config.hpp"
#include "dob.hpp"
#include "learnfilter.hpp"

namespace idob {

struct FlightLog {
    std::vector<double> t, x, y, z, vx, vy, vz, u1, u2, u3, u4, d, d_hat, d_f, e, e_p;
    std::size_t size() const { return t.size(); }
};

struct Metrics {
    double ez_norm = 0;    // two-norm of r_z - z over the run
    double max_z_dev = 0;  // max |r_z - z|
    bool crashed = false;  // z < 0 at some sample
};

Metrics compute_metrics(const FlightLog& log);

struct FlightOptions {
    bool dob = false;
    bool force_zero_estimate = false;
    std::vector<double> d;    // input disturbance per sample (empty = none)
    std::vector<double> d_f;  // learning signal per sample (empty = none)
    std::vector<double> e_p;  // logged only
    bool hover_start = false; // start at rest on the waypoint and hold it
};

struct FlightResult {
    FlightLog log;
    Metrics metrics;
    bool diverged = false;
    long last_valid_step = -1;
};

// Quintic move from start to waypoint over takeoff_s, then hold.
Reference reference_at(const Config& c, double t);
std::size_t sample_count(const Config& c);

StateSpaceBlock config_gn(const Config& c);
DobConfig config_dob(const Config& c);
StateSpaceBlock config_c_block(const Config& c);

FlightResult simulate_flight(const Config& c, const FlightOptions& opt);

}  // namespace idob
