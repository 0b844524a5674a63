#pragma once

#include "statespace.hpp"

namespace idob {

// ZOH discretization of wc^2/(s+wc)^2 as a cascade of two first-order lags.
// Output is the second state; strictly proper.
StateSpaceBlock lowpass_zoh(double wc, double dt);

// Q = F(z) (1 + z^-1) / 2 with F the ZOH low-pass above. Strictly proper, so
// its output at step k only depends on inputs up to k-1.
StateSpaceBlock make_lowpass_q(double wc, double dt);

// Q = one-step delay [0, 1, 1, 0].
StateSpaceBlock make_delay_q();

// D = m z F(z) (1 - z^-1)^2 / dt^2, so that D Gn equals make_lowpass_q.
// gn must be the z nominal double integrator.
StateSpaceBlock build_inverse_D(const StateSpaceBlock& gn, double rolloff);

struct DobConfig {
    StateSpaceBlock q_block;
    StateSpaceBlock d_block;
    bool enabled = true;
    double estimate_sat = 0;  // <= 0 disables saturation

    void validate() const;
};

DobConfig default_dob_config(const StateSpaceBlock& gn, double rolloff, double estimate_sat);

struct DobSignals {
    double d_hat = 0;
    double alpha = 0;
    double beta = 0;
    double u_bar = 0;
    double u_applied = 0;
};

class Dob {
public:
    explicit Dob(DobConfig cfg);

    // Advances Q with u_prev, reads beta, reads alpha for z_meas, advances D.
    // Returns alpha - beta (0 when disabled). Non-finite inputs throw
    // EstimatorFault and leave the state and last estimate untouched.
    double step(double z_meas, double u_prev);

    double saturate(double d_hat) const;
    const DobSignals& signals() const { return sig_; }
    const DobConfig& config() const { return cfg_; }
    void reset();

private:
    DobConfig cfg_;
    DobSignals sig_;
};

inline double compensated_input(double u_bar, double d_hat, double d_f) {
    return u_bar - d_hat - d_f;
}

}  // namespace idob
