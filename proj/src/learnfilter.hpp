#pragma once

#include <array>
#include <complex>
#include <vector>

#include "statespace.hpp"

namespace idob {

struct ErrorSystem {
    Mat A, B, C;
    double D = 1.0;
    std::array<int, 5> block_dims{};  // G, D, Q, C, L
};

// Assembles the map from the predicted error e_p to the actual error e.
// gn and q_blk must have zero feedthrough.
ErrorSystem build_error_system(const StateSpaceBlock& gn, const StateSpaceBlock& d_blk,
                               const StateSpaceBlock& q_blk, const StateSpaceBlock& c_blk,
                               const StateSpaceBlock& l_blk);

// C (e^{jw} I - A)^{-1} B + D for a SISO realization.
std::complex<double> freq_response(const Mat& A, const Mat& B, const Mat& C, double D, double w);

// Peak |E(e^{jw})| on w = pi*i/n_grid, i = 0..n_grid, refined x4 around the
// argmax and polished by a golden-section search. Throws Precondition when A
// is not Schur stable.
double peak_gain(const Mat& A, const Mat& B, const Mat& C, double D, int n_grid = 2048);
inline double peak_gain(const ErrorSystem& E, int n_grid = 2048) {
    return peak_gain(E.A, E.B, E.C, E.D, n_grid);
}

// Backward-difference PD: u = kp e + kd (e(k) - e(k-1)) / dt.
StateSpaceBlock pd_controller_block(double kp, double kd, double dt);

struct LearningFilter {
    StateSpaceBlock realization;
    std::vector<double> taps;  // taps[0] = D_L, taps[i] weights e(k-i)
};

// FIR realization: A_L shift, B_L = e1, C_L = taps[1..], D_L = taps[0].
LearningFilter make_fir_filter(const std::vector<double>& taps);
// Recovers taps from an FIR realization (C_L and D_L).
LearningFilter fir_from_realization(const StateSpaceBlock& blk);

struct SynthesisOptions {
    // Training disturbance for the energy objective; empty selects the
    // unit trapezoid 5/6/15/16 s over 21 s.
    std::vector<double> training_disturbance;
    double pad_seconds = 2.0;
    double gamma_cap = 1.5;
    double penalty = 100.0;
    int n_grid = 512;          // search grid; the report uses peak_gain's default
    int max_evals = 20000;
    int restarts = 6;
};

struct SynthesisReport {
    LearningFilter filter;
    double rho = 0;           // spectral radius of A_E
    double gamma = 0;         // peak gain of E
    double gamma_zero = 0;    // peak gain with L = 0
    double energy_ratio = 0;  // ||E e_train|| / ||e_train||
    int evaluations = 0;
};

// Derivative-free search over the FIR taps. Throws SynthesisFailure when the
// error system is unstable or the result does not reduce the training error.
SynthesisReport synthesize_L(const StateSpaceBlock& gn, const StateSpaceBlock& d_blk,
                             const StateSpaceBlock& q_blk, const StateSpaceBlock& c_blk,
                             int n_taps, const SynthesisOptions& opt = {});

struct NominalRun {
    std::vector<double> r, d_p, e_p, z_p, u_p, alpha_p, beta_p, u_bar_p;
};

// Nominal DOB loop on gn; D is fed z_p - r. An optional feedforward series d_f
// is subtracted from the control (the loop seen by the learning filter).
NominalRun nominal_run(const std::vector<double>& r, const std::vector<double>& d_p,
                       const StateSpaceBlock& gn, const StateSpaceBlock& d_blk,
                       const StateSpaceBlock& q_blk, const StateSpaceBlock& c_blk,
                       const std::vector<double>& d_f = {});

std::vector<double> learning_signal(const NominalRun& run, const LearningFilter& L);
std::vector<double> filter_series(const StateSpaceBlock& blk, const std::vector<double>& in);

double two_norm(const std::vector<double>& s);

}  // namespace idob
