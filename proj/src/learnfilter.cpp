#include "learnfilter.hpp"

#include <cmath>
#include <string>

#include "eig.hpp"
#include "errors.hpp"
#include "neldermead.hpp"
#include "profile.hpp"

namespace idob {

namespace {

using cd = std::complex<double>;

void check_siso(const StateSpaceBlock& b, const char* name) {
    b.validate(name);
    if (b.inputs() != 1 || b.outputs() != 1)
        throw Error(ErrorCode::DimensionMismatch, std::string(name) + ": block must be SISO");
}

}  // namespace

ErrorSystem build_error_system(const StateSpaceBlock& gn, const StateSpaceBlock& d_blk,
                               const StateSpaceBlock& q_blk, const StateSpaceBlock& c_blk,
                               const StateSpaceBlock& l_blk) {
    check_siso(gn, "gn");
    check_siso(d_blk, "d_blk");
    check_siso(q_blk, "q_blk");
    check_siso(c_blk, "c_blk");
    check_siso(l_blk, "l_blk");
    if (gn.D(0, 0) != 0)
        throw Error(ErrorCode::DimensionMismatch, "gn: feedthrough must be zero");
    if (q_blk.D(0, 0) != 0)
        throw Error(ErrorCode::DimensionMismatch, "q_blk: feedthrough must be zero");

    const int nG = gn.n(), nD = d_blk.n(), nQ = q_blk.n(), nC = c_blk.n(), nL = l_blk.n();
    const int oG = 0, oD = nG, oQ = oD + nD, oC = oQ + nQ, oL = oC + nC, n = oL + nL;
    const Mat &AG = gn.A, &BG = gn.B, &CG = gn.C;
    const Mat &AD = d_blk.A, &BD = d_blk.B, &CD = d_blk.C;
    const Mat &AQ = q_blk.A, &BQ = q_blk.B, &CQ = q_blk.C;
    const Mat &AC = c_blk.A, &BC = c_blk.B, &CC = c_blk.C;
    const Mat &AL = l_blk.A, &BL = l_blk.B, &CL = l_blk.C;
    const double DD = d_blk.D(0, 0), DC = c_blk.D(0, 0), DL = l_blk.D(0, 0);

    ErrorSystem E;
    E.block_dims = {nG, nD, nQ, nC, nL};
    E.A = Mat::Zero(n, n);
    E.A.block(oG, oG, nG, nG) = AG - BG * CG * (DC + DD);
    E.A.block(oG, oD, nG, nD) = -BG * CD;
    E.A.block(oG, oQ, nG, nQ) = BG * CQ;
    E.A.block(oG, oC, nG, nC) = BG * CC;
    E.A.block(oG, oL, nG, nL) = -BG * CL;
    E.A.block(oD, oG, nD, nG) = BD * CG;
    E.A.block(oD, oD, nD, nD) = AD;
    E.A.block(oQ, oG, nQ, nG) = -BQ * CG * (DC + DD);
    E.A.block(oQ, oD, nQ, nD) = -BQ * CD;
    E.A.block(oQ, oQ, nQ, nQ) = AQ + BQ * CQ;
    E.A.block(oQ, oC, nQ, nC) = BQ * CC;
    E.A.block(oQ, oL, nQ, nL) = -BQ * CL;
    E.A.block(oC, oG, nC, nG) = -BC * CG;
    E.A.block(oC, oC, nC, nC) = AC;
    E.A.block(oL, oL, nL, nL) = AL;

    E.B = Mat::Zero(n, 1);
    E.B.block(oG, 0, nG, 1) = -BG * DL;
    E.B.block(oQ, 0, nQ, 1) = -BQ * DL;
    E.B.block(oL, 0, nL, 1) = BL;

    E.C = Mat::Zero(1, n);
    E.C.block(0, oG, 1, nG) = -CG;
    E.D = 1.0;
    return E;
}

std::complex<double> freq_response(const Mat& A, const Mat& B, const Mat& C, double D, double w) {
    const int n = static_cast<int>(A.rows());
    if (n == 0) return D;
    Eigen::MatrixXcd M = -A.cast<cd>();
    M.diagonal().array() += std::polar(1.0, w);
    const Eigen::VectorXcd x = M.partialPivLu().solve(B.col(0).cast<cd>());
    return (C.row(0).cast<cd>() * x)(0) + D;
}

double peak_gain(const Mat& A, const Mat& B, const Mat& C, double D, int n_grid) {
    if (n_grid < 1) throw Error(ErrorCode::InvalidInput, "n_grid must be >= 1");
    if (A.rows() > 0 && !(spectral_radius(A) < 1))
        throw Error(ErrorCode::Precondition, "A is not Schur stable; peak gain unbounded");
    auto mag = [&](double w) { return std::abs(freq_response(A, B, C, D, w)); };

    const double h = M_PI / n_grid;
    double best = -1, wbest = 0;
    for (int i = 0; i <= n_grid; ++i) {
        const double w = h * i, g = mag(w);
        if (g > best) best = g, wbest = w;
    }
    const double w0 = wbest;
    for (int j = -3; j <= 3; ++j) {
        const double w = std::clamp(w0 + j * h / 4, 0.0, M_PI);
        const double g = mag(w);
        if (g > best) best = g, wbest = w;
    }
    // Golden-section polish of the local maximum.
    double a = std::max(0.0, wbest - h / 4), b = std::min(M_PI, wbest + h / 4);
    const double r = (std::sqrt(5.0) - 1) / 2;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = mag(c), fd = mag(d);
    for (int it = 0; it < 60 && b - a > 1e-13; ++it) {
        if (fc > fd) {
            b = d, d = c, fd = fc;
            c = b - r * (b - a), fc = mag(c);
        } else {
            a = c, c = d, fc = fd;
            d = a + r * (b - a), fd = mag(d);
        }
    }
    return std::max({best, fc, fd});
}

StateSpaceBlock pd_controller_block(double kp, double kd, double dt) {
    if (!(dt > 0)) throw Error(ErrorCode::InvalidInput, "dt must be positive");
    return scalar_block(0, 1, -kd / dt, kp + kd / dt);
}

LearningFilter make_fir_filter(const std::vector<double>& taps) {
    if (taps.empty()) throw Error(ErrorCode::InvalidInput, "FIR needs at least the feedthrough");
    const int n = static_cast<int>(taps.size()) - 1;
    Mat A = Mat::Zero(n, n), B = Mat::Zero(n, 1), C(1, n), D(1, 1);
    for (int i = 1; i < n; ++i) A(i, i - 1) = 1;
    if (n > 0) B(0, 0) = 1;
    for (int i = 0; i < n; ++i) C(0, i) = taps[i + 1];
    D(0, 0) = taps[0];
    return {StateSpaceBlock(A, B, C, D), taps};
}

LearningFilter fir_from_realization(const StateSpaceBlock& blk) {
    check_siso(blk, "learning filter");
    std::vector<double> taps{blk.D(0, 0)};
    for (int i = 0; i < blk.n(); ++i) taps.push_back(blk.C(0, i));
    LearningFilter f = make_fir_filter(taps);
    if (!f.realization.A.isApprox(blk.A, 0) || !f.realization.B.isApprox(blk.B, 0))
        throw Error(ErrorCode::InvalidInput, "learning filter is not an FIR shift realization");
    return f;
}

std::vector<double> filter_series(const StateSpaceBlock& blk, const std::vector<double>& in) {
    StateSpaceBlock b = blk;
    b.reset();
    std::vector<double> out(in.size());
    for (std::size_t k = 0; k < in.size(); ++k) out[k] = b.step(in[k]);
    return out;
}

NominalRun nominal_run(const std::vector<double>& r, const std::vector<double>& d_p,
                       const StateSpaceBlock& gn, const StateSpaceBlock& d_blk,
                       const StateSpaceBlock& q_blk, const StateSpaceBlock& c_blk,
                       const std::vector<double>& d_f) {
    if (r.size() != d_p.size() || (!d_f.empty() && d_f.size() != r.size()))
        throw Error(ErrorCode::InvalidInput, "series lengths differ");
    StateSpaceBlock G = gn, D = d_blk, Q = q_blk, C = c_blk;
    for (auto* b : {&G, &D, &Q, &C}) b->reset();
    const std::size_t N = r.size();
    NominalRun run;
    run.r = r;
    run.d_p = d_p;
    for (auto* v : {&run.e_p, &run.z_p, &run.u_p, &run.alpha_p, &run.beta_p, &run.u_bar_p})
        v->resize(N);
    for (std::size_t k = 0; k < N; ++k) {
        const double z = G.output(0.0);
        const double e = r[k] - z;
        const double ubar = C.step(e);
        const double alpha = D.step(z - r[k]);
        const double beta = Q.output(0.0);
        const double u = ubar - (alpha - beta) - (d_f.empty() ? 0.0 : d_f[k]);
        Q.advance(u);
        G.advance(u + d_p[k]);
        if (!std::isfinite(z) || std::abs(z) > 1e8)
            throw StepError(ErrorCode::Instability, "nominal loop diverged", static_cast<long>(k));
        run.e_p[k] = e;
        run.z_p[k] = z;
        run.u_p[k] = u;
        run.alpha_p[k] = alpha;
        run.beta_p[k] = beta;
        run.u_bar_p[k] = ubar;
    }
    return run;
}

std::vector<double> learning_signal(const NominalRun& run, const LearningFilter& L) {
    return filter_series(L.realization, run.e_p);
}

double two_norm(const std::vector<double>& s) {
    long double acc = 0;
    for (double v : s) acc += static_cast<long double>(v) * v;
    return static_cast<double>(std::sqrt(acc));
}

SynthesisReport synthesize_L(const StateSpaceBlock& gn, const StateSpaceBlock& d_blk,
                             const StateSpaceBlock& q_blk, const StateSpaceBlock& c_blk,
                             int n_taps, const SynthesisOptions& opt) {
    if (n_taps < 1) throw Error(ErrorCode::InvalidInput, "n_taps must be >= 1");
    const int np = n_taps + 1;
    const ErrorSystem E0 =
        build_error_system(gn, d_blk, q_blk, c_blk, make_fir_filter(std::vector<double>(np)).realization);
    SynthesisReport rep;
    rep.rho = spectral_radius(E0.A);
    if (!(rep.rho < 1))
        throw Error(ErrorCode::SynthesisFailure,
                    "error system unstable for every FIR filter (rho = " + std::to_string(rep.rho) + ")");
    rep.gamma_zero = peak_gain(E0);

    // Loop part of E without the filter states: e = e_p + T d_f.
    const int n4 = E0.block_dims[0] + E0.block_dims[1] + E0.block_dims[2] + E0.block_dims[3];
    const Mat At = E0.A.topLeftCorner(n4, n4);
    const Mat Ct = E0.C.leftCols(n4);
    Mat bf = Mat::Zero(n4, 1);
    const int oQ = E0.block_dims[0] + E0.block_dims[1];
    bf.topRows(gn.n()) = -gn.B;
    bf.block(oQ, 0, q_blk.n(), 1) = -q_blk.B;

    // Training error from the nominal loop.
    const double dt = gn.A(0, 1);
    std::vector<double> dist = opt.training_disturbance;
    if (dist.empty()) dist = make_trapezoid(1.0, ProfileTiming{}, dt).samples;
    dist = zero_padded(dist, dt, opt.pad_seconds);
    const std::vector<double> zeros(dist.size(), 0.0);
    const NominalRun base = nominal_run(zeros, dist, gn, d_blk, q_blk, c_blk);
    const std::vector<double>& a = base.e_p;
    const double a2 = two_norm(a) * two_norm(a);
    if (!(a2 > 0)) throw Error(ErrorCode::SynthesisFailure, "training error is identically zero");

    // Response of T to e_p; shifted copies give the columns of R.
    const std::size_t N = a.size();
    const std::vector<double> r0 = filter_series(StateSpaceBlock(At, bf, Ct, Mat::Zero(1, 1)), a);
    Mat R = Mat::Zero(N, np);
    for (int j = 0; j < np; ++j)
        for (std::size_t k = j; k < N; ++k) R(k, j) = r0[k - j];
    const Vec av = Eigen::Map<const Vec>(a.data(), N);
    const Mat G = R.transpose() * R / a2;
    const Vec g = R.transpose() * av / a2;

    // Frequency grid for the peak-gain penalty.
    const int ng = opt.n_grid;
    Eigen::MatrixXcd M(ng + 1, np);
    for (int i = 0; i <= ng; ++i) {
        const double w = M_PI * i / ng;
        const cd T = freq_response(At, bf, Ct, 0.0, w);
        for (int j = 0; j < np; ++j) M(i, j) = T * std::polar(1.0, -w * j);
    }
    auto gamma_of = [&](const Vec& th) {
        const Eigen::VectorXcd v = M * th.cast<cd>();
        return (v.array() + 1.0).abs().maxCoeff();
    };
    auto energy_of = [&](const Vec& th) { return 1 + 2 * g.dot(th) + th.dot(G * th); };

    // Whitened coordinates: energy is isotropic in y = U th, G = U^T U.
    const double ridge = 1e-12 * G.trace();
    const Eigen::LLT<Mat> llt(G + ridge * Mat::Identity(np, np));
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::SynthesisFailure, "training Gram matrix not positive definite");
    const Mat U = llt.matrixU();
    auto theta_of = [&](const Vec& y) -> Vec { return U.triangularView<Eigen::Upper>().solve(y); };

    double penalty = opt.penalty;
    auto objective = [&](const Vec& y) {
        const Vec th = theta_of(y);
        const double over = std::max(0.0, gamma_of(th) - opt.gamma_cap);
        return energy_of(th) + penalty * over * over;
    };

    // Model-matching start: cancel the nominal residual at DC.
    Vec th0 = Vec::Zero(np);
    const double T0 = freq_response(At, bf, Ct, 0.0, 0.0).real();
    if (std::abs(T0) > 1e-12) th0(0) = -1.0 / T0;
    Vec y = U * th0;
    double step = 0.5;
    int evals = 0;
    for (int rs = 0; rs < opt.restarts && evals < opt.max_evals; ++rs) {
        const auto res = nelder_mead(objective, y, step, (opt.max_evals - evals) / (opt.restarts - rs));
        evals += res.evaluations;
        y = res.x;
        step *= 0.5;
        penalty *= 4;
    }

    const Vec th = theta_of(y);
    std::vector<double> taps(th.data(), th.data() + np);
    rep.filter = make_fir_filter(taps);
    rep.evaluations = evals;

    // Independent re-evaluation.
    const ErrorSystem E = build_error_system(gn, d_blk, q_blk, c_blk, rep.filter.realization);
    rep.rho = spectral_radius(E.A);
    if (!(rep.rho < 1)) throw Error(ErrorCode::SynthesisFailure, "synthesized error system unstable");
    rep.gamma = peak_gain(E);
    const NominalRun act = nominal_run(zeros, dist, gn, d_blk, q_blk, c_blk,
                                       learning_signal(base, rep.filter));
    rep.energy_ratio = two_norm(act.e_p) / std::sqrt(a2);
    if (!(rep.energy_ratio < 1))
        throw Error(ErrorCode::SynthesisFailure,
                    "filter does not reduce the training error (ratio " +
                        std::to_string(rep.energy_ratio) + ", gamma " + std::to_string(rep.gamma) + ")");
    return rep;
}

}  // namespace idob
