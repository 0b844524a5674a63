// Acceptance runner. `--prepare DIR` trains the networks, synthesizes L and
// records training metrics; `--criterion N --cache DIR` checks one criterion
// and prints a single PASS/FAIL line. Without --criterion all nine run.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dob.hpp"
#include "dynamics.hpp"
#include "eig.hpp"
#include "errors.hpp"
#include "learnfilter.hpp"
#include "persist.hpp"
#include "textio.hpp"
#include "workflow.hpp"
#include "../tests/oracles.hpp"

using namespace idob;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string record_path(const std::string& dir) {
    return (std::filesystem::path(dir) / "prepare.txt").string();
}

const char* kRecordHeader = "idob-acceptance 1";

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

int prepare(const Config& c, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const ModelPaths p(dir);

    auto t0 = Clock::now();
    const CnnWorkflow cw = train_cnn_workflow(c);
    const double cnn_s = seconds_since(t0);
    save_cnn(cw.train.model, p.cnn);
    const int be = cw.train.best_epoch;
    std::printf("cnn: best epoch %d, train %.4f, validation %.4f, test %.4f (%.1f s)\n", be,
                cw.train.train_accuracy.at(be - 1), cw.train.validation_accuracy.at(be - 1),
                cw.test_accuracy, cnn_s);

    t0 = Clock::now();
    const LstmWorkflow lw = train_lstm_workflow(c);
    const double lstm_s = seconds_since(t0);
    save_lstm(lw.train.model, p.lstm);
    std::printf("lstm: %d samples (%d skipped), rmse %.6f -> %.6f (%.1f s)\n", lw.samples, lw.skipped,
                lw.train.rmse.front(), lw.train.rmse.back(), lstm_s);

    t0 = Clock::now();
    const SynthesisReport sr = synthesize_workflow(c);
    const double syn_s = seconds_since(t0);
    save_filter(sr.filter, c.dt, p.filter);
    std::printf("L: rho %.6f, gamma %.6f (L = 0: %.6f), energy ratio %.6f (%.2f s)\n", sr.rho,
                sr.gamma, sr.gamma_zero, sr.energy_ratio, syn_s);

    write_text_file(record_path(dir),
                    format_records(kRecordHeader,
                                   {{"cnn_accuracy",
                                     {cw.train.train_accuracy.at(be - 1),
                                      cw.train.validation_accuracy.at(be - 1), cw.test_accuracy}},
                                    {"cnn_seconds", {cnn_s}},
                                    {"lstm_rmse", lw.train.rmse},
                                    {"lstm_samples", {double(lw.samples), double(lw.skipped)}},
                                    {"lstm_seconds", {lstm_s}}}));
    return 0;
}

std::map<std::string, std::vector<double>> load_record(const std::string& dir) {
    return parse_records(read_text_file(record_path(dir)), kRecordHeader, record_path(dir));
}

Models load_models(const std::string& dir) {
    const ModelPaths p(dir);
    return {load_cnn(p.cnn), load_lstm(p.lstm), load_filter(p.filter)};
}

// 1. Ordering IDOB < CDOB < NoDob for every class; class 3 IDOB at least 50%
// below CDOB; under 30 s.
Outcome criterion1(const Config& c, const std::string& dir) {
    const Models m = load_models(dir);
    const auto t0 = Clock::now();
    Outcome o{true, ""};
    double ratio3 = 0;
    for (int k = 1; k <= c.n_classes; ++k) {
        const Comparison cmp = compare_cases(c, k, m);
        const double n = cmp.results[0].flight.metrics.ez_norm;
        const double cd = cmp.results[1].flight.metrics.ez_norm;
        const double id = cmp.results[2].flight.metrics.ez_norm;
        const bool ok = id < cd && cd < n;
        o.pass = o.pass && ok;
        char buf[160];
        std::snprintf(buf, sizeof buf, "class %d: %.3f < %.3f < %.3f %s; ", k, id, cd, n, ok ? "ok" : "VIOLATED");
        o.detail += buf;
        if (k == 3) ratio3 = id / cd;
    }
    const double secs = seconds_since(t0);
    o.pass = o.pass && ratio3 <= 0.5 && secs < 30;
    o.detail += fmt("class-3 IDOB/CDOB = %.4f (need <= 0.5); ", ratio3) + fmt("%.2f s (limit 30)", secs);
    return o;
}

// 2. No DOB, class >= 3: z goes below zero; under 5 s.
Outcome criterion2(const Config& c) {
    const auto t0 = Clock::now();
    Outcome o{true, ""};
    for (int k = 3; k <= c.n_classes; ++k) {
        Scenario sc;
        sc.weight_class = k;
        sc.kind = CaseKind::NoDob;
        const ScenarioResult r = run_case(c, sc, nullptr);
        double zmin = 1e300;
        for (double z : r.flight.log.z) zmin = std::min(zmin, z);
        o.pass = o.pass && r.flight.metrics.crashed;
        o.detail += "class " + std::to_string(k) + fmt(": min z %.3f m; ", zmin);
    }
    const double secs = seconds_since(t0);
    o.pass = o.pass && secs < 5;
    o.detail += fmt("%.2f s (limit 5)", secs);
    return o;
}

// 3. Plateau estimate error: CDOB in (5%, 60%), IDOB combined below 10%.
Outcome criterion3(const Config& c, const std::string& dir) {
    const Models m = load_models(dir);
    const auto t0 = Clock::now();
    Outcome o{true, ""};
    for (int k = 1; k <= c.n_classes; ++k) {
        Scenario sc;
        sc.weight_class = k;
        sc.kind = CaseKind::ConventionalDob;
        const double ec = plateau_estimate_error(c, run_case(c, sc, &m).flight.log, false);
        sc.kind = CaseKind::ImageDob;
        const double ei = plateau_estimate_error(c, run_case(c, sc, &m).flight.log, true);
        const bool ok = ec > 0.05 && ec < 0.60 && ei < 0.10;
        o.pass = o.pass && ok;
        char buf[160];
        std::snprintf(buf, sizeof buf, "class %d: CDOB %.2f%%, IDOB %.2f%%; ", k, 100 * ec, 100 * ei);
        o.detail += buf;
    }
    const double secs = seconds_since(t0);
    o.pass = o.pass && secs < 10;
    o.detail += fmt("%.2f s (limit 10)", secs);
    return o;
}

// 4. Synthesized L: rho(A_E) < 1, gamma < 1, and ||e|| < ||e_p|| on the
// nominal plant with d_p = d; under 60 s including synthesis.
Outcome criterion4(const Config& c) {
    const auto t0 = Clock::now();
    const SynthesisReport sr = synthesize_workflow(c);
    const DobConfig dc = config_dob(c);
    const StateSpaceBlock gn = config_gn(c), cb = config_c_block(c);

    // Independent re-evaluation from a fresh assembly.
    const ErrorSystem E = build_error_system(gn, dc.d_block, dc.q_block, cb, sr.filter.realization);
    const double rho = spectral_radius(E.A);
    const double gamma = peak_gain(E);

    // Loop-level check: the actual loop with d_f = L e_p against the nominal one.
    const std::vector<double> dist =
        zero_padded(c.base_profile().samples, c.dt, c.pad_seconds);
    const std::vector<double> zeros(dist.size(), 0.0);
    const auto e_p = oracle::dob_loop(gn, dc.d_block, dc.q_block, cb, zeros, dist, zeros);
    const auto d_f = oracle::filter(sr.filter.realization, e_p);
    const auto e = oracle::dob_loop(gn, dc.d_block, dc.q_block, cb, zeros, dist, d_f);
    const double ne = two_norm(e), nep = two_norm(e_p);
    const double secs = seconds_since(t0);

    Outcome o;
    o.pass = rho < 1 && gamma < 1 && ne < nep && secs < 60;
    o.detail = fmt("rho(A_E) = %.6f (need < 1); ", rho) + fmt("gamma = %.6f (need < 1", gamma) +
               fmt("; L = 0 gives %.6f); ", sr.gamma_zero) + fmt("||e|| = %.6g", ne) +
               fmt(" vs ||e_p|| = %.6g", nep) + fmt(" (ratio %.6f); ", ne / nep) +
               fmt("%.2f s (limit 60)", secs);
    return o;
}

// 5. Block-matrix E against signal-level difference dynamics, 500 steps.
Outcome criterion5() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0;
    int trials = 0;
    while (trials < 50) {
        const auto g = oracle::random_scalar_block(rng, true);
        const auto d = oracle::random_scalar_block(rng, false);
        const auto q = oracle::random_scalar_block(rng, true);
        const auto cb = oracle::random_scalar_block(rng, false);
        const auto l = oracle::random_scalar_block(rng, false);
        const ErrorSystem E = build_error_system(g, d, q, cb, l);
        // Keep draws whose difference dynamics stay bounded (Eigen's solver).
        if (Eigen::EigenSolver<Mat>(E.A, false).eigenvalues().cwiseAbs().maxCoeff() >= 0.99) continue;
        ++trials;
        std::vector<double> e_p(500);
        for (double& v : e_p) v = U(rng);
        const auto ref = oracle::difference_dynamics(g, d, q, cb, l, e_p);
        Vec x = Vec::Zero(E.A.rows());
        for (std::size_t k = 0; k < e_p.size(); ++k) {
            const double e_minus_ep = (E.C * x)(0) + (E.D - 1.0) * e_p[k];
            worst = std::max(worst, std::abs(e_minus_ep - ref[k]));
            x = E.A * x + E.B * e_p[k];
        }
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = worst <= 1e-9 && secs < 1;
    o.detail = "50 random scalar assemblies, " + fmt("max |difference| %.3g (need <= 1e-9); ", worst) +
               fmt("%.3f s (limit 1)", secs);
    return o;
}

double relative_error(double a, double n) {
    return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-6});
}

// 6. CNN test accuracy >= 80%, gradient check < 1e-4, training under 5 min.
Outcome criterion6(const std::string& dir) {
    auto rec = load_record(dir);
    const double test_acc = rec.at("cnn_accuracy").at(2), secs = rec.at("cnn_seconds").at(0);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    BoxImage img;
    img.h = img.w = 6;
    img.label = 2;
    img.pixels.resize(36);
    for (double& v : img.pixels) v = U(rng);
    CnnModel m = make_cnn(6, 6, 2, 3, 3, 5);
    std::vector<double> g;
    cnn_loss_grad(img, m, g);
    double worst = 0;
    std::vector<double> tmp;
    for (std::size_t i = 0; i < m.params.size(); ++i) {
        const double num = oracle::central_difference(
            [&](double v) {
                CnnModel mm = m;
                mm.params[i] = v;
                return cnn_loss_grad(img, mm, tmp);
            },
            m.params[i], 1e-5);
        worst = std::max(worst, relative_error(g[i], num));
    }
    Outcome o;
    o.pass = test_acc >= 0.8 && worst < 1e-4 && secs < 300;
    o.detail = fmt("test accuracy %.4f (need >= 0.80); ", test_acc) +
               fmt("gradient max relative error %.3g (need < 1e-4); ", worst) +
               fmt("training %.1f s (limit 300)", secs);
    return o;
}

// 7. LSTM final RMSE < 20% of initial on 1000 samples, BPTT check < 1e-4,
// training under 10 min.
Outcome criterion7(const std::string& dir) {
    auto rec = load_record(dir);
    const auto& rmse = rec.at("lstm_rmse");
    const double samples = rec.at("lstm_samples").at(0), secs = rec.at("lstm_seconds").at(0);
    const double ratio = rmse.back() / rmse.front();

    LstmModel m = make_lstm(3, 9);
    m.in_scale = 0.7;
    m.out_scale = 1.3;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<LstmPair> pairs(2);
    for (auto& p : pairs)
        for (int k = 0; k < 12; ++k) p.input.push_back(U(rng)), p.target.push_back(U(rng));
    const std::vector<const LstmPair*> batch = {&pairs[0], &pairs[1]};
    std::vector<double> g;
    lstm_loss_grad(batch, m, &g);
    const std::vector<double> p0 = m.flat();
    double worst = 0;
    for (std::size_t i = 0; i < p0.size(); ++i) {
        const double num = oracle::central_difference(
            [&](double v) {
                std::vector<double> p = p0;
                p[i] = v;
                LstmModel mm = m;
                mm.set_flat(p);
                return lstm_loss_grad(batch, mm, nullptr);
            },
            p0[i], 1e-5);
        worst = std::max(worst, relative_error(g[i], num));
    }
    Outcome o;
    o.pass = ratio < 0.2 && samples == 1000 && worst < 1e-4 && secs < 600;
    o.detail = fmt("RMSE %.5f", rmse.front()) + fmt(" -> %.5f", rmse.back()) +
               fmt(" (ratio %.4f, need < 0.2) on ", ratio) + std::to_string(int(samples)) +
               " sequences; " + fmt("BPTT max relative error %.3g (need < 1e-4); ", worst) +
               fmt("training %.1f s (limit 600)", secs);
    return o;
}

// 8. RK4 order, hover invariance, mixing round trip, constant-disturbance
// recovery on the linear z loop.
Outcome criterion8(const Config& c) {
    const PhysParams& p = c.phys;
    Outcome o{true, ""};

    // Self-convergence on the nonlinear model against a dt/64 reference.
    QuadState s0{};
    s0[0] = 0.3, s0[1] = -0.5, s0[2] = 0.2, s0[3] = 0.4, s0[4] = 0.1, s0[5] = 0.3;
    s0[7] = 0.5, s0[9] = -0.2, s0[11] = 0.1;
    const ControlInput u{p.m * p.g * 1.1, 0.01, -0.02, 0.005};
    const double T = 1.0;
    auto run = [&](double h) {
        QuadState s = s0;
        const int n = static_cast<int>(std::lround(T / h));
        for (int k = 0; k < n; ++k) s = rk4_step(s, u, p, 0.3, h, Model::Full);
        return s;
    };
    auto dist = [](const QuadState& a, const QuadState& b) {
        double m = 0;
        for (int i = 0; i < 12; ++i) m = std::max(m, std::abs(a[i] - b[i]));
        return m;
    };
    const double H = 0.04;
    const QuadState ref = run(H / 64);
    const double e1 = dist(run(H), ref), e2 = dist(run(H / 2), ref);
    const double order = std::log2(e1 / e2);
    const bool ok_order = order >= 3.8 && order <= 4.2;
    o.detail += fmt("RK4 order %.3f [3.8, 4.2]; ", order);

    // Hover invariance for both models.
    double drift = 0;
    for (Model md : {Model::Full, Model::Simplified}) {
        QuadState h{};
        h[6] = 1, h[8] = 1, h[10] = 1;
        const QuadState h0 = h;
        for (int k = 0; k < 1000; ++k) h = rk4_step(h, {p.hover_thrust(), 0, 0, 0}, p, 0, c.dt, md);
        drift = std::max(drift, dist(h, h0));
    }
    const bool ok_hover = drift <= 1e-9;
    o.detail += fmt("hover drift %.3g (<= 1e-9); ", drift);

    // Mixing round trip on random feasible inputs.
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> W(200.0, 900.0);
    double mix_err = 0;
    for (int t = 0; t < 200; ++t) {
        MotorSpeeds w;
        for (double& v : w.w) v = W(rng);
        const ControlInput u0 = mix_motors(w, p);
        const ControlInput u1 = mix_motors(unmix_motors(u0, p), p);
        mix_err = std::max({mix_err, std::abs(u1.u1 - u0.u1), std::abs(u1.u2 - u0.u2),
                            std::abs(u1.u3 - u0.u3), std::abs(u1.u4 - u0.u4)});
    }
    const bool ok_mix = mix_err <= 1e-10;
    o.detail += fmt("mixing round trip %.3g (<= 1e-10); ", mix_err);

    // Constant input disturbance on the linear z loop with the DOB object.
    double worst = 0;
    const std::size_t settle = static_cast<std::size_t>(std::lround(3.0 / c.dt));
    for (double d0 : {0.5, 1.0, 2.0, 3.5, 5.0}) {
        StateSpaceBlock g = config_gn(c), cb = config_c_block(c);
        g.reset();
        cb.reset();
        Dob dob(config_dob(c));
        double u_prev = 0;
        for (std::size_t k = 0; k <= settle + 200; ++k) {
            const double z = (g.C * g.state)(0);
            const double ubar = cb.step(-z);
            const double dh = dob.step(z, u_prev);
            if (k >= settle) worst = std::max(worst, std::abs(dh - d0) / d0);
            const double uk = compensated_input(ubar, dob.saturate(dh), 0.0);
            g.advance(uk + d0);
            u_prev = uk;
        }
    }
    const bool ok_dob = worst < 0.02;
    o.detail += fmt("constant-disturbance estimate error after 3 s %.3f%% (< 2%%)", 100 * worst);
    o.pass = ok_order && ok_hover && ok_mix && ok_dob;
    return o;
}

// 9. Predicted class off by one: IDOB still beats CDOB.
Outcome criterion9(const Config& c, const std::string& dir) {
    const Models m = load_models(dir);
    const auto t0 = Clock::now();
    Outcome o{true, ""};
    for (int k = 1; k <= c.n_classes; ++k) {
        Scenario sc;
        sc.weight_class = k;
        sc.kind = CaseKind::ConventionalDob;
        const double cd = run_case(c, sc, &m).flight.metrics.ez_norm;
        sc.kind = CaseKind::ImageDob;
        for (int off : {-1, +1}) {
            if (k + off < 1 || k + off > c.n_classes) continue;
            sc.class_offset = off;
            const ScenarioResult r = run_case(c, sc, &m);
            const double id = r.flight.metrics.ez_norm;
            const bool ok = id < cd;
            o.pass = o.pass && ok;
            char buf[160];
            std::snprintf(buf, sizeof buf, "class %d as %d: %.3f vs CDOB %.3f%s; ", k,
                          r.predicted_class, id, cd, ok ? "" : " VIOLATED");
            o.detail += buf;
        }
    }
    const double secs = seconds_since(t0);
    o.pass = o.pass && secs < 10;
    o.detail += fmt("%.2f s (limit 10)", secs);
    return o;
}

const char* kTitles[] = {"",
                         "three-case ordering",
                         "case-1 crash",
                         "DOB plateau recovery",
                         "learning-filter conditions",
                         "error-system fidelity",
                         "CNN accuracy and gradient",
                         "LSTM training and gradient",
                         "numerics",
                         "misclassification robustness"};

int run_criterion(int n, const Config& c, const std::string& dir) {
    Outcome o;
    try {
        switch (n) {
        case 1: o = criterion1(c, dir); break;
        case 2: o = criterion2(c); break;
        case 3: o = criterion3(c, dir); break;
        case 4: o = criterion4(c); break;
        case 5: o = criterion5(); break;
        case 6: o = criterion6(dir); break;
        case 7: o = criterion7(dir); break;
        case 8: o = criterion8(c); break;
        case 9: o = criterion9(c, dir); break;
        default: std::fprintf(stderr, "unknown criterion %d\n", n); return 2;
        }
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("error: ") + e.what();
    }
    std::printf("criterion %d %s: %s: %s\n", n, o.pass ? "PASS" : "FAIL", kTitles[n], o.detail.c_str());
    return o.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    std::string prepare_dir, cache_dir, config_path;
    int criterion = 0;
    app.add_option("--prepare", prepare_dir, "train models and write the cache into DIR");
    app.add_option("--cache", cache_dir, "cache written by --prepare");
    app.add_option("--criterion", criterion, "criterion number 1-9 (default: all)")->check(CLI::Range(1, 9));
    app.add_option("--config", config_path, "configuration file");
    CLI11_PARSE(app, argc, argv);

    try {
        const Config c = config_path.empty() ? Config{} : load_config(config_path);
        if (!prepare_dir.empty()) return prepare(c, prepare_dir);
        if (cache_dir.empty()) {
            std::fprintf(stderr, "--cache or --prepare is required\n");
            return 2;
        }
        if (!std::filesystem::exists(record_path(cache_dir))) prepare(c, cache_dir);
        if (criterion) return run_criterion(criterion, c, cache_dir);
        int failed = 0;
        for (int n = 1; n <= 9; ++n) failed += run_criterion(n, c, cache_dir) != 0;
        return failed ? 1 : 0;
    } catch (const Error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", error_code_name(e.code()), e.what());
        return static_cast<int>(e.code());
    }
}
