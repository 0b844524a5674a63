#include "pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "errors.hpp"

namespace idob {

std::vector<double> lstm_full_rate(const std::vector<double>& series, const LstmModel& lstm,
                                   int factor) {
    if (factor < 1) throw Error(ErrorCode::InvalidInput, "downsample factor must be >= 1");
    if (series.empty()) return {};
    std::vector<double> coarse;
    for (std::size_t k = 0; k < series.size(); k += factor) coarse.push_back(series[k]);
    const std::vector<double> y = lstm_forward(coarse, lstm);
    std::vector<double> out(series.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const std::size_t i = k / factor;
        const double frac = static_cast<double>(k % factor) / factor;
        out[k] = i + 1 < y.size() ? y[i] + frac * (y[i + 1] - y[i]) : y[i];
    }
    return out;
}

DisturbanceProfile predict_from_class(int weight_class, const LstmModel& lstm,
                                      const DisturbanceProfile& base, int factor) {
    DisturbanceProfile p = form_output_profile(weight_class, base);
    p.samples = lstm_full_rate(p.samples, lstm, factor);
    return p;
}

DisturbanceProfile predict_input_disturbance(const BoxImage& img, const CnnModel& cnn,
                                             const LstmModel& lstm, const DisturbanceProfile& base,
                                             int factor) {
    return predict_from_class(cnn_predict(img, cnn), lstm, base, factor);
}

RecoveredPair recover_input_disturbance(const Config& c, const std::vector<double>& output) {
    FlightOptions opt;
    opt.dob = true;
    opt.hover_start = true;
    opt.d = output;
    const FlightResult fr = simulate_flight(c, opt);
    if (fr.diverged) throw StepError(ErrorCode::Instability, "dataset flight diverged", fr.last_valid_step);
    const FlightLog& L = fr.log;
    const std::size_t N = L.size();
    const double m = c.phys.m, g = c.phys.g;
    RecoveredPair rp;
    rp.output = output;
    rp.input.resize(N);
    for (std::size_t k = 0; k + 1 < N; ++k)
        rp.input[k] = m * (L.vz[k + 1] - L.vz[k]) / c.dt + m * g - L.u1[k];
    if (N >= 2) rp.input[N - 1] = rp.input[N - 2];
    return rp;
}

LstmDataset generate_lstm_dataset(const Config& c, int n, std::uint64_t seed) {
    if (n < 1) throw Error(ErrorCode::InvalidInput, "dataset size must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto uni = [&](double a, double b) { return a + (b - a) * U(rng); };
    const int f = c.lstm_downsample;
    LstmDataset ds;
    while (static_cast<int>(ds.pairs.size()) < n) {
        ProfileTiming t = c.timing();
        const double j = c.lstm_jitter_s;
        t.t_grasp_start += uni(-j, j);
        t.t_grasp_end += uni(-j, j);
        t.t_release_start += uni(-j, j);
        t.t_release_end += uni(-j, j);
        const double amp = uni(c.lstm_amp_min, c.lstm_amp_max) * c.base_magnitude;
        const DisturbanceProfile prof = make_trapezoid(amp, t, c.dt);
        RecoveredPair rp;
        try {
            rp = recover_input_disturbance(c, prof.samples);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Instability && e.code() != ErrorCode::IntegrationBlowup) throw;
            std::fprintf(stderr, "lstm dataset: skipped sample (%s)\n", e.what());
            ++ds.skipped;
            continue;
        }
        LstmPair p;
        for (std::size_t k = 0; k < rp.output.size(); k += f) {
            p.input.push_back(rp.output[k]);
            p.target.push_back(rp.input[k]);
        }
        ds.pairs.push_back(std::move(p));
    }
    return ds;
}

const char* case_name(CaseKind k) {
    switch (k) {
    case CaseKind::NoDob: return "nodob";
    case CaseKind::ConventionalDob: return "cdob";
    case CaseKind::ImageDob: return "idob";
    }
    return "?";
}

CaseKind parse_case(const std::string& s) {
    if (s == "nodob") return CaseKind::NoDob;
    if (s == "cdob") return CaseKind::ConventionalDob;
    if (s == "idob") return CaseKind::ImageDob;
    throw Error(ErrorCode::InvalidInput, "unknown case '" + s + "' (nodob|cdob|idob)");
}

ScenarioResult run_case(const Config& c, const Scenario& sc, const Models* models) {
    c.validate();
    if (sc.weight_class < 1 || sc.weight_class > c.n_classes)
        throw Error(ErrorCode::InvalidInput, "weight class outside 1..n_classes");
    const DisturbanceProfile base = c.base_profile();
    ScenarioResult res;
    res.scenario = sc;

    FlightOptions opt;
    opt.d = form_output_profile(sc.weight_class, base).samples;
    opt.dob = sc.kind != CaseKind::NoDob;
    opt.force_zero_estimate = sc.force_zero_estimate;

    if (sc.kind == CaseKind::ImageDob) {
        if (!models) throw Error(ErrorCode::Precondition, "image DOB needs trained models and L");
        const BoxImage img = canonical_image(sc.weight_class);
        res.predicted_class = std::max(1, cnn_predict(img, models->cnn) + sc.class_offset);
        DisturbanceProfile dp = predict_from_class(res.predicted_class, models->lstm, base, c.lstm_downsample);
        // No prediction exists before the image is taken.
        const double t_image = c.t_grasp - c.hover_before_image_s;
        for (std::size_t k = 0; k < dp.samples.size(); ++k)
            if (k * c.dt < t_image) dp.samples[k] = 0;
        const std::vector<double> r(dp.samples.size(), 0.0);
        const DobConfig dc = config_dob(c);
        const NominalRun run =
            nominal_run(r, dp.samples, config_gn(c), dc.d_block, dc.q_block, config_c_block(c));
        opt.d_f = learning_signal(run, models->L);
        opt.e_p = run.e_p;
        res.d_p = dp.samples;
    }
    res.flight = simulate_flight(c, opt);
    return res;
}

Comparison compare_cases(const Config& c, int weight_class, const Models& models) {
    Comparison cmp;
    char line[256];
    cmp.table = "case    class  ez_norm      max_z_dev    crashed  diverged\n";
    for (CaseKind k : {CaseKind::NoDob, CaseKind::ConventionalDob, CaseKind::ImageDob}) {
        Scenario sc;
        sc.weight_class = weight_class;
        sc.kind = k;
        cmp.results.push_back(run_case(c, sc, &models));
        const auto& r = cmp.results.back().flight;
        std::snprintf(line, sizeof line, "%-7s %5d  %-11.6f  %-11.6f  %-7s  %s\n", case_name(k),
                      weight_class, r.metrics.ez_norm, r.metrics.max_z_dev,
                      r.metrics.crashed ? "yes" : "no", r.diverged ? "yes" : "no");
        cmp.table += line;
    }
    return cmp;
}

double plateau_estimate_error(const Config& c, const FlightLog& log, bool include_learning) {
    const double a = c.t_grasp + c.ramp_s, b = c.t_release;
    double acc = 0;
    int n = 0;
    for (std::size_t k = 0; k < log.size(); ++k) {
        if (log.t[k] < a - 1e-9 || log.t[k] > b + 1e-9 || log.d[k] == 0) continue;
        const double est = log.d_hat[k] + (include_learning ? log.d_f[k] : 0.0);
        acc += std::abs(est - log.d[k]) / std::abs(log.d[k]);
        ++n;
    }
    return n ? acc / n : 0.0;
}

}  // namespace idob
