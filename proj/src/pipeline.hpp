#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cnn.hpp"
#include "config.hpp"
#include "learnfilter.hpp"
#include "lstm.hpp"
#include "sim.hpp"

namespace idob {

// Downsamples by `factor` (keeping sample 0), runs the LSTM and linearly
// interpolates back to the input length.
std::vector<double> lstm_full_rate(const std::vector<double>& series, const LstmModel& lstm,
                                   int factor);

DisturbanceProfile predict_from_class(int weight_class, const LstmModel& lstm,
                                      const DisturbanceProfile& base, int factor);

// CNN class -> scaled base profile -> LSTM.
DisturbanceProfile predict_input_disturbance(const BoxImage& img, const CnnModel& cnn,
                                             const LstmModel& lstm, const DisturbanceProfile& base,
                                             int factor);

// Flies a hover with the conventional DOB under `output` and recovers the
// input disturbance offline through the nominal z model. Returns full-rate
// series; throws Instability when the flight diverges.
struct RecoveredPair {
    std::vector<double> output, input;
};
RecoveredPair recover_input_disturbance(const Config& c, const std::vector<double>& output);

struct LstmDataset {
    std::vector<LstmPair> pairs;  // downsampled
    int skipped = 0;
};

// Randomly scaled base profiles with jittered edges.
LstmDataset generate_lstm_dataset(const Config& c, int n, std::uint64_t seed);

struct Models {
    CnnModel cnn;
    LstmModel lstm;
    LearningFilter L;
};

enum class CaseKind { NoDob, ConventionalDob, ImageDob };
const char* case_name(CaseKind k);
CaseKind parse_case(const std::string& s);

struct Scenario {
    int weight_class = 1;
    CaseKind kind = CaseKind::ConventionalDob;
    int class_offset = 0;              // added to the CNN's prediction
    bool force_zero_estimate = false;  // DOB runs but its estimate is dropped
};

struct ScenarioResult {
    Scenario scenario;
    FlightResult flight;
    int predicted_class = 0;
    std::vector<double> d_p;  // predicted input disturbance (ImageDob)
};

// models is required for ImageDob only.
ScenarioResult run_case(const Config& c, const Scenario& sc, const Models* models);

struct Comparison {
    std::vector<ScenarioResult> results;  // NoDob, ConventionalDob, ImageDob
    std::string table;
};

Comparison compare_cases(const Config& c, int weight_class, const Models& models);

// Plateau-region mean of |estimate - d| / |d| over [t_grasp + ramp, t_release].
double plateau_estimate_error(const Config& c, const FlightLog& log, bool include_learning);

}  // namespace idob
