#pragma once

#include <cstdint>
#include <string>

#include "config.hpp"
#include "pipeline.hpp"

namespace idob {

// End-to-end training and synthesis driven by a Config. Seeds, epochs,
// learning rates and batch sizes all come from the Config.

struct CnnWorkflow {
    CnnTrainResult train;
    double test_accuracy = 0;
};
CnnWorkflow train_cnn_workflow(const Config& c);

struct LstmWorkflow {
    LstmTrainResult train;
    int samples = 0, skipped = 0;
};
LstmWorkflow train_lstm_workflow(const Config& c);

SynthesisReport synthesize_workflow(const Config& c);

// Model file names inside a model directory.
struct ModelPaths {
    std::string cnn, lstm, filter;
    explicit ModelPaths(const std::string& dir);
};

// Loads whatever exists in dir and trains or synthesizes the rest, saving it.
Models load_or_build_models(const Config& c, const std::string& dir);

}  // namespace idob

namespace idob {

// Writes <case>.csv for each result, comparison.txt and plot.gp into dir.
void write_comparison(const Comparison& cmp, const std::string& dir);
// Writes one result as <case>.csv plus metrics.txt.
void write_single(const ScenarioResult& res, const std::string& dir);

// Re-reads every <case>.csv in dir, recomputes metrics into metrics.txt and,
// when all three cases are present, rewrites plot.gp. Returns the metrics text.
std::string regenerate_report(const std::string& dir);

}  // namespace idob
