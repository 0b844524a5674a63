#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cnn.hpp"
#include "learnfilter.hpp"
#include "lstm.hpp"
#include "sim.hpp"

namespace idob {

const std::vector<std::string>& csv_columns();
void export_csv(const FlightLog& log, const std::string& path);
FlightLog import_csv(const std::string& path);

// gnuplot script with five stacked panels: altitude for all cases, the
// conventional estimate, the image-based combined estimate, position and
// velocity for the two DOB cases. Every input CSV must exist.
struct PlotInputs {
    std::string nodob_csv, cdob_csv, idob_csv;
};
std::string plot_script(const PlotInputs& in, const std::string& png_name);
void emit_plot_script(const PlotInputs& in, const std::string& script_path,
                      const std::string& png_name = "comparison.png");

void save_cnn(const CnnModel& m, const std::string& path);
CnnModel load_cnn(const std::string& path);
void save_lstm(const LstmModel& m, const std::string& path);
LstmModel load_lstm(const std::string& path);

// Row-major matrices with a sample-time header.
void save_filter(const LearningFilter& L, double dt, const std::string& path);
LearningFilter load_filter(const std::string& path, double* dt = nullptr);

}  // namespace idob
