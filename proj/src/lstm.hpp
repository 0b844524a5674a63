#pragma once

#include <cstdint>
#include <vector>

#include "statespace.hpp"

namespace idob {

// Vanilla LSTM cell with a scalar input and a linear read-out.
// Gate rows are stacked input, forget, output, candidate.
struct LstmModel {
    int hidden = 16;
    double in_scale = 1.0;   // network sees x * in_scale
    double out_scale = 1.0;  // prediction is read-out / out_scale
    Mat W;                   // 4H x 1
    Mat U;                   // 4H x H
    Vec b;                   // 4H
    Vec wy;                  // H
    double by = 0;

    std::size_t size() const { return static_cast<std::size_t>(4 * hidden * (hidden + 2) + hidden + 1); }
    std::vector<double> flat() const;
    void set_flat(const std::vector<double>& p);
    void validate() const;
};

LstmModel make_lstm(int hidden, std::uint64_t seed);

std::vector<double> lstm_forward(const std::vector<double>& seq, const LstmModel& m);

struct LstmPair {
    std::vector<double> input, target;
};

// Mean squared error in scaled units over the given pairs and its gradient
// with respect to flat(). All pairs must share one length.
double lstm_loss_grad(const std::vector<const LstmPair*>& batch, const LstmModel& m,
                      std::vector<double>* grad);

// RMSE in physical units over the whole set.
double lstm_rmse(const std::vector<LstmPair>& data, const LstmModel& m);

// Sets in_scale and out_scale from the largest magnitudes in the data.
void fit_lstm_scales(LstmModel& m, const std::vector<LstmPair>& data);

struct LstmTrainResult {
    LstmModel model;
    std::vector<double> rmse;  // before training, then after each epoch
};

// Mini-batch Adam on the mean squared error, full-sequence BPTT.
LstmTrainResult lstm_train(const std::vector<LstmPair>& data, LstmModel model, int epochs,
                           int batch, double lr, std::uint64_t seed);

}  // namespace idob
