#pragma once

#include <cstdint>
#include <vector>

#include "images.hpp"

namespace idob {

// conv (valid, n_filters k x k) -> relu -> 2x2 max-pool -> affine -> softmax.
// Parameters are stored flat: kernels, conv biases, fc weights, fc biases.
struct CnnModel {
    int in_h = 32, in_w = 32, n_filters = 8, k = 3, n_classes = 5;
    std::vector<double> params;

    int conv_h() const { return in_h - k + 1; }
    int conv_w() const { return in_w - k + 1; }
    int pool_h() const { return conv_h() / 2; }
    int pool_w() const { return conv_w() / 2; }
    int features() const { return n_filters * pool_h() * pool_w(); }
    std::size_t off_conv_bias() const { return static_cast<std::size_t>(n_filters) * k * k; }
    std::size_t off_fc_w() const { return off_conv_bias() + n_filters; }
    std::size_t off_fc_b() const { return off_fc_w() + static_cast<std::size_t>(n_classes) * features(); }
    std::size_t size() const { return off_fc_b() + n_classes; }

    void validate() const;
};

CnnModel make_cnn(int in_h, int in_w, int n_filters, int k, int n_classes, std::uint64_t seed);

double relu(double x);
// 2x2 stride-2 max-pool of a row-major h x w map.
std::vector<double> max_pool2(const std::vector<double>& x, int h, int w);

std::vector<double> cnn_forward(const BoxImage& img, const CnnModel& m);
int cnn_predict(const BoxImage& img, const CnnModel& m);  // 1-based class

// Cross-entropy loss for one labelled image; grad is resized to m.size().
double cnn_loss_grad(const BoxImage& img, const CnnModel& m, std::vector<double>& grad);

double cnn_accuracy(const std::vector<BoxImage>& data, const CnnModel& m);

struct CnnTrainResult {
    CnnModel model;  // parameters at peak validation accuracy
    std::vector<double> train_accuracy, validation_accuracy;
    int best_epoch = 0;
};

// SGD with batch size one, shuffled each epoch. Throws TrainingFailure on a
// non-finite loss.
CnnTrainResult cnn_train(const std::vector<BoxImage>& train, const std::vector<BoxImage>& val,
                         CnnModel model, int epochs, double lr, std::uint64_t seed);

}  // namespace idob
