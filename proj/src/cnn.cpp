#include "cnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "errors.hpp"

namespace idob {

void CnnModel::validate() const {
    if (in_h < k || in_w < k || k < 1 || n_filters < 1 || n_classes < 1 || pool_h() < 1 ||
        pool_w() < 1)
        throw Error(ErrorCode::ShapeMismatch, "invalid CNN dimensions");
    if (params.size() != size())
        throw Error(ErrorCode::ShapeMismatch, "CNN parameter count does not match dimensions");
}

CnnModel make_cnn(int in_h, int in_w, int n_filters, int k, int n_classes, std::uint64_t seed) {
    CnnModel m;
    m.in_h = in_h, m.in_w = in_w, m.n_filters = n_filters, m.k = k, m.n_classes = n_classes;
    m.params.assign(m.size(), 0.0);
    m.validate();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    const double sk = std::sqrt(2.0 / (k * k)), sf = std::sqrt(1.0 / m.features());
    for (std::size_t i = 0; i < m.off_conv_bias(); ++i) m.params[i] = sk * n01(rng);
    for (std::size_t i = m.off_fc_w(); i < m.off_fc_b(); ++i) m.params[i] = sf * n01(rng);
    return m;
}

double relu(double x) { return x > 0 ? x : 0.0; }

std::vector<double> max_pool2(const std::vector<double>& x, int h, int w) {
    const int ph = h / 2, pw = w / 2;
    std::vector<double> out(static_cast<std::size_t>(ph) * pw);
    for (int i = 0; i < ph; ++i)
        for (int j = 0; j < pw; ++j) {
            const double* r0 = &x[(2 * i) * w + 2 * j];
            const double* r1 = r0 + w;
            out[i * pw + j] = std::max({r0[0], r0[1], r1[0], r1[1]});
        }
    return out;
}

namespace {

struct Activations {
    std::vector<double> conv;     // pre-relu, n_filters x ch x cw
    std::vector<double> pooled;   // n_filters x ph x pw
    std::vector<int> argmax;      // conv index chosen by each pool cell
    std::vector<double> probs;
};

void check_image(const BoxImage& img, const CnnModel& m) {
    if (img.h != m.in_h || img.w != m.in_w ||
        img.pixels.size() != static_cast<std::size_t>(img.h) * img.w)
        throw Error(ErrorCode::ShapeMismatch, "image shape does not match the CNN input");
}

Activations forward(const BoxImage& img, const CnnModel& m) {
    check_image(img, m);
    const int F = m.n_filters, K = m.k, ch = m.conv_h(), cw = m.conv_w();
    const int ph = m.pool_h(), pw = m.pool_w(), W = m.in_w;
    const double* kern = m.params.data();
    const double* cb = kern + m.off_conv_bias();
    Activations a;
    a.conv.assign(static_cast<std::size_t>(F) * ch * cw, 0.0);
    for (int f = 0; f < F; ++f) {
        double* out = &a.conv[static_cast<std::size_t>(f) * ch * cw];
        const double* kf = kern + f * K * K;
        for (int i = 0; i < ch; ++i)
            for (int j = 0; j < cw; ++j) {
                double s = cb[f];
                for (int p = 0; p < K; ++p) {
                    const double* row = &img.pixels[(i + p) * W + j];
                    for (int q = 0; q < K; ++q) s += kf[p * K + q] * row[q];
                }
                out[i * cw + j] = s;
            }
    }
    a.pooled.resize(static_cast<std::size_t>(F) * ph * pw);
    a.argmax.resize(a.pooled.size());
    for (int f = 0; f < F; ++f)
        for (int i = 0; i < ph; ++i)
            for (int j = 0; j < pw; ++j) {
                int best = -1;
                double bv = 0;
                for (int di = 0; di < 2; ++di)
                    for (int dj = 0; dj < 2; ++dj) {
                        const int idx = (f * ch + 2 * i + di) * cw + 2 * j + dj;
                        const double v = relu(a.conv[idx]);
                        if (best < 0 || v > bv) best = idx, bv = v;
                    }
                const int o = (f * ph + i) * pw + j;
                a.pooled[o] = bv;
                a.argmax[o] = best;
            }
    const int C = m.n_classes, D = m.features();
    const double* fw = m.params.data() + m.off_fc_w();
    const double* fb = m.params.data() + m.off_fc_b();
    std::vector<double> z(C);
    for (int c = 0; c < C; ++c) {
        double s = fb[c];
        const double* wr = fw + static_cast<std::size_t>(c) * D;
        for (int d = 0; d < D; ++d) s += wr[d] * a.pooled[d];
        z[c] = s;
    }
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0;
    for (double& v : z) sum += (v = std::exp(v - zmax));
    for (double& v : z) v /= sum;
    a.probs = std::move(z);
    return a;
}

}  // namespace

std::vector<double> cnn_forward(const BoxImage& img, const CnnModel& m) {
    m.validate();
    return forward(img, m).probs;
}

int cnn_predict(const BoxImage& img, const CnnModel& m) {
    const auto p = cnn_forward(img, m);
    return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin()) + 1;
}

double cnn_loss_grad(const BoxImage& img, const CnnModel& m, std::vector<double>& grad) {
    m.validate();
    if (img.label < 1 || img.label > m.n_classes)
        throw Error(ErrorCode::InvalidInput, "image label outside the class range");
    const Activations a = forward(img, m);
    const int K = m.k, ch = m.conv_h(), cw = m.conv_w(), W = m.in_w;
    const int C = m.n_classes, D = m.features();
    grad.assign(m.size(), 0.0);
    const double loss = -std::log(std::max(a.probs[img.label - 1], 1e-300));

    std::vector<double> dz(a.probs);
    dz[img.label - 1] -= 1.0;
    const double* fw = m.params.data() + m.off_fc_w();
    double* gfw = grad.data() + m.off_fc_w();
    double* gfb = grad.data() + m.off_fc_b();
    std::vector<double> dpool(D, 0.0);
    for (int c = 0; c < C; ++c) {
        gfb[c] = dz[c];
        const double* wr = fw + static_cast<std::size_t>(c) * D;
        double* gr = gfw + static_cast<std::size_t>(c) * D;
        for (int d = 0; d < D; ++d) {
            gr[d] = dz[c] * a.pooled[d];
            dpool[d] += dz[c] * wr[d];
        }
    }
    // Route through the pool and relu to conv outputs.
    double* gk = grad.data();
    double* gcb = grad.data() + m.off_conv_bias();
    for (int o = 0; o < D; ++o) {
        const int idx = a.argmax[o];
        if (a.conv[idx] <= 0 || dpool[o] == 0) continue;
        const int f = idx / (ch * cw), rem = idx % (ch * cw), i = rem / cw, j = rem % cw;
        const double g = dpool[o];
        gcb[f] += g;
        double* kf = gk + f * K * K;
        for (int p = 0; p < K; ++p)
            for (int q = 0; q < K; ++q) kf[p * K + q] += g * img.pixels[(i + p) * W + j + q];
    }
    return loss;
}

double cnn_accuracy(const std::vector<BoxImage>& data, const CnnModel& m) {
    if (data.empty()) return 0.0;
    int ok = 0;
    for (const auto& img : data) ok += cnn_predict(img, m) == img.label;
    return static_cast<double>(ok) / data.size();
}

CnnTrainResult cnn_train(const std::vector<BoxImage>& train, const std::vector<BoxImage>& val,
                         CnnModel model, int epochs, double lr, std::uint64_t seed) {
    model.validate();
    if (epochs < 0 || !(lr >= 0)) throw Error(ErrorCode::InvalidInput, "bad epochs or lr");
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad;

    CnnTrainResult res;
    res.model = model;
    double best_val = -1;
    for (int ep = 0; ep < epochs; ++ep) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i : order) {
            const double loss = cnn_loss_grad(train[i], model, grad);
            if (!std::isfinite(loss))
                throw Error(ErrorCode::TrainingFailure,
                            "CNN loss became non-finite; reduce the learning rate");
            for (std::size_t j = 0; j < grad.size(); ++j) model.params[j] -= lr * grad[j];
        }
        res.train_accuracy.push_back(cnn_accuracy(train, model));
        const double va = cnn_accuracy(val, model);
        res.validation_accuracy.push_back(va);
        if (va > best_val) {
            best_val = va;
            res.model = model;
            res.best_epoch = ep + 1;
        }
    }
    return res;
}

}  // namespace idob
