#include "lstm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "errors.hpp"

namespace idob {

std::vector<double> LstmModel::flat() const {
    std::vector<double> p;
    p.reserve(size());
    for (const Mat* M : {&W, &U})
        for (Eigen::Index j = 0; j < M->cols(); ++j)
            for (Eigen::Index i = 0; i < M->rows(); ++i) p.push_back((*M)(i, j));
    p.insert(p.end(), b.data(), b.data() + b.size());
    p.insert(p.end(), wy.data(), wy.data() + wy.size());
    p.push_back(by);
    return p;
}

void LstmModel::set_flat(const std::vector<double>& p) {
    if (p.size() != size()) throw Error(ErrorCode::ShapeMismatch, "LSTM parameter count mismatch");
    const int H = hidden;
    W.resize(4 * H, 1);
    U.resize(4 * H, H);
    b.resize(4 * H);
    wy.resize(H);
    std::size_t k = 0;
    for (Mat* M : {&W, &U})
        for (Eigen::Index j = 0; j < M->cols(); ++j)
            for (Eigen::Index i = 0; i < M->rows(); ++i) (*M)(i, j) = p[k++];
    for (int i = 0; i < 4 * H; ++i) b(i) = p[k++];
    for (int i = 0; i < H; ++i) wy(i) = p[k++];
    by = p[k++];
}

void LstmModel::validate() const {
    const int H = hidden;
    if (H < 1 || W.rows() != 4 * H || W.cols() != 1 || U.rows() != 4 * H || U.cols() != H ||
        b.size() != 4 * H || wy.size() != H)
        throw Error(ErrorCode::ShapeMismatch, "LSTM matrices do not match the hidden size");
    if (!(in_scale > 0) || !(out_scale > 0))
        throw Error(ErrorCode::InvalidInput, "LSTM scales must be positive");
}

LstmModel make_lstm(int hidden, std::uint64_t seed) {
    if (hidden < 1) throw Error(ErrorCode::InvalidInput, "hidden size must be >= 1");
    LstmModel m;
    m.hidden = hidden;
    std::mt19937_64 rng(seed);
    const double a = 1.0 / std::sqrt(static_cast<double>(hidden));
    std::uniform_real_distribution<double> U(-a, a);
    m.W = Mat::NullaryExpr(4 * hidden, 1, [&]() { return U(rng); });
    m.U = Mat::NullaryExpr(4 * hidden, hidden, [&]() { return U(rng); });
    m.b = Vec::Zero(4 * hidden);
    m.b.segment(hidden, hidden).setOnes();  // forget gate starts open
    m.wy = Vec::NullaryExpr(hidden, [&]() { return U(rng); });
    m.by = 0;
    return m;
}

namespace {

Mat sigmoid(const Mat& z) { return (1.0 + (-z.array()).exp()).inverse().matrix(); }

// Per-step activations for a batch (columns are sequences).
struct Tape {
    std::vector<Mat> I, F, O, G, C, H;
    Mat Y;  // T x B scaled predictions
};

Tape run(const Mat& X, const LstmModel& m) {
    const int H = m.hidden, T = static_cast<int>(X.rows()), B = static_cast<int>(X.cols());
    Tape tp;
    for (auto* v : {&tp.I, &tp.F, &tp.O, &tp.G, &tp.C, &tp.H}) v->resize(T);
    tp.Y.resize(T, B);
    Mat h = Mat::Zero(H, B), c = Mat::Zero(H, B);
    for (int t = 0; t < T; ++t) {
        Mat z = m.U * h + m.W * X.row(t);
        z.colwise() += m.b;
        tp.I[t] = sigmoid(z.topRows(H));
        tp.F[t] = sigmoid(z.middleRows(H, H));
        tp.O[t] = sigmoid(z.middleRows(2 * H, H));
        tp.G[t] = z.bottomRows(H).array().tanh().matrix();
        c = (tp.F[t].array() * c.array() + tp.I[t].array() * tp.G[t].array()).matrix();
        h = (tp.O[t].array() * c.array().tanh()).matrix();
        tp.C[t] = c;
        tp.H[t] = h;
        tp.Y.row(t) = (m.wy.transpose() * h).array() + m.by;
    }
    return tp;
}

Mat batch_inputs(const std::vector<const LstmPair*>& batch, const LstmModel& m, bool target) {
    const std::size_t T = batch.front()->input.size();
    Mat X(T, batch.size());
    for (std::size_t j = 0; j < batch.size(); ++j) {
        const auto& s = target ? batch[j]->target : batch[j]->input;
        if (s.size() != T || batch[j]->target.size() != T)
            throw Error(ErrorCode::ShapeMismatch, "LSTM sequences must share one length");
        const double sc = target ? m.out_scale : m.in_scale;
        for (std::size_t t = 0; t < T; ++t) X(t, j) = s[t] * sc;
    }
    return X;
}

}  // namespace

std::vector<double> lstm_forward(const std::vector<double>& seq, const LstmModel& m) {
    m.validate();
    if (seq.empty()) return {};
    Mat X(seq.size(), 1);
    for (std::size_t t = 0; t < seq.size(); ++t) X(t, 0) = seq[t] * m.in_scale;
    const Tape tp = run(X, m);
    std::vector<double> out(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) out[t] = tp.Y(t, 0) / m.out_scale;
    return out;
}

double lstm_loss_grad(const std::vector<const LstmPair*>& batch, const LstmModel& m,
                      std::vector<double>* grad) {
    m.validate();
    if (batch.empty()) throw Error(ErrorCode::InvalidInput, "empty batch");
    const Mat X = batch_inputs(batch, m, false);
    const Mat Yt = batch_inputs(batch, m, true);
    const int H = m.hidden, T = static_cast<int>(X.rows()), B = static_cast<int>(X.cols());
    if (T == 0) return 0.0;
    const Tape tp = run(X, m);
    const Mat R = tp.Y - Yt;
    const double n = static_cast<double>(T) * B;
    const double loss = R.squaredNorm() / n;
    if (!grad) return loss;

    Mat dW = Mat::Zero(4 * H, 1), dU = Mat::Zero(4 * H, H);
    Vec db = Vec::Zero(4 * H), dwy = Vec::Zero(H);
    double dby = 0;
    Mat dh_next = Mat::Zero(H, B), dc_next = Mat::Zero(H, B);
    Mat dz(4 * H, B);
    const Mat zero = Mat::Zero(H, B);
    for (int t = T - 1; t >= 0; --t) {
        const Eigen::RowVectorXd dy = R.row(t) * (2.0 / n);
        dwy += tp.H[t] * dy.transpose();
        dby += dy.sum();
        const Mat dh = m.wy * dy + dh_next;
        const Mat& c_prev = t > 0 ? tp.C[t - 1] : zero;
        const Mat& h_prev = t > 0 ? tp.H[t - 1] : zero;
        const Eigen::ArrayXXd tc = tp.C[t].array().tanh();
        const Eigen::ArrayXXd dc = dh.array() * tp.O[t].array() * (1 - tc * tc) + dc_next.array();
        const auto &I = tp.I[t].array(), &F = tp.F[t].array(), &O = tp.O[t].array(),
                   &G = tp.G[t].array();
        dz.topRows(H) = (dc * G * I * (1 - I)).matrix();
        dz.middleRows(H, H) = (dc * c_prev.array() * F * (1 - F)).matrix();
        dz.middleRows(2 * H, H) = (dh.array() * tc * O * (1 - O)).matrix();
        dz.bottomRows(H) = (dc * I * (1 - G * G)).matrix();
        dW += dz * X.row(t).transpose();
        dU += dz * h_prev.transpose();
        db += dz.rowwise().sum();
        dh_next = m.U.transpose() * dz;
        dc_next = (dc * F).matrix();
    }
    LstmModel g = m;
    g.W = dW, g.U = dU, g.b = db, g.wy = dwy, g.by = dby;
    *grad = g.flat();
    return loss;
}

double lstm_rmse(const std::vector<LstmPair>& data, const LstmModel& m) {
    if (data.empty()) return 0.0;
    std::vector<const LstmPair*> all;
    for (const auto& p : data) all.push_back(&p);
    // Loss is in scaled target units.
    return std::sqrt(lstm_loss_grad(all, m, nullptr)) / m.out_scale;
}

void fit_lstm_scales(LstmModel& m, const std::vector<LstmPair>& data) {
    double xi = 0, yi = 0;
    for (const auto& p : data) {
        for (double v : p.input) xi = std::max(xi, std::abs(v));
        for (double v : p.target) yi = std::max(yi, std::abs(v));
    }
    m.in_scale = xi > 0 ? 1.0 / xi : 1.0;
    m.out_scale = yi > 0 ? 1.0 / yi : 1.0;
}

LstmTrainResult lstm_train(const std::vector<LstmPair>& data, LstmModel model, int epochs,
                           int batch, double lr, std::uint64_t seed) {
    model.validate();
    if (data.empty()) throw Error(ErrorCode::InvalidInput, "empty LSTM dataset");
    if (batch < 1 || static_cast<std::size_t>(batch) > data.size())
        throw Error(ErrorCode::InvalidInput, "batch must be in [1, dataset size]");
    if (epochs < 0 || !(lr >= 0)) throw Error(ErrorCode::InvalidInput, "bad epochs or lr");

    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    std::vector<double> p = model.flat(), mom(p.size(), 0.0), vel(p.size(), 0.0), g;
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);

    LstmTrainResult res;
    res.rmse.push_back(lstm_rmse(data, model));
    long step = 0;
    for (int ep = 0; ep < epochs; ++ep) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t s = 0; s < order.size(); s += batch) {
            std::vector<const LstmPair*> mb;
            for (std::size_t j = s; j < std::min(order.size(), s + batch); ++j) mb.push_back(&data[order[j]]);
            const double loss = lstm_loss_grad(mb, model, &g);
            if (!std::isfinite(loss))
                throw Error(ErrorCode::TrainingFailure, "LSTM loss became non-finite");
            ++step;
            const double c1 = 1 - std::pow(b1, step), c2 = 1 - std::pow(b2, step);
            for (std::size_t i = 0; i < p.size(); ++i) {
                mom[i] = b1 * mom[i] + (1 - b1) * g[i];
                vel[i] = b2 * vel[i] + (1 - b2) * g[i] * g[i];
                p[i] -= lr * (mom[i] / c1) / (std::sqrt(vel[i] / c2) + eps);
            }
            model.set_flat(p);
        }
        const double r = lstm_rmse(data, model);
        if (!std::isfinite(r)) throw Error(ErrorCode::TrainingFailure, "LSTM loss became non-finite");
        res.rmse.push_back(r);
    }
    res.model = model;
    return res;
}

}  // namespace idob
