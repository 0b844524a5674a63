#include "images.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "errors.hpp"

namespace idob {

namespace {

constexpr double kRotation = 15.0 * M_PI / 180.0;

double nominal_side(int k) { return 5.0 + 3.2 * k; }
// Heavier boxes are drawn brighter; clamped for classes beyond five.
double nominal_shade(int k) { return std::min(0.45 + 0.1 * k, 0.95); }

struct BoxSpec {
    double cx, cy, half_w, half_h, angle, shade, background, gradient;
};

BoxImage render(const BoxSpec& b, int label, int size, std::mt19937_64* noise) {
    BoxImage img;
    img.h = img.w = size;
    img.label = label;
    img.pixels.assign(static_cast<std::size_t>(size) * size, b.background);
    std::normal_distribution<double> n01(0.0, 0.03);
    const double ca = std::cos(b.angle), sa = std::sin(b.angle);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            // Supersample 2x2 for smooth edges.
            double cover = 0;
            for (int sr = 0; sr < 2; ++sr)
                for (int sc = 0; sc < 2; ++sc) {
                    const double px = c + 0.25 + 0.5 * sc - b.cx, py = r + 0.25 + 0.5 * sr - b.cy;
                    const double u = ca * px + sa * py, v = -sa * px + ca * py;
                    if (std::abs(u) <= b.half_w && std::abs(v) <= b.half_h) cover += 0.25;
                }
            const double shade = b.shade + b.gradient * ((r - b.cy) / size);
            double v = b.background + cover * (shade - b.background);
            if (noise) v += n01(*noise);
            img.pixels[static_cast<std::size_t>(r) * size + c] = std::clamp(v, 0.0, 1.0);
        }
    return img;
}

}  // namespace

std::vector<BoxImage> generate_images(int n, int n_classes, std::uint64_t seed, int size) {
    if (n_classes < 1 || n < n_classes)
        throw Error(ErrorCode::InvalidInput, "need n >= n_classes >= 1");
    if (size < 8) throw Error(ErrorCode::InvalidInput, "image size too small");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto uni = [&](double a, double b) { return a + (b - a) * U(rng); };

    const double scale = size / 32.0;
    std::vector<BoxImage> out;
    out.reserve(n + 1);
    for (int i = 0; out.size() < static_cast<std::size_t>(n); ++i) {
        const int k = i % n_classes + 1;
        const double side = nominal_side(k) * scale * uni(0.92, 1.08);
        const double aspect = uni(0.85, 1.15);
        BoxSpec b;
        b.half_w = side * std::sqrt(aspect) / 2;
        b.half_h = side / std::sqrt(aspect) / 2;
        // Keep the rotated copy inside the frame.
        const double reach = (b.half_w + b.half_h) * (std::cos(kRotation) + std::sin(kRotation)) / 2 + 1;
        // Boxes are framed near the center, as a camera aimed at the payload would.
        const double jitter = 3.0 * scale;
        const double lo = std::max(std::min(reach, size / 2.0), size / 2.0 - jitter);
        const double hi = std::min(std::max(size - reach, size / 2.0), size / 2.0 + jitter);
        b.cx = uni(lo, hi);
        b.cy = uni(lo, hi);
        b.angle = 0;
        b.shade = std::clamp(nominal_shade(k) + uni(-0.04, 0.04), 0.0, 1.0);
        b.background = uni(0.1, 0.3);
        b.gradient = uni(-0.05, 0.05);
        out.push_back(render(b, k, size, &rng));
        if (out.size() == static_cast<std::size_t>(n)) break;
        // Rotate about the image center.
        BoxSpec rb = b;
        const double c0 = size / 2.0, dx = b.cx - c0, dy = b.cy - c0;
        rb.cx = c0 + std::cos(kRotation) * dx - std::sin(kRotation) * dy;
        rb.cy = c0 + std::sin(kRotation) * dx + std::cos(kRotation) * dy;
        rb.angle = kRotation;
        out.push_back(render(rb, k, size, &rng));
    }
    return out;
}

BoxImage canonical_image(int weight_class, int size) {
    if (weight_class < 1) throw Error(ErrorCode::InvalidInput, "weight class must be >= 1");
    const double side = nominal_side(weight_class) * size / 32.0;
    BoxSpec b{size / 2.0, size / 2.0, side / 2, side / 2, 0.0, nominal_shade(weight_class), 0.2, 0.0};
    return render(b, weight_class, size, nullptr);
}

int box_area(const BoxImage& img, double threshold) {
    return static_cast<int>(std::count_if(img.pixels.begin(), img.pixels.end(),
                                          [&](double v) { return v > threshold; }));
}

DataSplit split_dataset(const std::vector<BoxImage>& data, int n_train, int n_val,
                        std::uint64_t seed) {
    if (n_train < 0 || n_val < 0 || static_cast<std::size_t>(n_train + n_val) > data.size())
        throw Error(ErrorCode::InvalidInput, "split sizes exceed dataset");
    std::vector<std::size_t> idx(data.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    DataSplit s;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        auto& dst = i < static_cast<std::size_t>(n_train)             ? s.train
                    : i < static_cast<std::size_t>(n_train + n_val) ? s.validation
                                                                     : s.test;
        dst.push_back(data[idx[i]]);
    }
    return s;
}

}  // namespace idob
