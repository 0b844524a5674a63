#pragma once

#include <cstdint>
#include <vector>

namespace idob {

struct BoxImage {
    int h = 32, w = 32;
    std::vector<double> pixels;  // row-major, values in [0, 1]
    int label = 1;               // 1..n_classes

    double at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * w + c]; }
};

// Box side length grows with the class; shading, aspect and placement are
// random. Each raw image is followed by a rotated copy. Classes cycle, so
// n divisible by 2*n_classes gives balanced classes.
std::vector<BoxImage> generate_images(int n, int n_classes, std::uint64_t seed, int size = 32);

// Centered box of nominal size and mid shading on a plain background.
BoxImage canonical_image(int weight_class, int size = 32);

// Pixels brighter than the background threshold.
int box_area(const BoxImage& img, double threshold = 0.45);

struct DataSplit {
    std::vector<BoxImage> train, validation, test;
};

DataSplit split_dataset(const std::vector<BoxImage>& data, int n_train, int n_val,
                        std::uint64_t seed);

}  // namespace idob
