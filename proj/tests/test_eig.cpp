#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "eig.hpp"
#include "errors.hpp"
#include "oracles.hpp"

using namespace idob;

namespace {

std::vector<double> sorted_magnitudes(const std::vector<std::complex<double>>& ev) {
    std::vector<double> m;
    for (const auto& z : ev) m.push_back(std::abs(z));
    std::sort(m.begin(), m.end());
    return m;
}

}  // namespace

TEST_CASE("diagonal matrix: eigenvalues are the diagonal") {
    Mat M = Mat::Zero(4, 4);
    M.diagonal() << 0.3, -0.7, 0.1, 0.95;
    auto ev = eigenvalues(M);
    REQUIRE(ev.size() == 4);
    std::vector<double> re;
    for (const auto& z : ev) {
        CHECK(std::abs(z.imag()) <= 1e-14);
        re.push_back(z.real());
    }
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-0.7).epsilon(1e-14));
    CHECK(re[1] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(re[2] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(re[3] == doctest::Approx(0.95).epsilon(1e-14));
    CHECK(spectral_radius(M) == doctest::Approx(0.95).epsilon(1e-14));
}

TEST_CASE("scaled rotation: complex pair on the circle of radius r") {
    for (double r : {0.5, 0.99, 1.2}) {
        const double th = 0.7;
        Mat M(2, 2);
        M << r * std::cos(th), -r * std::sin(th), r * std::sin(th), r * std::cos(th);
        auto ev = eigenvalues(M);
        REQUIRE(ev.size() == 2);
        for (const auto& z : ev) {
            CHECK(std::abs(z) == doctest::Approx(r).epsilon(1e-12));
            CHECK(std::abs(std::abs(std::arg(z)) - th) <= 1e-12);
        }
        CHECK(std::abs(ev[0] - std::conj(ev[1])) <= 1e-12);
    }
}

TEST_CASE("random 10x10: spectral radius agrees with two independent routes") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int trial = 0; trial < 20; ++trial) {
        Mat M(10, 10);
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) M(i, j) = U(rng);
        const double rho = spectral_radius(M);
        CHECK(rho == doctest::Approx(oracle::poly_root_spectral_radius(M)).epsilon(1e-6));
        CHECK(rho == doctest::Approx(oracle::companion_spectral_radius(M)).epsilon(1e-6));

        // Trace and determinant from the spectrum.
        auto ev = eigenvalues(M);
        std::complex<double> sum = 0, prod = 1;
        for (const auto& z : ev) sum += z, prod *= z;
        CHECK(sum.real() == doctest::Approx(M.trace()).epsilon(1e-9).scale(1));
        CHECK(std::abs(sum.imag()) <= 1e-9);
        CHECK(prod.real() == doctest::Approx(M.determinant()).epsilon(1e-8).scale(1));
    }
}

TEST_CASE("companion of a known polynomial recovers its roots") {
    // (z - 0.5)(z + 0.25)(z^2 - z + 0.5): roots 0.5, -0.25, 0.5 +- 0.5j
    Mat K = Mat::Zero(4, 4);
    const double c[4] = {-1.25, 0.625, 0.0, -0.0625};  // z^4 + c0 z^3 + ...
    for (int j = 0; j < 4; ++j) K(0, j) = -c[j];
    for (int i = 1; i < 4; ++i) K(i, i - 1) = 1;
    auto m = sorted_magnitudes(eigenvalues(K));
    CHECK(m[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(m[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m[2] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(m[3] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("badly scaled and defective matrices") {
    Mat J(3, 3);  // Jordan block: triple eigenvalue 0.9
    J << 0.9, 1, 0, 0, 0.9, 1, 0, 0, 0.9;
    CHECK(spectral_radius(J) == doctest::Approx(0.9).epsilon(1e-5));

    Mat S(3, 3);
    S << 0.5, 1e6, 0, 1e-6, 0.2, 1e5, 0, 1e-5, 0.1;
    CHECK(spectral_radius(S) == doctest::Approx(oracle::poly_root_spectral_radius(S)).epsilon(1e-6));
}

TEST_CASE("eigenvalues reject non-square and non-finite input") {
    try {
        eigenvalues(Mat::Zero(2, 3));
        FAIL("expected dimension mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
    Mat N = Mat::Zero(2, 2);
    N(0, 1) = std::nan("");
    try {
        eigenvalues(N);
        FAIL("expected invalid input");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidInput);
    }
    CHECK(eigenvalues(Mat(0, 0)).empty());
}
