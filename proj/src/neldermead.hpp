#pragma once

#include <functional>

#include "statespace.hpp"

namespace idob {

struct NelderMeadResult {
    Vec x;
    double f = 0;
    int evaluations = 0;
};

// Nelder-Mead with dimension-adaptive coefficients. Stops when the simplex
// spread in f and in x falls below the tolerances or max_evals is reached.
NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0,
                             double step, int max_evals, double ftol = 1e-14,
                             double xtol = 1e-10);

}  // namespace idob
