#include "neldermead.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace idob {

NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0,
                             double step, int max_evals, double ftol, double xtol) {
    const int n = static_cast<int>(x0.size());
    const double dn = n;
    const double alpha = 1, beta = 1 + 2 / dn, gamma = 0.75 - 1 / (2 * dn), delta = 1 - 1 / dn;

    std::vector<Vec> x(n + 1, x0);
    std::vector<double> fx(n + 1);
    for (int i = 0; i < n; ++i) x[i + 1](i) += step;
    int evals = 0;
    for (int i = 0; i <= n; ++i) fx[i] = f(x[i]), ++evals;

    std::vector<int> idx(n + 1);
    while (evals < max_evals) {
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fx[a] < fx[b]; });
        const int best = idx[0], worst = idx[n], second = idx[n - 1];

        double size = 0;
        for (int i = 1; i <= n; ++i) size = std::max(size, (x[idx[i]] - x[best]).cwiseAbs().maxCoeff());
        if (std::abs(fx[worst] - fx[best]) <= ftol * (std::abs(fx[best]) + 1e-300) && size <= xtol)
            break;
        if (size <= xtol * 1e-3) break;

        Vec c = Vec::Zero(n);
        for (int i = 0; i < n; ++i) c += x[idx[i]];
        c /= dn;

        const Vec xr = c + alpha * (c - x[worst]);
        const double fr = f(xr);
        ++evals;
        if (fr < fx[best]) {
            const Vec xe = c + beta * (xr - c);
            const double fe = f(xe);
            ++evals;
            if (fe < fr)
                x[worst] = xe, fx[worst] = fe;
            else
                x[worst] = xr, fx[worst] = fr;
            continue;
        }
        if (fr < fx[second]) {
            x[worst] = xr, fx[worst] = fr;
            continue;
        }
        const bool outside = fr < fx[worst];
        const Vec xc = outside ? Vec(c + gamma * (xr - c)) : Vec(c - gamma * (c - x[worst]));
        const double fc = f(xc);
        ++evals;
        if (fc < (outside ? fr : fx[worst])) {
            x[worst] = xc, fx[worst] = fc;
            continue;
        }
        for (int i = 1; i <= n; ++i) {
            const int j = idx[i];
            x[j] = x[best] + delta * (x[j] - x[best]);
            fx[j] = f(x[j]);
            ++evals;
        }
    }
    const int b = static_cast<int>(std::min_element(fx.begin(), fx.end()) - fx.begin());
    return {x[b], fx[b], evals};
}

}  // namespace idob
