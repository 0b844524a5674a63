#include "eig.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace idob {

namespace {

double sign(double a, double b) { return b >= 0 ? std::abs(a) : -std::abs(a); }

void balance(Mat& a) {
    const double radix = std::numeric_limits<double>::radix, sqrdx = radix * radix;
    const int n = static_cast<int>(a.rows());
    bool done = false;
    while (!done) {
        done = true;
        for (int i = 0; i < n; ++i) {
            double r = 0, c = 0;
            for (int j = 0; j < n; ++j)
                if (j != i) {
                    c += std::abs(a(j, i));
                    r += std::abs(a(i, j));
                }
            if (c == 0 || r == 0) continue;
            double g = r / radix, f = 1, s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

void hessenberg(Mat& a) {
    const int n = static_cast<int>(a.rows());
    for (int k = 0; k + 2 < n; ++k) {
        Vec v = a.col(k).tail(n - k - 1);
        const double alpha = v.norm();
        if (alpha == 0) continue;
        v(0) += sign(alpha, v(0));
        const double vn = v.norm();
        if (vn == 0) continue;
        v /= vn;
        // A <- H A H with H = I - 2 v v^T acting on rows/cols k+1..n-1.
        auto rows = a.bottomRows(n - k - 1);
        rows -= 2 * v * (v.transpose() * rows);
        auto cols = a.rightCols(n - k - 1);
        cols -= 2 * (cols * v) * v.transpose();
        a.col(k).tail(n - k - 2).setZero();
    }
}

// Francis double-shift QR on an upper Hessenberg matrix (destroys a).
std::vector<std::complex<double>> hqr(Mat& a) {
    const int n = static_cast<int>(a.rows());
    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<std::complex<double>> w(n);
    double anorm = 0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));

    int nn = n - 1, l = 0;
    double t = 0, p = 0, q = 0, r = 0, s, x, y, z, ww;
    while (nn >= 0) {
        int its = 0;
        do {
            for (l = nn; l > 0; --l) {
                s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
                if (s == 0) s = anorm;
                if (std::abs(a(l, l - 1)) <= eps * s) {
                    a(l, l - 1) = 0;
                    break;
                }
            }
            x = a(nn, nn);
            if (l == nn) {
                w[nn--] = x + t;
            } else {
                y = a(nn - 1, nn - 1);
                ww = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    p = 0.5 * (y - x);
                    q = p * p + ww;
                    z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0) {
                        z = p + sign(z, p);
                        w[nn - 1] = w[nn] = x + z;
                        if (z != 0) w[nn] = x - ww / z;
                    } else {
                        w[nn] = {x + p, -z};
                        w[nn - 1] = std::conj(w[nn]);
                    }
                    nn -= 2;
                } else {
                    if (its == 60)
                        throw Error(ErrorCode::NumericalFailure, "QR iteration did not converge");
                    if (its % 10 == 0 && its > 0) {
                        // Exceptional shift.
                        t += x;
                        for (int i = 0; i <= nn; ++i) a(i, i) -= x;
                        s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        ww = -0.4375 * s * s;
                    }
                    ++its;
                    int m = nn - 2;
                    for (; m >= l; --m) {
                        z = a(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - ww) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - r - s;
                        r = a(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) +
                                                        std::abs(a(m + 1, m + 1)));
                        if (u <= eps * v) break;
                    }
                    for (int i = m; i < nn - 1; ++i) {
                        a(i + 2, i) = 0;
                        if (i != m) a(i + 2, i - 1) = 0;
                    }
                    for (int k = m; k < nn; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = 0;
                            if (k + 1 != nn) r = a(k + 2, k - 1);
                            if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        if ((s = sign(std::sqrt(p * p + q * q + r * r), p)) != 0) {
                            if (k == m) {
                                if (l != m) a(k, k - 1) = -a(k, k - 1);
                            } else {
                                a(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j) {
                                p = a(k, j) + q * a(k + 1, j);
                                if (k + 1 != nn) {
                                    p += r * a(k + 2, j);
                                    a(k + 2, j) -= p * z;
                                }
                                a(k + 1, j) -= p * y;
                                a(k, j) -= p * x;
                            }
                            const int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i) {
                                p = x * a(i, k) + y * a(i, k + 1);
                                if (k + 1 != nn) {
                                    p += z * a(i, k + 2);
                                    a(i, k + 2) -= p * r;
                                }
                                a(i, k + 1) -= p * q;
                                a(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (l + 1 < nn);
    }
    return w;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Mat& M) {
    if (M.rows() != M.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix not square");
    if (!M.allFinite()) throw Error(ErrorCode::InvalidInput, "matrix not finite");
    if (M.rows() == 0) return {};
    Mat a = M;
    balance(a);
    hessenberg(a);
    return hqr(a);
}

double spectral_radius(const Mat& M) {
    double rho = 0;
    for (const auto& l : eigenvalues(M)) rho = std::max(rho, std::abs(l));
    return rho;
}

}  // namespace idob
