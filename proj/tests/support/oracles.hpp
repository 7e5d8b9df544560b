#pragma once

// Reference values computed independently of the library: power series,
// std:: special functions and brute-force quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// sum_m (-1)^m (x/2)^{2m+n} / (m! (m+n)!) in long double.
inline double series_j(int n, double x) {
    long double term = 1.0L;
    for (int i = 1; i <= n; ++i) term *= static_cast<long double>(x) / 2.0L / i;
    long double sum = term;
    const long double q = -static_cast<long double>(x) * x / 4.0L;
    for (int m = 1; m < 400; ++m) {
        term *= q / (static_cast<long double>(m) * (m + n));
        sum += term;
        if (std::fabs(term) < 1e-30L * std::fabs(sum) && m > 5) break;
    }
    return static_cast<double>(sum);
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Integer orders of either sign via J_{-n} = (-1)^n J_n, same for Y.
inline double std_j(int n, double x) {
    const double v = std::cyl_bessel_j(std::abs(n), x);
    return (n < 0 && (n % 2 != 0)) ? -v : v;
}

inline cplx std_hankel1(int n, double x) {
    const cplx v{std::cyl_bessel_j(std::abs(n), x), std::cyl_neumann(std::abs(n), x)};
    return (n < 0 && (n % 2 != 0)) ? -v : v;
}

// Midpoint sum over (beta - alpha, beta + alpha) with `nodes` points.
inline cplx arc_integral(const std::function<cplx(double)>& f, double alpha, double beta, int nodes) {
    const double h = 2.0 * alpha / nodes;
    cplx acc{0.0, 0.0};
    for (int j = 0; j < nodes; ++j) acc += f(beta - alpha + (j + 0.5) * h);
    return acc * h;
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
struct GaussLegendre {
    std::vector<double> nodes, weights;
    explicit GaussLegendre(int n) : nodes(n), weights(n) {
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

inline const GaussLegendre& gauss4096() {
    static const GaussLegendre rule(4096);
    return rule;
}

// Gauss-Legendre integral over (beta - alpha, beta + alpha).
inline cplx arc_gauss(const std::function<cplx(double)>& f, double alpha, double beta,
                      const GaussLegendre& rule = gauss4096()) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(beta + alpha * rule.nodes[i]);
    return acc * alpha;
}

inline cplx far_green(double zx, double zy, double t, double k) {
    return std::polar(1.0 / std::sqrt(8.0 * k * pi), pi / 4 - k * (std::cos(t) * zx + std::sin(t) * zy));
}

// Far field of a penetrable disk of index n_index and radius a centered at
// (cx, cy) under incidence angle td, by matching Fourier-Bessel coefficients
// across the boundary.
inline std::vector<cplx> disk_far_field(double k, double n_index, double a, double cx, double cy, double td,
                                        const std::vector<double>& angles, int modes = 60) {
    const double k1 = k * std::sqrt(n_index);
    const auto dj = [](int m, double x) { return 0.5 * (std_j(m - 1, x) - std_j(m + 1, x)); };
    const auto jm = [](int m, double x) { return std_j(m, x); };
    const auto h = [](int m, double x) { return std_hankel1(m, x); };
    const auto dh = [&](int m, double x) { return 0.5 * (h(m - 1, x) - h(m + 1, x)); };
    std::vector<cplx> b(static_cast<std::size_t>(modes + 1));
    for (int m = 0; m <= modes; ++m) {
        const cplx num = k1 * dj(m, k1 * a) * jm(m, k * a) - k * jm(m, k1 * a) * dj(m, k * a);
        const cplx den = k * jm(m, k1 * a) * dh(m, k * a) - k1 * dj(m, k1 * a) * h(m, k * a);
        b[m] = num / den;
    }
    const cplx lead = std::sqrt(2.0 / (pi * k)) * std::polar(1.0, -pi / 4);
    std::vector<cplx> out;
    for (double t : angles) {
        cplx acc = b[0];
        for (int m = 1; m <= modes; ++m) acc += 2.0 * b[m] * std::cos(m * (t - td));
        // Translation to the disk center.
        const double shift = k * ((std::cos(td) - std::cos(t)) * cx + (std::sin(td) - std::sin(t)) * cy);
        out.push_back(lead * acc * std::polar(1.0, shift));
    }
    return out;
}

inline double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / den);
}

}  // namespace oracle
