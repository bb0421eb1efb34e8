#include "plateforge/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "plateforge/errors.hpp"

namespace plateforge {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw ArgumentError("quadrature order must be at least 1");
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        x[static_cast<std::size_t>(i)] = -z;
        x[static_cast<std::size_t>(n - 1 - i)] = z;
        w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.0;
}

std::vector<QuadPoint> section_rule(int n_xi, int n_eta) {
    std::vector<double> xa, wa, xb, wb;
    gauss_legendre(n_xi, xa, wa);
    gauss_legendre(n_eta, xb, wb);
    std::vector<QuadPoint> pts;
    for (std::size_t i = 0; i < xa.size(); ++i)
        for (std::size_t j = 0; j < xb.size(); ++j) pts.push_back({0.5 * (xa[i] + 1.0), xb[j], 0.5 * wa[i] * wb[j]});
    return pts;
}

std::vector<QuadPoint> line_rule(int n) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    std::vector<QuadPoint> pts;
    for (std::size_t i = 0; i < x.size(); ++i) pts.push_back({1.0, x[i], w[i]});
    return pts;
}

}  // namespace plateforge
