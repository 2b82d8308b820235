#include "geomwork/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "geomwork/errors.hpp"

namespace geomwork {

QuadratureRule gauss_legendre(std::size_t m, double a, double b) {
    if (m < 1) throw InvalidParameters("Gauss-Legendre rule needs m >= 1");
    QuadratureRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    const auto n = static_cast<double>(m);
    if (m == 1) {
        rule.nodes[0] = mid;
        rule.weights[0] = 2.0 * half;
        return rule;
    }
    for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= m; ++k) {
                const auto kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= m; ++k) {
            const auto kk = static_cast<double>(k);
            const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // ascending order: node i from the left is -x
        rule.nodes[i] = mid - half * x;
        rule.nodes[m - 1 - i] = mid + half * x;
        rule.weights[i] = half * w;
        rule.weights[m - 1 - i] = half * w;
    }
    if (m % 2 == 1) rule.nodes[m / 2] = mid;
    return rule;
}

QuadratureRule trapezoid(std::size_t intervals, double a, double b) {
    if (intervals < 1) throw InvalidParameters("trapezoid rule needs >= 1 interval");
    QuadratureRule rule;
    const double h = (b - a) / static_cast<double>(intervals);
    rule.nodes.resize(intervals + 1);
    rule.weights.assign(intervals + 1, h);
    for (std::size_t k = 0; k <= intervals; ++k) {
        rule.nodes[k] = k == intervals ? b : a + h * static_cast<double>(k);
    }
    rule.weights.front() = 0.5 * h;
    rule.weights.back() = 0.5 * h;
    return rule;
}

} // namespace geomwork
