// quadrature.hpp — Gauss–Legendre rules and composite trapezoid weights.

#pragma once

#include <cstddef>
#include <vector>

namespace geomwork {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// m-point Gauss–Legendre rule on [a, b] (Newton iteration on P_m).
QuadratureRule gauss_legendre(std::size_t m, double a = -1.0, double b = 1.0);

// Composite trapezoid on [a, b] with `intervals` subintervals (intervals + 1 nodes).
QuadratureRule trapezoid(std::size_t intervals, double a, double b);

} // namespace geomwork
