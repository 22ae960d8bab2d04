#pragma once

#include "qho/real.hpp"

#include <vector>

namespace qho {

struct QuadRule {
    std::vector<Real> nodes;
    std::vector<Real> weights;
};

// Gauss-Legendre rule on [-1, 1].
QuadRule gauss_legendre(int n);

// Gauss-Hermite rule for weight exp(-x^2) on the real line.
QuadRule gauss_hermite(int n);

}  // namespace qho
