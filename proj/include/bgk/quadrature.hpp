/// @file quadrature.hpp
/// @brief Gauss-Legendre nodes and weights on [0, 1].

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bgk {

struct GaussLegendre {
    std::vector<double> nodes;    // in (0, 1)
    std::vector<double> weights;  // sum to 1
};

/// n-point Gauss-Legendre rule mapped to [0, 1]. Nodes found by Newton
/// iteration on P_n with the Chebyshev-angle initial guess.
inline GaussLegendre gauss_legendre_01(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_01: n must be >= 1");
    GaussLegendre q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // evaluate P_n(x) and P_n'(x) by the three-term recurrence
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[k] = 0.5 * (1.0 - x);  // descending roots -> ascending nodes
        q.weights[k] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return q;
}

}  // namespace bgk
