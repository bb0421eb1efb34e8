#pragma once

#include <vector>

namespace plateforge {

struct QuadPoint {
    double xi;
    double eta;
    double weight;
};

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Tensor rule on the section parameter rectangle: xi in (0, 1), eta in (-1, 1).
// Weights sum to 2 (the parametric area).
std::vector<QuadPoint> section_rule(int n_xi, int n_eta);

// Points on [-1, 1] for edge integrals.
std::vector<QuadPoint> line_rule(int n);

}  // namespace plateforge
