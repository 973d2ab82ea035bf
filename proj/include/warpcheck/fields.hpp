#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "warpcheck/jet.hpp"
#include "warpcheck/linalg.hpp"

namespace warpcheck {

// A coordinate-chart metric: dim plus a chart function producing the symmetric
// metric matrix at a point, evaluable over jets so derivatives come for free.
struct MetricField {
    int dim = 0;
    std::string label;
    std::function<Matrix<Jet2>(std::span<const Jet2>)> components;
};

// A scalar field on a chart (warping functions, conformal factors).
struct ScalarField {
    int dim = 0;
    std::string label;
    std::function<Jet2(std::span<const Jet2>)> eval;
};

// Everything the curvature pipeline knows about one chart point.
struct CurvatureAtPoint {
    std::vector<double> point;
    Matrix<double> metric_value;
    Matrix<double> metric_inverse;
    Tensor3<double> christoffel;             // Gamma^k_ij, indexed (k, i, j)
    Tensor4<double> christoffel_derivative;  // d_l Gamma^k_ij, indexed (l, k, i, j)
    Matrix<double> ricci;
    double scalar_curvature = 0.0;
    double normalized_scalar = 0.0;          // K / (n (n - 1)), 0 when n < 2
};

} // namespace warpcheck
