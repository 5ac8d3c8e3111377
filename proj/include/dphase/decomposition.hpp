#pragma once

#include <vector>

#include "dphase/weights.hpp"

namespace dphase {

// Factorization a = sigma * omega on a uniform grid. sigma is the
// derivative-corrected decay factor, omega = a / sigma lies in [0, 1].
struct DecompositionField {
    int dim = 1;
    int k = 0;
    double alpha = 1.0;
    std::vector<Point> grid;
    std::vector<double> a;
    std::vector<double> sigma;
    std::vector<double> omega;
};

// sigma(x) = sum_{i=0..k} ||D^i a(x)||^((k+alpha)/(k+alpha-i)).
double sigma_at(const Weight& w, const Point& x);

// omega(x) = a(x)/sigma(x) when sigma(x) > 0, otherwise 1. Values below
// 1e-300 are treated as zero to keep 0/0 noise out.
double omega_at(const Weight& w, const Point& x);

// Tabulate sigma and omega on a uniform grid of `resolution` points per axis.
// The region must be compactly contained in the weight's domain.
DecompositionField decompose_on_grid(const Weight& w, const Domain& region, int resolution);

} // namespace dphase
