#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "dphase/weights.hpp"

namespace dphase {

// P(t) = sum_i coeff[i] t^i with positive leading coefficient.
struct Polynomial {
    std::vector<double> coeff;
    int degree() const { return int(coeff.size()) - 1; }
    double operator()(double t) const;
};

struct IntervalCover {
    std::vector<std::pair<double, double>> intervals; // pairwise disjoint, in [0, T]
    double T = 0.0;
    double eps = 1.0;
    double ratio_bound = 1.0; // recursion bound c_{k,eps}
    double max_ratio = 0.0;   // measured max tau_i / s_i

    bool covers(double t) const;
};

// The recursion bound c_{k,eps} for the cover construction.
double cover_ratio_bound(int k, double eps);

// Constructive cover: outside the returned intervals the head of P plus
// eps * lambda_k t^k dominates (eps/2^k) * lambda_k t^k. P must be
// nonnegative on [0, T] (validated by dense sampling) with lambda_k > 0.
IntervalCover interval_cover(const Polynomial& P, double T, double eps);

struct CoverCheck {
    bool ok = true;
    bool has_counterexample = false;
    double counterexample = 0.0;
};

// Brute-force oracle for the cover guarantee at `samples` uniform points.
CoverCheck verify_cover(const Polynomial& P, double T, double eps, const IntervalCover& cover,
                        long samples);

// Strict local minima of the sampled sequence; plateau runs count once,
// endpoints are not minima.
int count_sign_changes_minima(const std::function<double(double)>& g, double a, double b,
                              long samples);

// A ball on which some directional derivative of order `order` is pinched
// between eps*K and K (sampled over sqrt(N) * ball).
struct DerivativeWindow {
    Ball ball;
    int order = 0;
    Point direction{1.0, 0.0};
    double upper_K = 1.0;
    double lower_fraction = 1.0; // eps in (0, 1]
    double beta = 1.0;           // exponent, must exceed `order`
};

struct NegativePowerBound {
    double measured = 0.0;       // (avg_B a^(-1/beta))^beta by graded quadrature
    double bound_rhs_shape = 0.0; // K^(-1) * r^(-order)
};

NegativePowerBound negative_power_average_bound(const Weight& w, const DerivativeWindow& win);

} // namespace dphase
