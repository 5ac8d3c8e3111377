#pragma once

#include <array>
#include <string>
#include <vector>

#include "dphase/geometry.hpp"

namespace dphase {

// Scalar samples on a uniform lattice over an interval or box. Evaluation
// between nodes is multilinear; fields flagged vanishes_outside read as 0
// beyond the lattice.
struct ScalarField {
    Domain domain = Domain::interval(-1.0, 1.0);
    int nx = 2;
    int ny = 1; // 1 in 1D
    std::vector<double> values;
    bool vanishes_outside = true;

    static ScalarField lattice(const Domain& d, int nx, int ny = 1);
    static ScalarField sample(const Domain& d, int nx, int ny,
                              const std::function<double(const Point&)>& f);

    int dim() const { return domain.dim; }
    double dx() const;
    double dy() const;
    Point node(int i, int j = 0) const;
    double& at(int i, int j = 0) { return values[std::size_t(j) * nx + std::size_t(i)]; }
    double at(int i, int j = 0) const { return values[std::size_t(j) * nx + std::size_t(i)]; }
    double eval(const Point& x) const;
    double max_abs() const;
    double l1_norm() const; // trapezoid lattice quadrature of |u|
};

// Central-difference gradient on the lattice (zero extension beyond it when
// the field vanishes outside, one-sided otherwise).
std::array<ScalarField, 2> gradient_fields(const ScalarField& u);

// Exact gradient of the multilinear interpolant at x (piecewise constant per
// cell in 1D); zero outside for fields that vanish there.
Point interpolant_gradient(const ScalarField& u, const Point& x);

// Convolution-with-squeezing configuration: kernel radius delta, squeeze
// factor kappa = 1 - delta / R toward the star center. Valid for
// 0 < delta < R/4, which keeps outputs compactly supported in the domain.
struct MollifierConfig {
    StarShape star;
    double delta = 0.0;
    std::string kernel_profile = "bump";

    double kappa() const { return 1.0 - delta / star.inner_radius; }

    static MollifierConfig make(const StarShape& star, double delta);
};

// rho_delta(x) = delta^-N rho(x/delta), rho the normalized bump
// exp(-1/(1-|x|^2)) supported on the unit ball.
double kernel_eval(const MollifierConfig& cfg, const Point& x);

// L1 norm of the unit kernel's gradient (the kernel itself integrates to 1
// by normalization).
double kernel_grad_l1(int dim);

// S_delta u(x): kernel average of u(x0 + (x - y - x0)/kappa) over |y| < delta.
double mollify(const MollifierConfig& cfg, const ScalarField& u, const Point& x);

// gradient identity: (1/kappa) S_delta(grad u)(x)
Point mollify_gradient(const MollifierConfig& cfg, const ScalarField& u, const Point& x);

// Lattice-wide mollification onto the field's own lattice.
ScalarField mollify_field(const MollifierConfig& cfg, const ScalarField& u);

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// sup |grad S_delta u| <= delta^-1 ||u||_inf ||grad rho||_L1
BoundCheck check_linf_bound(const MollifierConfig& cfg, const ScalarField& u);

// sup |grad S_delta u| <= delta^(gamma-1) kappa^-gamma [u]_gamma ||grad rho||_L1,
// the Hoelder seminorm estimated from lattice pairs.
BoundCheck check_holder_bound(const MollifierConfig& cfg, const ScalarField& u, double gamma);

// Discrete maximal operator: max of avg_B |f| over a dyadic family of balls
// containing x with 3B inside U. A lower estimate of the sup.
double maximal_function(const ScalarField& f, const Domain& U, const Point& x,
                        int ball_count);

} // namespace dphase
