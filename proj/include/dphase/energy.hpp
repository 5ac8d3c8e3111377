#pragma once

#include <optional>
#include <vector>

#include "dphase/mollifier.hpp"
#include "dphase/weights.hpp"

namespace dphase {

// Double phase energy integrand |grad u|^p + a(x) |grad u|^q over a domain.
struct EnergySpec {
    double p = 2.0;
    double q = 2.0;
    Weight weight;
    Domain omega = Domain::interval(-1.0, 1.0);
    int quad_level = 2; // per-cell refinement when integrating a

    static EnergySpec make(double p, double q, const Weight& w, const Domain& omega,
                           int quad_level = 2);
};

struct EnergyValue {
    double total = 0.0;
    double p_term = 0.0;
    double q_term = 0.0;
};

// Per-cell weight integration shared by every energy evaluation path.
double cell_weight_integral_1d(const Weight& w, double a, double b, int level);
double cell_weight_average_tri(const Weight& w, const Point& v0, const Point& v1,
                               const Point& v2, int level);

// Energy of the multilinear interpolant of u: gradients are exact per cell
// (1D) or per triangle (2D, cells split along a fixed diagonal), the weight
// is integrated by Gauss panels / subdivided centroids inside each cell.
EnergyValue energy(const ScalarField& u, const EnergySpec& spec);

// Per-cell integrand masses in the same discretization (used by the
// equiintegrability diagnostics).
std::vector<double> energy_cell_masses(const ScalarField& u, const EnergySpec& spec);

// Luxembourg gauge: inf { s > 0 : p_term/s^p + q_term/s^q <= 1 }, by
// bisection to relative tol. Zero fields have norm 0.
double luxembourg_norm(const ScalarField& u, const EnergySpec& spec, double tol);

// Values clamped to [-M, M]; never increases the energy.
ScalarField truncate(const ScalarField& u, double M);

enum class ApproxMode { CaseI, CaseII };

// delta-schedule diagnostics of the truncate-then-mollify pipeline.
struct ApproximationTrace {
    std::vector<double> deltas;   // strictly decreasing
    std::vector<double> energies; // F[S_delta u]
    std::vector<double> p_terms;
    std::vector<double> q_terms;
    std::vector<double> w11_errors;
    std::vector<double> equi_indices; // top-1e-3-fraction mass share per delta
    ApproxMode mode = ApproxMode::CaseI;
    std::optional<double> gamma;
    double energy_u = 0.0;        // reference energy of the input field
    double truncation_level = 0.0;
};

// Share of total mass carried by the heaviest `fraction` of cells.
double top_fraction_share(const std::vector<double>& cell_masses, double fraction);

// Mass share of the top `fraction` of cells, maximized over the family.
double equiintegrability_index(const std::vector<std::vector<double>>& cell_masses,
                               double fraction);

// Runs the exponent gate for the selected mode (i: q <= p + kappa*max(1,p/N);
// ii: q <= p + kappa/(1-gamma) with gamma in (0,1)), then truncates at the
// 99.9th percentile of |u| and mollifies along the schedule. Gate violations
// throw gate_refused with the failing inequality spelled out.
ApproximationTrace approximate(const ScalarField& u, const EnergySpec& spec,
                               const StarShape& star, const std::vector<double>& schedule,
                               ApproxMode mode, std::optional<double> gamma);

} // namespace dphase
