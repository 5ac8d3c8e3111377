#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dphase/decomposition.hpp"
#include "dphase/weights.hpp"

namespace dphase {

enum class Condition { Z, A, AGlobal };
enum class Verdict { Bounded, Diverging, Inconclusive };

std::string verdict_name(Verdict v);

// A nonnegative scalar field on a region, given by an oracle.
struct FieldOracle {
    int dim = 1;
    std::function<double(const Point&)> f;
};

FieldOracle weight_oracle(const Weight& w);
FieldOracle sigma_oracle(const Weight& w);
FieldOracle omega_oracle(const Weight& w);

// The pair or ball attaining the running sup.
struct Witness {
    bool is_ball = false;
    Point x{0.0, 0.0};
    Point y{0.0, 0.0};
    Ball ball{};
    double value = 0.0;
};

// Multi-scale estimate of a class constant. Estimates are a running sup over
// a growing sample, so they are nondecreasing in the level. Verdicts are
// statements about estimate growth, not proofs: bounded when the last two
// levels agree within `stabilization`, diverging on >= `growth` blowup
// across the last two levels (or a recorded infinity).
struct ConditionReport {
    Condition condition = Condition::Z;
    double parameter = 0.0;
    Domain inner = Domain::interval(-1.0, 1.0);
    Domain outer = Domain::interval(-1.0, 1.0);
    std::vector<std::pair<int, double>> estimates;
    Verdict verdict = Verdict::Inconclusive;
    Witness witness;
};

struct VerdictThresholds {
    double stabilization = 0.25;
    double growth = 10.0;
    // A-side only: the negative power clamps f at 1e-300, so once the graded
    // depth crosses that floor the estimates plateau at astronomical values
    // instead of growing. Quotients are scale-invariant, and genuinely
    // bounded ones sit orders of magnitude below this ceiling; estimates at
    // or beyond it count as diverging.
    double saturation_ceiling = 1e30;
};

Verdict verdict_from(const std::vector<double>& estimates, const VerdictThresholds& th);

// Estimate of the smallest constant in f(x) <= C (f(y) + |x-y|^kappa) over
// the region: level L takes the sup of f(x)/(f(y) + |x-y|^kappa) over
// 10^(2+L) pairs (uniform pairs plus scale probes anchored at sampled
// minima of f, which is where the quotient can blow up).
ConditionReport z_constant(const FieldOracle& f, double kappa, const Domain& omega,
                           int levels, std::uint64_t seed, VerdictThresholds th = {});

// Estimate of sup over balls B inside U of
// (avg_B f) * (avg_B f^(-1/(r-1)))^(r-1), averages by graded quadrature at
// level 4+L toward the in-ball minimum of f. f is clamped below at 1e-300
// inside the negative power; quadrature sums or powered averages beyond
// 1e280 are recorded as +infinity, which feeds the diverging verdict.
ConditionReport muckenhoupt_constant(const FieldOracle& f, double r, const Domain& omega,
                                     const Domain& outer_U, int levels, std::uint64_t seed,
                                     VerdictThresholds th = {});

// Boundary-global variant: balls range over all of R^N and the averages run
// over B intersected with the region.
ConditionReport global_muckenhoupt_constant(const FieldOracle& f, double r,
                                            const Domain& omega, int levels,
                                            std::uint64_t seed, VerdictThresholds th = {});

// Single-ball quotient (avg_B f) * (avg_B f^(-1/(r-1)))^(r-1) on the
// estimator's quadrature; the rule depends on f and the ball but not on r,
// so quotients at different r share their nodes.
double muckenhoupt_ball_quotient(const FieldOracle& f, const Ball& b, double r,
                                 int quad_level);

// Exponent gate q <= p + (k+alpha) * max(1, p/N) plus class checks of the
// two factors: Z^(k+alpha) for sigma and A_max(q, k+alpha+1) for omega
// (the A classes grow with the index, so the larger feasible index is the
// one the factor theory provides).
struct ClassifyReport {
    bool gate = false;
    double q = 0.0;
    double gate_rhs = 0.0;
    DecompositionField field;
    ConditionReport sigma_z;
    ConditionReport omega_a;
    Verdict overall = Verdict::Inconclusive;
};

ClassifyReport classify_weight(const Weight& w, double p, double q, const Domain& omega,
                               const Domain& outer_U, int levels, std::uint64_t seed,
                               VerdictThresholds th = {});

} // namespace dphase
