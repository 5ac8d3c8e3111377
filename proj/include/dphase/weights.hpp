#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dphase/geometry.hpp"

namespace dphase {

// A nonnegative scalar weight of class C^{k,alpha} with a directional
// derivative oracle: deriv(x, l, v) = D^l a(x)[v, ..., v] for unit v and
// l <= k. deriv(x, 0, v) must equal value(x).
struct Weight {
    int dim = 1;
    int k = 0;
    double alpha = 1.0;
    Domain domain = Domain::interval(-1.0, 1.0);
    std::function<double(const Point&)> value;
    std::function<double(const Point&, int, const Point&)> deriv;
    std::optional<double> holder_constant;
};

// Operator norm of the l-th derivative tensor at x: sup over unit directions
// of |D^l a(x)[v^l]|. Exact in 1D and for l <= 2 in 2D (gradient norm,
// symmetric eigenvalue); direction sampling otherwise.
double derivative_norm(const Weight& w, const Point& x, int l);

// Operator norm of D^l a(x) - D^l a(y), same evaluation strategy.
double derivative_difference_norm(const Weight& w, const Point& x, const Point& y, int l);

// Monte-Carlo lower estimate of the Hoelder seminorm
// sup_{x != y} ||D^k a(x) - D^k a(y)|| / |x-y|^alpha over the region.
// Nested in `pairs` for a fixed seed.
double holder_seminorm_estimate(const Weight& w, const Domain& region, long pairs,
                                std::uint64_t seed);

// View of the same weight at weaker smoothness parameters (k2 + alpha2 must
// not exceed k + alpha; the derivative oracle is simply truncated).
Weight with_smoothness(const Weight& w, int k2, double alpha2);

// The weight lambda * a (all derivative tensors scale linearly).
Weight scale_weight(const Weight& w, double lambda);

struct WeightClaim {
    std::string condition; // "Z" or "A"
    double parameter = 0.0;
    std::string expected; // "bounded" or "diverging"
    std::string note;     // where the expectation comes from
};

struct CatalogEntry {
    std::string name;
    Weight weight;
    std::vector<WeightClaim> claims;
};

// Catalog of example weights with hand-coded closed-form derivatives.
// Parametrized names use "name:param", e.g. "power2n:1", "abs_power:1.5".
CatalogEntry catalog_get(const std::string& name);

// The eight canonical entries at their default parameters.
std::vector<std::string> catalog_names();

} // namespace dphase
