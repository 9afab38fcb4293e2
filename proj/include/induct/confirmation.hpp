#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "induct/core.hpp"

namespace induct {

// Success/failure counts of an i.i.d. binary experiment.
struct CountPair {
    uint64_t s = 0;
    uint64_t f = 0;
    uint64_t n() const { return s + f; }
};

// Parameters of Maher's confirmation model.
struct MaherParams {
    Rational lambda;  // learning rate, > 0
    Rational gamma;   // initial belief, in (0,1)
    uint64_t N = 0;   // population size
    uint64_t n = 0;   // observed count, <= N
};

// Laplace: P(success on next trial) = (s+1)/(n+2).
Rational rule_of_succession(const CountPair& c);

// Uniform-prior marginal P(x) = s! f! / (n+1)!.
Rational laplace_marginal(const CountPair& c);

// P(1^k | 1^n) under the uniform prior: (n+1)/(n+k+1). Tends to 0 as k grows.
Rational uniform_confirmation(uint64_t n, uint64_t k);

// Mixture of uniform prior and a point mass at theta=1:
// xi(x) = (s! f!/(n+1)! + delta_{s,n}) / 2.
Rational pointmass_marginal(const CountPair& c);

// P(1^k | 1^n) under the point-mass mixture; k = nullopt means k = infinity,
// giving the limit (n+1)/(n+2).
Rational pointmass_confirmation(uint64_t n, std::optional<uint64_t> k);

// Maher's joint belief prod_{i<n} (i + lambda*gamma)/(i + lambda).
Rational maher_joint(uint64_t n, const MaherParams& p);

// Belief in the full generalization: maher_joint(N)/maher_joint(n).
Rational maher_confirm(const MaherParams& p);

// A change of parameter: theta' = f(theta). For reparametrization f must be
// a bijection; for regrouping it may collapse many thetas onto one theta'.
struct DensityTransform {
    std::function<double(double)> forward;
    std::function<double(double)> inverse;             // f^{-1}
    std::function<double(double)> inverse_derivative;  // d f^{-1}(t')/dt'
    std::function<double(double)> density;             // source density w
};

// Transformed density w~(t') = w(f^{-1}(t')) * |d f^{-1}(t')/dt'|.
double reparam_density(const DensityTransform& t, double theta_prime);

// Discrete regrouping: sum of source weights over an enumerated preimage.
double regroup_density_discrete(const std::vector<double>& preimage_weights);

// Continuous regrouping witness: collapse of a density on the 2-simplex
// (parametrized by the first two coordinates) onto its first coordinate.
// joint(a, b) is the density at (a, b, 1-a-b); the fiber over theta' is
// integrated numerically.
double regroup_density_simplex(const std::function<double(double, double)>& joint,
                               double theta_prime);

// One point on the ravens simplex: theta = (a,b,c,e)/D in lowest terms over
// (BR, nBR, BnR, nBnR), with a positive normalized prior weight.
struct RavensPoint {
    std::array<uint64_t, 4> numerators;  // lowest terms
    uint64_t denominator;
    Rational prior;  // normalized over the grid
};

class RavensGrid {
public:
    explicit RavensGrid(uint64_t dmax);

    const std::vector<RavensPoint>& points() const { return points_; }
    uint64_t dmax() const { return dmax_; }

    // theta component i of a point as a rational.
    static Rational component(const RavensPoint& p, size_t i) {
        return Rational(p.numerators[i], p.denominator);
    }

private:
    uint64_t dmax_;
    std::vector<RavensPoint> points_;
};

// Elias-gamma style code length 2*floor(log2(m+1)) + 1 used by the grid prior.
uint64_t gamma_code_length(uint64_t m);

// Posterior mass of the face theta_nBR = 0 under the multinomial likelihood
// prod_i theta_i^{counts_i}. Counts ordered (BR, nBR, BnR, nBnR).
Rational ravens_posterior(const RavensGrid& grid, const std::array<uint64_t, 4>& counts);

// P(H_b | counts + obs) - P(H_b | counts) for a single new observation.
Rational ravens_confirmation_delta(const RavensGrid& grid, const std::array<uint64_t, 4>& counts,
                                   size_t obs);

// Incremental exact posterior over a stream of observations. Equivalent to
// ravens_posterior on the accumulated counts, but grid points are grouped by
// denominator so each step costs integer multiplies instead of rational gcds.
class RavensRun {
public:
    explicit RavensRun(const RavensGrid& grid);

    Rational posterior() const;
    // Posterior after one hypothetical extra observation, without advancing.
    Rational posterior_after(size_t obs) const;
    void observe(size_t obs);
    size_t steps() const { return n_; }

private:
    std::pair<BigInt, BigInt> masses(std::optional<size_t> extra) const;

    const RavensGrid* grid_;
    std::vector<BigInt> weight_;  // 2^{Cmax - c_i} times observed numerators
    std::vector<size_t> group_;   // index into denoms_ per point
    std::vector<uint64_t> denoms_;
    std::vector<BigInt> scale_;  // (lcm/D)^n per distinct denominator
    BigInt lcm_ = 1;
    size_t n_ = 0;
};

}  // namespace induct
