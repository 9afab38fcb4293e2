#include <functional>
#include "induct/confirmation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace induct {

Rational rule_of_succession(const CountPair& c) {
    return Rational(c.s + 1, c.n() + 2);
}

Rational laplace_marginal(const CountPair& c) {
    // s! f! / (n+1)! = f! / [(s+1)(s+2)...(n+1)]
    BigInt den = 1;
    for (uint64_t m = c.s + 1; m <= c.n() + 1; ++m) den *= m;
    BigInt num = 1;
    for (uint64_t m = 2; m <= c.f; ++m) num *= m;
    return Rational(num, den);
}

Rational uniform_confirmation(uint64_t n, uint64_t k) {
    return Rational(n + 1, n + k + 1);
}

Rational pointmass_marginal(const CountPair& c) {
    Rational m = laplace_marginal(c);
    if (c.f == 0) m += 1;
    return m / 2;
}

Rational pointmass_confirmation(uint64_t n, std::optional<uint64_t> k) {
    if (!k) return Rational(n + 1, n + 2);
    return Rational(n + *k + 2, n + *k + 1) * Rational(n + 1, n + 2);
}

Rational maher_joint(uint64_t n, const MaherParams& p) {
    if (p.lambda <= 0) throw UsageError("maher_joint: lambda must be positive");
    if (p.gamma <= 0 || p.gamma >= 1) throw UsageError("maher_joint: gamma must be in (0,1)");
    // term_i = (i + e/f)/(i + a/b) = (i*f + e)*b / ((i*b + a)*f). A balanced
    // product tree keeps the telescoping cancellation at small operand sizes.
    const Rational lg = p.lambda * p.gamma;
    const BigInt e = numerator(lg), f = denominator(lg);
    const BigInt a = numerator(p.lambda), b = denominator(p.lambda);
    const std::function<Rational(uint64_t, uint64_t)> range = [&](uint64_t lo, uint64_t hi) {
        if (hi - lo == 1) return Rational((lo * f + e) * b, (lo * b + a) * f);
        const uint64_t mid = lo + (hi - lo) / 2;
        return Rational(range(lo, mid) * range(mid, hi));
    };
    return n == 0 ? Rational(1) : range(0, n);
}

Rational maher_confirm(const MaherParams& p) {
    if (p.n > p.N) throw UsageError("maher_confirm: n exceeds N");
    return maher_joint(p.N, p) / maher_joint(p.n, p);
}

double reparam_density(const DensityTransform& t, double theta_prime) {
    const double theta = t.inverse(theta_prime);
    return t.density(theta) * std::abs(t.inverse_derivative(theta_prime));
}

double regroup_density_discrete(const std::vector<double>& preimage_weights) {
    return std::accumulate(preimage_weights.begin(), preimage_weights.end(), 0.0);
}

double regroup_density_simplex(const std::function<double(double, double)>& joint,
                               double theta_prime) {
    // Integrate the joint density along the fiber {(theta', b, 1-theta'-b)}.
    const double upper = 1.0 - theta_prime;
    if (upper <= 0) return 0.0;
    const int n = 1024;  // Simpson, even
    const double h = upper / n;
    double s = joint(theta_prime, 0.0) + joint(theta_prime, upper);
    for (int i = 1; i < n; ++i)
        s += (i % 2 ? 4.0 : 2.0) * joint(theta_prime, i * h);
    return s * h / 3.0;
}

uint64_t gamma_code_length(uint64_t m) {
    uint64_t bits = 0;
    for (uint64_t v = m + 1; v > 1; v >>= 1) ++bits;
    return 2 * bits + 1;
}

RavensGrid::RavensGrid(uint64_t dmax) : dmax_(dmax) {
    if (dmax < 1) throw UsageError("RavensGrid: Dmax must be >= 1");
    // Enumerate primitive tuples only: every reducible tuple collapses onto
    // the same point as its reduced form, which appears at a smaller D.
    Rational total = 0;
    for (uint64_t D = 1; D <= dmax; ++D) {
        for (uint64_t a = 0; a <= D; ++a)
            for (uint64_t b = 0; a + b <= D; ++b)
                for (uint64_t c = 0; a + b + c <= D; ++c) {
                    const uint64_t e = D - a - b - c;
                    uint64_t g = std::gcd(std::gcd(a, b), std::gcd(c, std::gcd(e, D)));
                    if (g != 1) continue;  // duplicate of a smaller-D point
                    const uint64_t code = gamma_code_length(a) + gamma_code_length(b) +
                                          gamma_code_length(c) + gamma_code_length(e) +
                                          gamma_code_length(D);
                    Rational prior = Rational(1, BigInt(1) << code);
                    points_.push_back({{a, b, c, e}, D, prior});
                    total += prior;
                }
    }
    for (auto& p : points_) p.prior /= total;
}

namespace {

// Unnormalized posterior numerators; returns (face mass, total mass).
std::pair<Rational, Rational> ravens_masses(const RavensGrid& grid,
                                            const std::array<uint64_t, 4>& counts) {
    Rational face = 0, total = 0;
    for (const auto& p : grid.points()) {
        Rational like = 1;
        for (size_t i = 0; i < 4; ++i) {
            if (counts[i] == 0) continue;
            if (p.numerators[i] == 0) {
                like = 0;
                break;
            }
            Rational theta = RavensGrid::component(p, i);
            Rational pw = 1;
            // fast exponentiation keeps bigint sizes modest
            uint64_t e = counts[i];
            while (e > 0) {
                if (e & 1) pw *= theta;
                theta *= theta;
                e >>= 1;
            }
            like *= pw;
        }
        if (like == 0) continue;
        const Rational mass = p.prior * like;
        total += mass;
        if (p.numerators[1] == 0) face += mass;  // theta_nBR = 0
    }
    return {face, total};
}

}  // namespace

Rational ravens_posterior(const RavensGrid& grid, const std::array<uint64_t, 4>& counts) {
    auto [face, total] = ravens_masses(grid, counts);
    if (total == 0) throw ConditioningError("ravens_posterior: zero likelihood on the grid");
    return face / total;
}

Rational ravens_confirmation_delta(const RavensGrid& grid, const std::array<uint64_t, 4>& counts,
                                   size_t obs) {
    if (obs >= 4) throw UsageError("ravens_confirmation_delta: bad observation index");
    auto next = counts;
    next[obs] += 1;
    return ravens_posterior(grid, next) - ravens_posterior(grid, counts);
}

RavensRun::RavensRun(const RavensGrid& grid) : grid_(&grid) {
    const auto& pts = grid.points();
    uint64_t cmax = 0;
    std::vector<uint64_t> codes;
    codes.reserve(pts.size());
    for (const auto& p : pts) {
        uint64_t code = gamma_code_length(p.denominator);
        for (uint64_t m : p.numerators) code += gamma_code_length(m);
        codes.push_back(code);
        cmax = std::max(cmax, code);
    }
    // Unnormalized integer prior 2^{Cmax - c}; posteriors are ratios, so the
    // normalization constant cancels.
    weight_.reserve(pts.size());
    group_.reserve(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        weight_.push_back(BigInt(1) << (cmax - codes[i]));
        const auto it = std::find(denoms_.begin(), denoms_.end(), pts[i].denominator);
        if (it == denoms_.end()) {
            group_.push_back(denoms_.size());
            denoms_.push_back(pts[i].denominator);
        } else {
            group_.push_back(static_cast<size_t>(it - denoms_.begin()));
        }
    }
    for (uint64_t d : denoms_) lcm_ = boost::multiprecision::lcm(lcm_, BigInt(d));
    scale_.assign(denoms_.size(), BigInt(1));
}

// Likelihood denominators after n steps are D^n; on the common denominator
// lcm^n each group contributes its weight sum times (lcm/D)^n.
std::pair<BigInt, BigInt> RavensRun::masses(std::optional<size_t> extra) const {
    const auto& pts = grid_->points();
    std::vector<BigInt> g_total(denoms_.size(), 0), g_face(denoms_.size(), 0);
    for (size_t i = 0; i < pts.size(); ++i) {
        if (weight_[i] == 0) continue;
        BigInt w = weight_[i];
        if (extra) w *= pts[i].numerators[*extra];
        g_total[group_[i]] += w;
        if (pts[i].numerators[1] == 0) g_face[group_[i]] += w;
    }
    BigInt face = 0, total = 0;
    for (size_t g = 0; g < denoms_.size(); ++g) {
        BigInt s = scale_[g];
        if (extra) s *= lcm_ / denoms_[g];
        face += g_face[g] * s;
        total += g_total[g] * s;
    }
    return {face, total};
}

Rational RavensRun::posterior() const {
    auto [face, total] = masses(std::nullopt);
    if (total == 0) throw ConditioningError("RavensRun: zero likelihood on the grid");
    return Rational(face, total);
}

Rational RavensRun::posterior_after(size_t obs) const {
    if (obs >= 4) throw UsageError("RavensRun: bad observation index");
    auto [face, total] = masses(obs);
    if (total == 0) throw ConditioningError("RavensRun: zero likelihood on the grid");
    return Rational(face, total);
}

void RavensRun::observe(size_t obs) {
    if (obs >= 4) throw UsageError("RavensRun: bad observation index");
    const auto& pts = grid_->points();
    for (size_t i = 0; i < pts.size(); ++i) weight_[i] *= pts[i].numerators[obs];
    for (size_t g = 0; g < denoms_.size(); ++g) scale_[g] *= lcm_ / denoms_[g];
    ++n_;
}

}  // namespace induct
