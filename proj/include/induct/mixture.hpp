#pragma once

#include <array>
#include <utility>
#include <vector>

#include "induct/envclass.hpp"

namespace induct {

// Finite model class: environments with positive prior weights summing to
// at most 1 (exactly 1 for proper classes).
class ModelClass {
public:
    struct Member {
        EnvPtr env;
        Rational weight;
    };

    explicit ModelClass(std::vector<Member> members);

    const std::vector<Member>& members() const { return members_; }
    size_t size() const { return members_.size(); }
    const Alphabet& alphabet() const { return members_.front().env->alphabet(); }
    Rational weight_sum() const;

private:
    std::vector<Member> members_;
};

// Posterior weights w_nu(x) after conditioning on x.
struct Posterior {
    std::vector<Rational> weights;  // parallel to class members
    Sequence history;
};

// Loss(true symbol, action) in [0,1]; rows = alphabet, columns = actions.
class LossMatrix {
public:
    LossMatrix(size_t n_symbols, size_t n_actions, std::vector<Rational> entries);

    size_t n_symbols() const { return n_symbols_; }
    size_t n_actions() const { return n_actions_; }
    const Rational& loss(size_t symbol, size_t action) const {
        return entries_[symbol * n_actions_ + action];
    }

private:
    size_t n_symbols_, n_actions_;
    std::vector<Rational> entries_;
};

// xi(x) = sum_nu w_nu nu(x), exact.
Rational mixture_prob(const ModelClass& cls, const Sequence& x);

// w_nu(x) = w_nu nu(x) / xi(x); throws ConditioningError when xi(x)=0.
Posterior posterior(const ModelClass& cls, const Sequence& x);

// xi(a|history) per symbol a.
std::vector<Rational> mixture_predictive(const ModelClass& cls, const Sequence& history);

// Squared Hellinger distance sum_a (sqrt p_a - sqrt q_a)^2, in [0,2].
double hellinger(const std::vector<Rational>& p, const std::vector<Rational>& q);
double hellinger(const std::vector<double>& p, const std::vector<double>& q);

struct BoundedSum {
    double sum;
    double bound;  // ln(w^-1) of the true environment
    // per-step rows for CSV reports: t, term, cumulative, bound
    std::vector<std::array<double, 4>> rows;
};

// Exact E[sum_{t<=T} h_t] under true_env, by full enumeration of histories.
// true_env must be a member of cls (compared by pointer).
BoundedSum expected_hellinger_sum(const ModelClass& cls, const EnvPtr& true_env, size_t horizon);

// sum_{t<=T} |1 - xi(alpha_t|alpha_{<t})| for a deterministic alpha in cls.
// Also reports the final on-sequence predictive probability.
struct DeterministicErrorSum : BoundedSum {
    double final_predictive = 0.0;
};
DeterministicErrorSum deterministic_error_sum(const ModelClass& cls, const EnvPtr& alpha_env,
                                              size_t horizon);

// argmin_y sum_x pred[x] Loss(x,y); ties broken by the lowest action index.
size_t bayes_act(const std::vector<Rational>& pred, const LossMatrix& losses);

// KL_n(mu||rho) = E_mu[ln(mu(x_{1:n})/rho(x_{1:n}))] by exact enumeration.
// Returns +inf when rho misses a mu-possible sequence.
double kl_n(const Environment& true_env, const Environment& predictor, size_t n);

// Enumeration guard shared by the exact-expectation operations.
constexpr size_t kEnumerationBudget = 1'000'000;

}  // namespace induct
