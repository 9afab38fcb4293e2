#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "induct/core.hpp"

namespace induct {

// A (semi)measure over sequences: predictive(history) gives the next-symbol
// distribution, seq_prob the exact probability of a whole string via the
// chain rule. Environments are immutable and safe to share across threads.
class Environment {
public:
    virtual ~Environment() = default;

    virtual const Alphabet& alphabet() const = 0;

    // Next-symbol distribution after the given history. Throws
    // ConditioningError when the history has probability zero.
    virtual std::vector<Rational> predictive(const Sequence& history) const = 0;

    // P(x); default chain-rule product of conditionals.
    virtual Rational seq_prob(const Sequence& x) const;

    virtual std::string name() const = 0;
};

using EnvPtr = std::shared_ptr<const Environment>;

// i.i.d. coin with success probability theta.
class BernoulliEnv final : public Environment {
public:
    explicit BernoulliEnv(Rational theta);

    const Alphabet& alphabet() const override { return Alphabet::binary(); }
    std::vector<Rational> predictive(const Sequence& history) const override;
    Rational seq_prob(const Sequence& x) const override;
    std::string name() const override;

    const Rational& theta() const { return theta_; }

private:
    Rational theta_;
};

// Dirichlet(pseudo,...,pseudo) predictor over a d-ary alphabet. With d=2 and
// pseudo=1 this is Laplace's rule of succession. Counts are derived from the
// history, so the object itself stays immutable.
class DirichletPredictor final : public Environment {
public:
    DirichletPredictor(const Alphabet& alphabet, Rational pseudo = 1);

    const Alphabet& alphabet() const override { return *alphabet_; }
    std::vector<Rational> predictive(const Sequence& history) const override;
    Rational seq_prob(const Sequence& x) const override;
    std::string name() const override;

private:
    const Alphabet* alphabet_;
    Rational pseudo_;
};

// Deterministic environment: probability 1 on every prefix of alpha,
// 0 elsewhere. alpha may be an eventually-periodic generator so the
// sequence can be unbounded.
class DeterministicEnv final : public Environment {
public:
    // Finite alpha; sequences longer than it have probability 0.
    explicit DeterministicEnv(Sequence alpha);
    // Infinite alpha = prelude then cycle repeated forever (cycle nonempty).
    DeterministicEnv(Sequence prelude, Sequence cycle);

    const Alphabet& alphabet() const override;
    std::vector<Rational> predictive(const Sequence& history) const override;
    Rational seq_prob(const Sequence& x) const override;
    std::string name() const override;

    // Symbol at position t (0-based); nullopt past the end of a finite alpha.
    std::optional<uint8_t> alpha_at(size_t t) const;

private:
    Sequence prelude_;
    Sequence cycle_;  // empty => finite alpha
};

// Binary prediction suffix tree of depth d given as a complete table:
// one Bernoulli parameter p(next=1 | context) per leaf. The leaf is
// selected by the most recent d bits, most recent bit first; histories
// shorter than d are zero padded.
class SuffixTreeEnv final : public Environment {
public:
    SuffixTreeEnv(size_t depth, std::vector<Rational> leaf_p1);

    const Alphabet& alphabet() const override { return Alphabet::binary(); }
    std::vector<Rational> predictive(const Sequence& history) const override;
    std::string name() const override;

    size_t depth() const { return depth_; }
    // Leaf index for a history: bit k of the index is the k-th most recent bit.
    size_t leaf_index(const Sequence& history) const;

private:
    size_t depth_;
    std::vector<Rational> leaf_p1_;
};

// Exact P(x) under an environment; checks the alphabet matches.
Rational env_seq_prob(const Environment& env, const Sequence& x);

// Next-symbol distribution; checks the alphabet matches.
std::vector<Rational> env_predictive(const Environment& env, const Sequence& history);

}  // namespace induct
