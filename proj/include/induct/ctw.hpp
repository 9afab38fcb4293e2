#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "induct/core.hpp"

namespace induct {

// Context Tree Weighting over all binary prediction suffix trees of depth
// <= d. Leaves use the KT estimator p(1 | a zeros, b ones) = (b+1/2)/(a+b+1).
// Internal nodes maintain log P_w = log(1/2 P_kt + 1/2 P_w0 P_w1); at depth d
// P_w = P_kt. The sliding context is the last d bits, zero padded initially.
//
// Two arithmetic modes: log-domain doubles (default) and exact rationals
// (short inputs only) for bitwise oracle comparisons. A ContextTree is a
// single-writer value; copies are independent.
class ContextTree {
public:
    explicit ContextTree(size_t depth, bool exact = false);
    ContextTree(const ContextTree& other);
    ContextTree& operator=(const ContextTree& other);
    ContextTree(ContextTree&&) = default;
    ContextTree& operator=(ContextTree&&) = default;

    size_t depth() const { return depth_; }

    // Processes one bit; returns log P_w(x bit) - log P_w(x).
    LogProb update(uint8_t bit);

    // p(next = 1) given the current state.
    double prob_next_one() const;

    // log P_w of everything processed so far.
    LogProb log_marginal() const;
    // Exact marginal; only in exact mode.
    Rational exact_marginal() const;

private:
    struct Node {
        uint64_t zeros = 0, ones = 0;
        double log_kt = 0.0;  // log P_kt
        double log_w = 0.0;   // log P_w
        Rational kt_exact = 1, w_exact = 1;
        std::unique_ptr<Node> child[2];
    };

    // Context path for the next symbol, root first. context_[0] is the most
    // recent bit.
    void path_nodes(std::vector<Node*>& out);
    double simulate_update(uint8_t bit) const;
    static double mix(double log_kt, double log_w0, double log_w1);

    size_t depth_;
    bool exact_;
    std::unique_ptr<Node> root_;
    std::vector<uint8_t> context_;  // most recent bit first, length depth_
};

// -log2 P_w(x) in bits.
double ctw_codelength(const Sequence& x, size_t depth);

// Brute-force mixture over all complete suffix trees of depth <= d with the
// natural tree prior (1 bit per node above depth d). d <= 3 only.
Rational brute_force_mixture(const Sequence& x, size_t depth);

// Sum of the tree prior over the whole class; equals 1 for every d.
Rational tree_prior_total(size_t depth);

}  // namespace induct
