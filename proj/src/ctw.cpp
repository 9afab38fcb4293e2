#include "induct/ctw.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace induct {

ContextTree::ContextTree(size_t depth, bool exact)
    : depth_(depth), exact_(exact), root_(std::make_unique<Node>()), context_(depth, 0) {}

ContextTree::ContextTree(const ContextTree& other)
    : depth_(other.depth_), exact_(other.exact_), context_(other.context_) {
    const auto clone = [](const auto& self, const Node& n) -> std::unique_ptr<Node> {
        auto out = std::make_unique<Node>();
        out->zeros = n.zeros;
        out->ones = n.ones;
        out->log_kt = n.log_kt;
        out->log_w = n.log_w;
        out->kt_exact = n.kt_exact;
        out->w_exact = n.w_exact;
        for (int i = 0; i < 2; ++i)
            if (n.child[i]) out->child[i] = self(self, *n.child[i]);
        return out;
    };
    root_ = clone(clone, *other.root_);
}

ContextTree& ContextTree::operator=(const ContextTree& other) {
    if (this != &other) {
        ContextTree tmp(other);
        *this = std::move(tmp);
    }
    return *this;
}

double ContextTree::mix(double log_kt, double log_w0, double log_w1) {
    const double split = log_w0 + log_w1;
    const double m = std::max(log_kt, split);
    return m + std::log(0.5 * (std::exp(log_kt - m) + std::exp(split - m)));
}

void ContextTree::path_nodes(std::vector<Node*>& out) {
    out.clear();
    Node* n = root_.get();
    out.push_back(n);
    for (size_t k = 0; k < depth_; ++k) {
        auto& child = n->child[context_[k]];
        if (!child) child = std::make_unique<Node>();
        n = child.get();
        out.push_back(n);
    }
}

LogProb ContextTree::update(uint8_t bit) {
    if (bit > 1) throw UsageError("ContextTree: bits only");
    const double before = root_->log_w;
    const Rational before_exact = root_->w_exact;

    std::vector<Node*> path;
    path_nodes(path);

    // Leaf to root so each internal node sees updated child weights.
    for (size_t k = path.size(); k-- > 0;) {
        Node* n = path[k];
        const uint64_t cnt = bit ? n->ones : n->zeros;
        const uint64_t total = n->zeros + n->ones;
        n->log_kt += std::log((cnt + 0.5) / (total + 1.0));
        if (exact_) n->kt_exact *= Rational(2 * cnt + 1, 2 * (total + 1));
        (bit ? n->ones : n->zeros)++;

        if (k == depth_) {
            n->log_w = n->log_kt;
            if (exact_) n->w_exact = n->kt_exact;
        } else {
            const Node* c0 = n->child[0].get();
            const Node* c1 = n->child[1].get();
            n->log_w = mix(n->log_kt, c0 ? c0->log_w : 0.0, c1 ? c1->log_w : 0.0);
            if (exact_)
                n->w_exact = (n->kt_exact + (c0 ? c0->w_exact : Rational(1)) *
                                                (c1 ? c1->w_exact : Rational(1))) /
                             2;
        }
    }

    // slide the context: most recent bit first
    if (depth_ > 0) {
        for (size_t k = depth_ - 1; k > 0; --k) context_[k] = context_[k - 1];
        context_[0] = bit;
    }

    if (exact_) return rational_to_logprob(root_->w_exact / before_exact);
    return LogProb(std::min(0.0, root_->log_w - before));
}

double ContextTree::simulate_update(uint8_t bit) const {
    // Recomputes the root weight as if `bit` were processed, without mutation.
    std::vector<const Node*> path;
    const Node* n = root_.get();
    path.push_back(n);
    for (size_t k = 0; k < depth_ && n; ++k) {
        n = n->child[context_[k]].get();
        path.push_back(n);  // may be null: fresh node
    }
    while (path.size() < depth_ + 1) path.push_back(nullptr);

    double child_w = 0.0;
    for (size_t k = depth_ + 1; k-- > 0;) {
        const Node* node = path[k];
        const uint64_t zeros = node ? node->zeros : 0;
        const uint64_t ones = node ? node->ones : 0;
        const uint64_t cnt = bit ? ones : zeros;
        const double log_kt =
            (node ? node->log_kt : 0.0) + std::log((cnt + 0.5) / (zeros + ones + 1.0));
        if (k == depth_) {
            child_w = log_kt;
        } else {
            // the off-path child is unchanged
            const Node* off = node ? node->child[1 - context_[k]].get() : nullptr;
            const double off_w = off ? off->log_w : 0.0;
            const double w0 = context_[k] == 0 ? child_w : off_w;
            const double w1 = context_[k] == 0 ? off_w : child_w;
            child_w = mix(log_kt, w0, w1);
        }
    }
    return child_w;
}

double ContextTree::prob_next_one() const {
    return std::exp(simulate_update(1) - root_->log_w);
}

LogProb ContextTree::log_marginal() const {
    if (exact_) return rational_to_logprob(root_->w_exact);
    return LogProb(std::min(0.0, root_->log_w));
}

Rational ContextTree::exact_marginal() const {
    if (!exact_) throw UsageError("ContextTree: not in exact mode");
    return root_->w_exact;
}

double ctw_codelength(const Sequence& x, size_t depth) {
    if (!(x.alphabet() == Alphabet::binary()))
        throw UsageError("ctw_codelength: binary sequences only");
    ContextTree tree(depth);
    double log_e = 0.0;
    for (size_t t = 0; t < x.size(); ++t) log_e += tree.update(x[t]).value();
    return -log_e / std::log(2.0);
}

namespace {

// A complete suffix tree as its prior cost and leaf context labels.
// A label's bit i is the context bit at depth i (most recent first).
struct TreeShape {
    size_t gamma = 0;
    std::vector<std::string> leaves;
};

std::vector<TreeShape> all_shapes(size_t remaining_depth) {
    if (remaining_depth == 0) return {TreeShape{0, {""}}};
    std::vector<TreeShape> out;
    out.push_back(TreeShape{1, {""}});  // stop here (costs 1 split/leaf bit)
    const auto subs = all_shapes(remaining_depth - 1);
    for (const auto& t0 : subs)
        for (const auto& t1 : subs) {
            TreeShape s;
            s.gamma = 1 + t0.gamma + t1.gamma;
            for (const auto& l : t0.leaves) s.leaves.push_back("0" + l);
            for (const auto& l : t1.leaves) s.leaves.push_back("1" + l);
            out.push_back(std::move(s));
        }
    return out;
}

}  // namespace

Rational tree_prior_total(size_t depth) {
    if (depth > 3) throw BudgetError("tree_prior_total: depth must be <= 3");
    Rational total = 0;
    for (const auto& s : all_shapes(depth)) total += Rational(1, BigInt(1) << s.gamma);
    return total;
}

Rational brute_force_mixture(const Sequence& x, size_t depth) {
    if (depth > 3) throw BudgetError("brute_force_mixture: depth must be <= 3");
    if (!(x.alphabet() == Alphabet::binary()))
        throw UsageError("brute_force_mixture: binary sequences only");

    Rational mixture = 0;
    for (const auto& shape : all_shapes(depth)) {
        // exact KT marginal per leaf, sequentially over the sequence
        std::vector<std::pair<uint64_t, uint64_t>> counts(shape.leaves.size(), {0, 0});
        Rational p_tree = 1;
        for (size_t t = 0; t < x.size(); ++t) {
            // context string, most recent bit first, zero padded
            std::string ctx(depth, '0');
            for (size_t k = 0; k < depth && k < t; ++k)
                ctx[k] = static_cast<char>('0' + x[t - 1 - k]);
            size_t leaf = shape.leaves.size();
            for (size_t i = 0; i < shape.leaves.size(); ++i)
                if (ctx.compare(0, shape.leaves[i].size(), shape.leaves[i]) == 0) {
                    leaf = i;
                    break;
                }
            auto& [zeros, ones] = counts[leaf];
            const uint64_t cnt = x[t] ? ones : zeros;
            p_tree *= Rational(2 * cnt + 1, 2 * (zeros + ones + 1));
            (x[t] ? ones : zeros)++;
        }
        mixture += Rational(1, BigInt(1) << shape.gamma) * p_tree;
    }
    return mixture;
}

}  // namespace induct
