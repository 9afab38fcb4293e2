#include "induct/envclass.hpp"

#include <sstream>

namespace induct {

Rational Environment::seq_prob(const Sequence& x) const {
    Rational p = 1;
    for (size_t t = 0; t < x.size(); ++t) {
        if (p == 0) return 0;
        const auto dist = predictive(x.prefix(t));
        p *= dist[x[t]];
    }
    return p;
}

BernoulliEnv::BernoulliEnv(Rational theta) : theta_(std::move(theta)) {
    if (theta_ < 0 || theta_ > 1) throw UsageError("BernoulliEnv: theta outside [0,1]");
}

std::vector<Rational> BernoulliEnv::predictive(const Sequence& history) const {
    // Only degenerate thetas can make a history impossible.
    if (theta_ == 0 || theta_ == 1) {
        const uint8_t forbidden = theta_ == 0 ? 1 : 0;
        for (size_t t = 0; t < history.size(); ++t)
            if (history[t] == forbidden)
                throw ConditioningError("BernoulliEnv: history has probability zero");
    }
    return {1 - theta_, theta_};
}

Rational BernoulliEnv::seq_prob(const Sequence& x) const {
    size_t s = 0;
    for (size_t t = 0; t < x.size(); ++t) s += x[t];
    Rational p = 1;
    for (size_t i = 0; i < s; ++i) p *= theta_;
    for (size_t i = 0; i < x.size() - s; ++i) p *= (1 - theta_);
    return p;
}

std::string BernoulliEnv::name() const {
    std::ostringstream os;
    os << "bernoulli(" << theta_ << ")";
    return os.str();
}

DirichletPredictor::DirichletPredictor(const Alphabet& alphabet, Rational pseudo)
    : alphabet_(&alphabet), pseudo_(std::move(pseudo)) {
    if (pseudo_ <= 0) throw UsageError("DirichletPredictor: pseudo-count must be positive");
}

std::vector<Rational> DirichletPredictor::predictive(const Sequence& history) const {
    const size_t d = alphabet_->size();
    std::vector<size_t> counts(d, 0);
    for (size_t t = 0; t < history.size(); ++t) counts[history[t]]++;
    const Rational denom = Rational(history.size()) + Rational(d) * pseudo_;
    std::vector<Rational> dist(d);
    for (size_t i = 0; i < d; ++i) dist[i] = (Rational(counts[i]) + pseudo_) / denom;
    return dist;
}

Rational DirichletPredictor::seq_prob(const Sequence& x) const {
    // Polya-urn closed form: prod_i prod_{j<n_i}(j+pseudo) / prod_{t<n}(t+d*pseudo)
    const size_t d = alphabet_->size();
    std::vector<size_t> counts(d, 0);
    for (size_t t = 0; t < x.size(); ++t) counts[x[t]]++;
    Rational num = 1, den = 1;
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < counts[i]; ++j) num *= (Rational(j) + pseudo_);
    for (size_t t = 0; t < x.size(); ++t) den *= (Rational(t) + Rational(d) * pseudo_);
    return num / den;
}

std::string DirichletPredictor::name() const {
    std::ostringstream os;
    os << "dirichlet(d=" << alphabet_->size() << ",pseudo=" << pseudo_ << ")";
    return os.str();
}

DeterministicEnv::DeterministicEnv(Sequence alpha)
    : prelude_(std::move(alpha)), cycle_(prelude_.alphabet()) {}

DeterministicEnv::DeterministicEnv(Sequence prelude, Sequence cycle)
    : prelude_(std::move(prelude)), cycle_(std::move(cycle)) {
    if (!(prelude_.alphabet() == cycle_.alphabet()))
        throw UsageError("DeterministicEnv: prelude/cycle alphabet mismatch");
    if (cycle_.empty()) throw UsageError("DeterministicEnv: empty cycle");
}

const Alphabet& DeterministicEnv::alphabet() const { return prelude_.alphabet(); }

std::optional<uint8_t> DeterministicEnv::alpha_at(size_t t) const {
    if (t < prelude_.size()) return prelude_[t];
    if (cycle_.empty()) return std::nullopt;
    return cycle_[(t - prelude_.size()) % cycle_.size()];
}

std::vector<Rational> DeterministicEnv::predictive(const Sequence& history) const {
    for (size_t t = 0; t < history.size(); ++t) {
        const auto a = alpha_at(t);
        if (!a || *a != history[t])
            throw ConditioningError("DeterministicEnv: history off sequence");
    }
    const auto next = alpha_at(history.size());
    if (!next) throw ConditioningError("DeterministicEnv: past end of finite alpha");
    std::vector<Rational> dist(alphabet().size(), 0);
    dist[*next] = 1;
    return dist;
}

Rational DeterministicEnv::seq_prob(const Sequence& x) const {
    for (size_t t = 0; t < x.size(); ++t) {
        const auto a = alpha_at(t);
        if (!a || *a != x[t]) return 0;
    }
    return 1;
}

std::string DeterministicEnv::name() const {
    std::string s = "det(" + prelude_.str();
    if (!cycle_.empty()) s += "(" + cycle_.str() + ")*";
    return s + ")";
}

SuffixTreeEnv::SuffixTreeEnv(size_t depth, std::vector<Rational> leaf_p1)
    : depth_(depth), leaf_p1_(std::move(leaf_p1)) {
    if (leaf_p1_.size() != (size_t{1} << depth_))
        throw UsageError("SuffixTreeEnv: need 2^depth leaf parameters");
    for (const auto& p : leaf_p1_)
        if (p < 0 || p > 1) throw UsageError("SuffixTreeEnv: leaf parameter outside [0,1]");
}

size_t SuffixTreeEnv::leaf_index(const Sequence& history) const {
    size_t idx = 0;
    for (size_t k = 0; k < depth_; ++k) {
        const uint8_t bit = k < history.size() ? history[history.size() - 1 - k] : 0;
        idx |= static_cast<size_t>(bit) << k;
    }
    return idx;
}

std::vector<Rational> SuffixTreeEnv::predictive(const Sequence& history) const {
    const Rational& p1 = leaf_p1_[leaf_index(history)];
    return {1 - p1, p1};
}

std::string SuffixTreeEnv::name() const {
    std::ostringstream os;
    os << "pst(d=" << depth_ << ")";
    return os.str();
}

Rational env_seq_prob(const Environment& env, const Sequence& x) {
    if (!(env.alphabet() == x.alphabet()))
        throw UsageError("env_seq_prob: alphabet mismatch");
    return env.seq_prob(x);
}

std::vector<Rational> env_predictive(const Environment& env, const Sequence& history) {
    if (!(env.alphabet() == history.alphabet()))
        throw UsageError("env_predictive: alphabet mismatch");
    return env.predictive(history);
}

}  // namespace induct
