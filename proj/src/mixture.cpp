#include "induct/mixture.hpp"

#include <cmath>
#include <limits>

namespace induct {

ModelClass::ModelClass(std::vector<Member> members) : members_(std::move(members)) {
    if (members_.empty()) throw UsageError("ModelClass: empty class");
    Rational total = 0;
    for (const auto& m : members_) {
        if (!m.env) throw UsageError("ModelClass: null environment");
        if (m.weight <= 0) throw UsageError("ModelClass: prior weights must be positive");
        if (!(m.env->alphabet() == members_.front().env->alphabet()))
            throw UsageError("ModelClass: mixed alphabets");
        total += m.weight;
    }
    if (total > 1) throw UsageError("ModelClass: prior weights sum above 1");
}

Rational ModelClass::weight_sum() const {
    Rational total = 0;
    for (const auto& m : members_) total += m.weight;
    return total;
}

Rational mixture_prob(const ModelClass& cls, const Sequence& x) {
    if (!(cls.alphabet() == x.alphabet()))
        throw UsageError("mixture_prob: alphabet mismatch");
    Rational xi = 0;
    for (const auto& m : cls.members()) xi += m.weight * m.env->seq_prob(x);
    return xi;
}

Posterior posterior(const ModelClass& cls, const Sequence& x) {
    Rational xi = 0;
    std::vector<Rational> joint(cls.size());
    for (size_t i = 0; i < cls.size(); ++i) {
        joint[i] = cls.members()[i].weight * cls.members()[i].env->seq_prob(x);
        xi += joint[i];
    }
    if (xi == 0) throw ConditioningError("posterior: xi(x) = 0");
    for (auto& w : joint) w /= xi;
    return Posterior{std::move(joint), x};
}

std::vector<Rational> mixture_predictive(const ModelClass& cls, const Sequence& history) {
    const Rational xi = mixture_prob(cls, history);
    if (xi == 0) throw ConditioningError("mixture_predictive: xi(history) = 0");
    std::vector<Rational> dist(cls.alphabet().size());
    for (size_t a = 0; a < dist.size(); ++a)
        dist[a] = mixture_prob(cls, history.append(static_cast<uint8_t>(a))) / xi;
    return dist;
}

double hellinger(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw UsageError("hellinger: dimension mismatch");
    double h = 0;
    for (size_t a = 0; a < p.size(); ++a) {
        const double d = std::sqrt(p[a]) - std::sqrt(q[a]);
        h += d * d;
    }
    return h;
}

double hellinger(const std::vector<Rational>& p, const std::vector<Rational>& q) {
    std::vector<double> pd(p.size()), qd(q.size());
    for (size_t a = 0; a < p.size(); ++a) pd[a] = to_double(p[a]);
    for (size_t a = 0; a < q.size(); ++a) qd[a] = to_double(q[a]);
    return hellinger(pd, qd);
}

namespace {

size_t member_index(const ModelClass& cls, const EnvPtr& env) {
    for (size_t i = 0; i < cls.size(); ++i)
        if (cls.members()[i].env == env) return i;
    throw UsageError("true environment is not a class member");
}

void check_enumeration_budget(size_t alphabet, size_t horizon) {
    double total = 1;
    for (size_t t = 0; t < horizon; ++t) {
        total *= static_cast<double>(alphabet);
        if (total > static_cast<double>(kEnumerationBudget))
            throw BudgetError("enumeration budget exceeded");
    }
}

}  // namespace

BoundedSum expected_hellinger_sum(const ModelClass& cls, const EnvPtr& true_env,
                                  size_t horizon) {
    const size_t mu = member_index(cls, true_env);
    const size_t d = cls.alphabet().size();
    check_enumeration_budget(d, horizon);
    const double bound = -std::log(to_double(cls.members()[mu].weight));

    BoundedSum out{0.0, bound, {}};
    // Histories with positive mu-probability at the current depth.
    std::vector<std::pair<Sequence, Rational>> level{{Sequence(cls.alphabet()), Rational(1)}};
    for (size_t t = 1; t <= horizon; ++t) {
        double term = 0;
        std::vector<std::pair<Sequence, Rational>> next;
        for (const auto& [h, w] : level) {
            const auto mu_pred = true_env->predictive(h);
            const auto xi_pred = mixture_predictive(cls, h);
            term += to_double(w) * hellinger(xi_pred, mu_pred);
            for (size_t a = 0; a < d; ++a) {
                const Rational wa = w * mu_pred[a];
                if (wa != 0) next.emplace_back(h.append(static_cast<uint8_t>(a)), wa);
            }
        }
        out.sum += term;
        out.rows.push_back({static_cast<double>(t), term, out.sum, bound});
        level = std::move(next);
    }
    return out;
}

DeterministicErrorSum deterministic_error_sum(const ModelClass& cls, const EnvPtr& alpha_env,
                                              size_t horizon) {
    const size_t idx = member_index(cls, alpha_env);
    const auto* det = dynamic_cast<const DeterministicEnv*>(alpha_env.get());
    if (det == nullptr) throw UsageError("deterministic_error_sum: alpha is not deterministic");
    const double bound = -std::log(to_double(cls.members()[idx].weight));

    DeterministicErrorSum out;
    out.sum = 0;
    out.bound = bound;
    Sequence history(cls.alphabet());
    for (size_t t = 1; t <= horizon; ++t) {
        const auto a = det->alpha_at(t - 1);
        if (!a) break;  // finite alpha exhausted
        const Rational xi = mixture_prob(cls, history);
        const Sequence extended = history.append(*a);
        const Rational on_seq = mixture_prob(cls, extended) / xi;
        const double term = std::abs(1.0 - to_double(on_seq));
        out.sum += term;
        out.final_predictive = to_double(on_seq);
        out.rows.push_back({static_cast<double>(t), term, out.sum, bound});
        history = extended;
    }
    return out;
}

LossMatrix::LossMatrix(size_t n_symbols, size_t n_actions, std::vector<Rational> entries)
    : n_symbols_(n_symbols), n_actions_(n_actions), entries_(std::move(entries)) {
    if (entries_.size() != n_symbols_ * n_actions_)
        throw UsageError("LossMatrix: entry count mismatch");
    for (const auto& e : entries_)
        if (e < 0 || e > 1) throw UsageError("LossMatrix: entries must lie in [0,1]");
}

size_t bayes_act(const std::vector<Rational>& pred, const LossMatrix& losses) {
    if (pred.size() != losses.n_symbols())
        throw UsageError("bayes_act: loss matrix does not cover the alphabet");
    size_t best = 0;
    Rational best_loss;
    for (size_t y = 0; y < losses.n_actions(); ++y) {
        Rational expected = 0;
        for (size_t x = 0; x < pred.size(); ++x) expected += pred[x] * losses.loss(x, y);
        if (y == 0 || expected < best_loss) {
            best = y;
            best_loss = expected;
        }
    }
    return best;
}

double kl_n(const Environment& true_env, const Environment& predictor, size_t n) {
    if (!(true_env.alphabet() == predictor.alphabet()))
        throw UsageError("kl_n: alphabet mismatch");
    const size_t d = true_env.alphabet().size();
    check_enumeration_budget(d, n);

    double kl = 0;
    std::vector<uint8_t> items(n, 0);
    while (true) {
        const Sequence x(true_env.alphabet(), items);
        const Rational pm = true_env.seq_prob(x);
        if (pm != 0) {
            const Rational pr = predictor.seq_prob(x);
            if (pr == 0) return std::numeric_limits<double>::infinity();
            kl += to_double(pm) * (rational_to_logprob(pm).value() - rational_to_logprob(pr).value());
        }
        // next sequence in lexicographic order
        size_t i = n;
        while (i > 0 && items[i - 1] == d - 1) items[--i] = 0;
        if (i == 0) break;
        items[i - 1]++;
    }
    return kl;
}

}  // namespace induct
