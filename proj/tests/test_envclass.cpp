#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "induct/confirmation.hpp"
#include "induct/envclass.hpp"

using namespace induct;

namespace {

Sequence random_bits(std::mt19937_64& rng, size_t n) {
    std::vector<uint8_t> v(n);
    for (auto& b : v) b = rng() & 1;
    return Sequence(Alphabet::binary(), std::move(v));
}

}  // namespace

TEST_CASE("Bernoulli seq_prob") {
    const BernoulliEnv half(Rational(1, 2));
    CHECK(env_seq_prob(half, Sequence::from_bits("111")) == Rational(1, 8));

    const BernoulliEnv biased(Rational(7, 10));
    // theta^3 (1-theta) for three ones and one zero
    CHECK(env_seq_prob(biased, Sequence::from_bits("1110")) == Rational(1029, 10000));
    CHECK(env_seq_prob(biased, Sequence::from_bits("0111")) == Rational(1029, 10000));

    CHECK(env_seq_prob(half, Sequence(Alphabet::binary())) == 1);
    CHECK_THROWS_AS(BernoulliEnv(Rational(11, 10)), UsageError);
}

TEST_CASE("Bernoulli degenerate conditioning") {
    const BernoulliEnv sure(Rational(1));
    CHECK(env_seq_prob(sure, Sequence::from_bits("111")) == 1);
    CHECK(env_seq_prob(sure, Sequence::from_bits("110")) == 0);
    // conditioning on a zero-probability history is an error, not 0/0
    CHECK_THROWS_AS(env_predictive(sure, Sequence::from_bits("0")), ConditioningError);
}

TEST_CASE("DeterministicEnv") {
    const DeterministicEnv ones(Sequence(Alphabet::binary()), Sequence::from_bits("1"));
    CHECK(env_seq_prob(ones, Sequence::from_bits("110")) == 0);
    CHECK(env_seq_prob(ones, Sequence::from_bits("111")) == 1);
    CHECK(*ones.alpha_at(12345) == 1);

    const DeterministicEnv alt(Sequence(Alphabet::binary()), Sequence::from_bits("01"));
    CHECK(env_seq_prob(alt, Sequence::from_bits("0101")) == 1);
    CHECK(env_seq_prob(alt, Sequence::from_bits("0110")) == 0);
    auto p = env_predictive(alt, Sequence::from_bits("01"));
    CHECK(p[0] == 1);
    CHECK(p[1] == 0);
    CHECK_THROWS_AS(env_predictive(alt, Sequence::from_bits("11")), ConditioningError);

    const DeterministicEnv finite(Sequence::from_bits("10"));
    CHECK(env_seq_prob(finite, Sequence::from_bits("10")) == 1);
    CHECK(env_seq_prob(finite, Sequence::from_bits("100")) == 0);  // past the end
    CHECK_FALSE(finite.alpha_at(2).has_value());
}

TEST_CASE("DirichletPredictor") {
    const DirichletPredictor d2(Alphabet::binary());
    // (s+1)/(n+2) with s=3, n=4
    CHECK(env_predictive(d2, Sequence::from_bits("1101"))[1] == Rational(4, 6));
    auto uniform = env_predictive(d2, Sequence(Alphabet::binary()));
    CHECK(uniform[0] == Rational(1, 2));
    CHECK(uniform[1] == Rational(1, 2));

    const Alphabet tri({"a", "b", "c"});
    const DirichletPredictor d3(tri, Rational(1, 2));
    auto p = env_predictive(d3, Sequence(tri, {0, 0, 1}));
    CHECK(p[0] == Rational(5, 9));   // (2 + 1/2)/(3 + 3/2)
    CHECK(p[1] == Rational(3, 9));
    CHECK(p[2] == Rational(1, 9));
}

TEST_CASE("Dirichlet d=2 pseudo=1 reproduces the rule of succession") {
    const DirichletPredictor d2(Alphabet::binary());
    for (uint64_t s = 0; s + 0 <= 50; ++s)
        for (uint64_t f = 0; s + f <= 50; ++f) {
            std::vector<uint8_t> h(s, 1);
            h.insert(h.end(), f, 0);
            const Sequence hist(Alphabet::binary(), std::move(h));
            CHECK(env_predictive(d2, hist)[1] == rule_of_succession({s, f}));
        }
}

TEST_CASE("SuffixTreeEnv") {
    // depth 1: p(1|prev=0)=1, p(1|prev=1)=0
    const SuffixTreeEnv flip(1, {Rational(1), Rational(0)});
    auto p = env_predictive(flip, Sequence::from_bits("10"));
    CHECK(p[0] == 0);
    CHECK(p[1] == 1);
    p = env_predictive(flip, Sequence::from_bits("01"));
    CHECK(p[0] == 1);
    CHECK(p[1] == 0);
    // empty history is zero padded
    CHECK(env_predictive(flip, Sequence(Alphabet::binary()))[1] == 1);

    // depth 2 leaf indexing: bit k of the leaf index is the k-th most recent bit
    const SuffixTreeEnv st(2, {Rational(1, 10), Rational(2, 10), Rational(3, 10), Rational(4, 10)});
    CHECK(st.leaf_index(Sequence::from_bits("01")) == 1);  // recent=1, older=0
    CHECK(st.leaf_index(Sequence::from_bits("10")) == 2);  // recent=0, older=1
    CHECK(st.leaf_index(Sequence::from_bits("1")) == 1);   // padded older bit is 0
    CHECK(env_predictive(st, Sequence::from_bits("01"))[1] == Rational(2, 10));

    CHECK_THROWS_AS(SuffixTreeEnv(1, std::vector<Rational>{Rational(1)}), UsageError);
}

TEST_CASE("chain rule consistency and prefix monotonicity") {
    std::mt19937_64 rng(21);
    std::vector<EnvPtr> envs = {
        std::make_shared<BernoulliEnv>(Rational(3, 7)),
        std::make_shared<DirichletPredictor>(Alphabet::binary()),
        std::make_shared<SuffixTreeEnv>(
            2, std::vector<Rational>{Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(1, 4)}),
        std::make_shared<DeterministicEnv>(Sequence(Alphabet::binary()), Sequence::from_bits("011")),
    };
    for (const auto& env : envs) {
        for (int trial = 0; trial < 20; ++trial) {
            const Sequence x = random_bits(rng, 1 + rng() % 8);
            Rational chained = 1;
            bool dead = false;
            for (size_t t = 0; t < x.size() && !dead; ++t) {
                const Sequence h = x.prefix(t);
                if (env_seq_prob(*env, h) == 0) {
                    dead = true;
                    break;
                }
                chained *= env_predictive(*env, h)[x[t]];
            }
            if (!dead) CHECK(env_seq_prob(*env, x) == chained);

            // prefix monotonicity
            for (size_t t = 0; t < x.size(); ++t)
                CHECK(env_seq_prob(*env, x.prefix(t + 1)) <= env_seq_prob(*env, x.prefix(t)));
        }
    }
}

TEST_CASE("predictive distributions sum to 1 for measures") {
    std::mt19937_64 rng(22);
    const DirichletPredictor d2(Alphabet::binary());
    const BernoulliEnv b(Rational(2, 5));
    for (int trial = 0; trial < 20; ++trial) {
        const Sequence h = random_bits(rng, rng() % 6);
        for (const Environment* env : {(const Environment*)&d2, (const Environment*)&b}) {
            auto p = env_predictive(*env, h);
            Rational sum = 0;
            for (const auto& v : p) sum += v;
            CHECK(sum == 1);
        }
    }
}

TEST_CASE("alphabet mismatch is a usage error") {
    const Alphabet tri({"a", "b", "c"});
    const BernoulliEnv b(Rational(1, 2));
    CHECK_THROWS_AS(env_seq_prob(b, Sequence(tri, {0, 1})), UsageError);
    CHECK_THROWS_AS(env_predictive(b, Sequence(tri, {2})), UsageError);
}
