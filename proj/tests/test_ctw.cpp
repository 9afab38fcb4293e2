#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "induct/ctw.hpp"

using namespace induct;

TEST_CASE("KT estimator at the leaves") {
    // depth 0: the tree is a single KT node
    ContextTree t(0);
    CHECK(t.prob_next_one() == doctest::Approx(0.5));
    t.update(1);
    CHECK(t.prob_next_one() == doctest::Approx(0.75));  // (1+1/2)/(1+1)
    t.update(1);
    t.update(1);
    t.update(1);
    CHECK(t.prob_next_one() == doctest::Approx(0.9));  // (4+1/2)/(4+1)
    CHECK_THROWS_AS(t.update(2), UsageError);
}

TEST_CASE("empty sequence codes for free") {
    for (size_t d : {size_t(0), size_t(1), size_t(4)}) {
        CHECK(ctw_codelength(Sequence::from_bits(""), d) == doctest::Approx(0.0));
        ContextTree t(d);
        CHECK(t.log_marginal().value() == doctest::Approx(0.0));
    }
}

TEST_CASE("alternating bits compress at depth 1") {
    std::string x;
    for (int i = 0; i < 64; ++i) x.push_back(char('0' + i % 2));
    CHECK(ctw_codelength(Sequence::from_bits(x), 1) < 64.0);

    std::string y;
    for (int i = 0; i < 256; ++i) y.push_back(char('0' + i % 2));
    CHECK(ctw_codelength(Sequence::from_bits(y), 1) <= 20.0);

    // per-bit predictions within each context lock on after a few symbols
    ContextTree t(1);
    double prev[2] = {0, 0};
    for (int i = 0; i < 64; ++i) {
        const uint8_t bit = uint8_t(i % 2);
        const double p = bit ? t.prob_next_one() : 1 - t.prob_next_one();
        if (i > 4) CHECK(p > prev[bit] - 1e-12);
        prev[bit] = p;
        t.update(bit);
    }
    CHECK(t.prob_next_one() < 0.05);  // last bit was 1, so next is a confident 0
}

TEST_CASE("random data does not compress") {
    std::mt19937_64 rng(1234);
    double total = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        std::string x;
        for (int i = 0; i < 64; ++i) x.push_back(char('0' + rng() % 2));
        total += ctw_codelength(Sequence::from_bits(x), 4);
    }
    CHECK(total / trials >= 56.0);
}

TEST_CASE("codelength decomposes over updates") {
    ContextTree t(3);
    double acc = 0;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 40; ++i) {
        const uint8_t bit = uint8_t(rng() % 2);
        acc += t.update(bit).value();
        CHECK(t.log_marginal().value() == doctest::Approx(acc).epsilon(1e-12));
    }
}

TEST_CASE("tree prior is a probability distribution") {
    CHECK(tree_prior_total(0) == 1);
    CHECK(tree_prior_total(1) == 1);
    CHECK(tree_prior_total(2) == 1);
    CHECK(tree_prior_total(3) == 1);
    CHECK_THROWS_AS(tree_prior_total(4), BudgetError);
}

TEST_CASE("weighted tree equals the brute-force mixture") {
    std::mt19937_64 rng(99);
    for (size_t d = 0; d <= 3; ++d) {
        for (int trial = 0; trial < 4; ++trial) {
            std::string x;
            const int len = 1 + int(rng() % 10);
            for (int i = 0; i < len; ++i) x.push_back(char('0' + rng() % 2));
            const Sequence seq = Sequence::from_bits(x);
            const Rational bf = brute_force_mixture(seq, d);
            const double cl = ctw_codelength(seq, d);
            CHECK(cl == doctest::Approx(-std::log2(to_double(bf))).epsilon(1e-9));

            // exact mode matches the brute force rational for rational
            ContextTree t(d, true);
            for (char c : x) t.update(uint8_t(c - '0'));
            CHECK(t.exact_marginal() == bf);
        }
    }
    CHECK_THROWS_AS(brute_force_mixture(Sequence::from_bits("01"), 4), BudgetError);
}

TEST_CASE("exact mode defines a measure on each prefix") {
    // P(x0) + P(x1) = P(x) under the mixture
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        std::string x;
        for (int i = 0; i < 6; ++i) x.push_back(char('0' + rng() % 2));
        for (size_t d = 0; d <= 2; ++d) {
            ContextTree base(d, true);
            for (char c : x) base.update(uint8_t(c - '0'));
            const Rational px = base.exact_marginal();

            ContextTree t0 = base, t1 = base;
            t0.update(0);
            t1.update(1);
            CHECK(t0.exact_marginal() + t1.exact_marginal() == px);
        }
    }
    // non-exact trees refuse exact queries
    ContextTree plain(1);
    CHECK_THROWS_AS(plain.exact_marginal(), UsageError);
}

TEST_CASE("copies are independent") {
    ContextTree a(2);
    a.update(1);
    a.update(0);
    ContextTree b = a;
    b.update(1);
    b.update(1);
    ContextTree c = a;
    c.update(1);
    c.update(1);
    CHECK(b.log_marginal().value() == doctest::Approx(c.log_marginal().value()).epsilon(1e-15));
    CHECK(a.log_marginal().value() != b.log_marginal().value());
}

TEST_CASE("deeper trees pay a bounded model cost") {
    // on depth-1-structured data, depth 8 costs only slightly more than depth 1
    std::string x;
    for (int i = 0; i < 256; ++i) x.push_back(char('0' + i % 2));
    const double c1 = ctw_codelength(Sequence::from_bits(x), 1);
    const double c8 = ctw_codelength(Sequence::from_bits(x), 8);
    CHECK(c8 <= c1 + 16.0);
}
