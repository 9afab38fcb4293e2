#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace induct {

// Exact rational arithmetic. Always stored in lowest terms with a
// positive denominator (cpp_rational maintains both).
using BigInt   = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) {
    return r.convert_to<double>();
}

// ln of a positive big integer, accurate to double precision.
inline double log_bigint(const BigInt& n) {
    if (n <= 0) throw std::domain_error("log_bigint: nonpositive argument");
    const auto bits = boost::multiprecision::msb(n);
    if (bits < 512) return std::log(n.convert_to<double>());
    const unsigned shift = static_cast<unsigned>(bits) - 400;
    const BigInt top = n >> shift;
    return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

// Natural-log probability in [-inf, 0]. -inf is first class and encodes
// probability zero; it never participates in subtraction.
class LogProb {
public:
    LogProb() : v_(-std::numeric_limits<double>::infinity()) {}
    explicit LogProb(double v) : v_(v) {
        if (v > 1e-12) throw std::domain_error("LogProb: value above 0");
        if (v > 0) v = 0;
        v_ = v;
    }

    static LogProb zero() { return LogProb(); }               // prob 0
    static LogProb one() { return LogProb(0.0); }             // prob 1
    static LogProb from_prob(double p) {
        if (p < 0 || p > 1 + 1e-12) throw std::domain_error("LogProb: prob outside [0,1]");
        return p == 0 ? zero() : LogProb(std::min(0.0, std::log(p)));
    }

    double value() const { return v_; }
    bool is_zero() const { return std::isinf(v_); }
    double prob() const { return is_zero() ? 0.0 : std::exp(v_); }

    // Product of probabilities.
    LogProb operator*(const LogProb& o) const {
        if (is_zero() || o.is_zero()) return zero();
        LogProb r;
        r.v_ = v_ + o.v_;
        if (r.v_ > 0) r.v_ = 0;
        return r;
    }

    friend bool operator==(const LogProb& a, const LogProb& b) {
        return (a.is_zero() && b.is_zero()) || a.v_ == b.v_;
    }
    friend bool operator<(const LogProb& a, const LogProb& b) {
        if (a.is_zero()) return !b.is_zero();
        if (b.is_zero()) return false;
        return a.v_ < b.v_;
    }

private:
    double v_;
};

// ln sum of exp, stable for values down to -1e6 and below.
inline LogProb log_sum_exp(std::span<const LogProb> values) {
    if (values.empty()) throw std::invalid_argument("log_sum_exp: empty list");
    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& v : values)
        if (!v.is_zero() && v.value() > mx) mx = v.value();
    if (std::isinf(mx)) return LogProb::zero();
    double s = 0.0;
    for (const auto& v : values)
        if (!v.is_zero()) s += std::exp(v.value() - mx);
    return LogProb(std::min(0.0, mx + std::log(s)));
}

inline LogProb log_sum_exp(const std::vector<LogProb>& values) {
    return log_sum_exp(std::span<const LogProb>(values));
}

// Natural log of a rational probability. Exact -inf at 0, exact 0 at 1.
inline LogProb rational_to_logprob(const Rational& r) {
    if (r < 0 || r > 1) throw std::domain_error("rational_to_logprob: outside [0,1]");
    if (r == 0) return LogProb::zero();
    if (r == 1) return LogProb::one();
    const double v = log_bigint(numerator(r)) - log_bigint(denominator(r));
    return LogProb(std::min(0.0, v));
}

// Ordered finite alphabet, size >= 2. Symbol i always maps to index i.
class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
        if (symbols_.size() < 2) throw std::invalid_argument("Alphabet: need at least 2 symbols");
        for (size_t i = 0; i < symbols_.size(); ++i)
            for (size_t j = i + 1; j < symbols_.size(); ++j)
                if (symbols_[i] == symbols_[j])
                    throw std::invalid_argument("Alphabet: duplicate symbol");
    }

    static const Alphabet& binary() {
        static const Alphabet a{{"0", "1"}};
        return a;
    }

    size_t size() const { return symbols_.size(); }
    const std::string& symbol(size_t i) const { return symbols_.at(i); }
    bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

private:
    std::vector<std::string> symbols_;
};

// Finite string over an alphabet, stored as symbol indices.
class Sequence {
public:
    explicit Sequence(const Alphabet& a) : alphabet_(&a) {}
    Sequence(const Alphabet& a, std::vector<uint8_t> items)
        : alphabet_(&a), items_(std::move(items)) {
        for (uint8_t s : items_)
            if (s >= a.size()) throw std::invalid_argument("Sequence: symbol index out of range");
    }

    // Binary sequence from a string of '0'/'1'.
    static Sequence from_bits(const std::string& bits) {
        std::vector<uint8_t> v;
        v.reserve(bits.size());
        for (char c : bits) {
            if (c != '0' && c != '1') throw std::invalid_argument("from_bits: not a bit string");
            v.push_back(static_cast<uint8_t>(c - '0'));
        }
        return Sequence(Alphabet::binary(), std::move(v));
    }

    const Alphabet& alphabet() const { return *alphabet_; }
    size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    uint8_t operator[](size_t i) const { return items_[i]; }
    const std::vector<uint8_t>& items() const { return items_; }

    // x_{1:t} (first t symbols).
    Sequence prefix(size_t t) const {
        return Sequence(*alphabet_, std::vector<uint8_t>(items_.begin(), items_.begin() + std::min(t, items_.size())));
    }

    Sequence append(uint8_t sym) const {
        auto v = items_;
        v.push_back(sym);
        return Sequence(*alphabet_, std::move(v));
    }

    std::string str() const {
        std::string s;
        for (uint8_t i : items_) s += alphabet_->symbol(i);
        return s;
    }

    bool operator==(const Sequence& o) const {
        return *alphabet_ == *o.alphabet_ && items_ == o.items_;
    }

private:
    const Alphabet* alphabet_;
    std::vector<uint8_t> items_;
};

// Error taxonomy shared by the CLI exit codes.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConditioningError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace induct
