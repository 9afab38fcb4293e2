#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "induct/core.hpp"

namespace induct {

// A program is any finite bit string. Internally programs are handled as
// opcode sequences: consecutive 3-bit opcodes, 1-2 trailing bits ignored.
struct Program {
    std::vector<uint8_t> bits;

    static Program from_bits(const std::string& s) {
        Program p;
        for (char c : s) {
            if (c != '0' && c != '1') throw UsageError("Program: not a bit string");
            p.bits.push_back(static_cast<uint8_t>(c - '0'));
        }
        return p;
    }
    size_t length() const { return bits.size(); }
};

struct MachineBudget {
    size_t max_length = 21;  // L, bits
    size_t max_steps = 1000;  // T
};

enum class RunStatus { Halted, Timeout, Invalid };

struct RunResult {
    std::vector<uint8_t> output;  // bits
    RunStatus status = RunStatus::Invalid;
    size_t steps = 0;
};

// Trace callback invoked once per executed opcode:
// (step, instruction pointer, head position, cell value, output-so-far).
using TraceFn = std::function<void(size_t, size_t, long, uint8_t, const std::vector<uint8_t>&)>;

// BIN-BF machine. Opcodes: 000 right, 001 left, 010 inc, 011 dec,
// 100 loop-open, 101 loop-close, 110 output cell LSB, 111 halt.
// Cells are integers mod 256 on a tape unbounded in both directions.
// Running past the last opcode is a normal halt. An unmatched loop-open
// with cell 0 jumps past the end (halt); an unmatched loop-close makes
// the program invalid. One opcode execution is one step.
RunResult run_program(const Program& p, size_t max_steps, const TraceFn& trace = nullptr);
// Same machine on a pre-parsed opcode sequence.
RunResult run_opcodes(const std::vector<uint8_t>& ops, size_t max_steps,
                      const TraceFn& trace = nullptr);

// All minimal programs p with |p| <= L whose output starts with x within T
// steps; the set is prefix-free. Minimal lengths are always multiples of 3
// because trailing bits never change behavior.
std::vector<Program> enumerate_minimal(const Sequence& x, const MachineBudget& b);

// Combined enumeration results for one target string at one budget.
struct Approximation {
    double m_hat = 0.0;                // sum of 2^-|p| over minimal programs
    std::optional<size_t> k_hat;       // min |p|, exact output + halt
    std::optional<size_t> km_hat;      // min |p|, output starts with x
    std::optional<double> kt_hat;      // min |p| + log2(steps), exact + halt
};

// Single enumeration pass computing all four approximations.
// `parallel` splits the search over top-level opcodes with OpenMP; results
// are bitwise identical to the serial reference.
Approximation approximate(const Sequence& x, const MachineBudget& b, bool parallel = true);

double m_hat(const Sequence& x, const MachineBudget& b);
std::optional<size_t> k_hat(const Sequence& x, const MachineBudget& b);
std::optional<size_t> km_hat(const Sequence& x, const MachineBudget& b);
std::optional<double> kt_hat(const Sequence& x, const MachineBudget& b);

// Rows of the instantaneous-bound report: for each n < n_max the conditional
// M(0|1^n) = m_hat(1^n 0)/m_hat(1^n) and the comparison value 2^-K(bin(n)).
struct SpikeRow {
    size_t n = 0;
    bool available = false;  // false when m_hat(1^n) = 0 at this budget
    double conditional = 0.0;
    std::optional<size_t> k_of_n;  // k_hat of the binary expansion of n
};

struct SpikeReport {
    std::vector<SpikeRow> rows;
    double conditional_sum = 0.0;  // sum over available rows
};

// Standard binary expansion of n, no leading zeros; n=0 -> "0".
std::string binary_expansion(uint64_t n);

SpikeReport instantaneous_report(size_t n_max, const MachineBudget& b, bool parallel = true);

}  // namespace induct
