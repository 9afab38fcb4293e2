#include "induct/algoprob.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace induct {

namespace {

std::vector<uint8_t> parse_opcodes(const std::vector<uint8_t>& bits) {
    std::vector<uint8_t> ops;
    ops.reserve(bits.size() / 3);
    for (size_t i = 0; i + 2 < bits.size(); i += 3)
        ops.push_back(static_cast<uint8_t>((bits[i] << 2) | (bits[i + 1] << 1) | bits[i + 2]));
    return ops;
}

enum Op : uint8_t {
    kRight = 0,
    kLeft = 1,
    kInc = 2,
    kDec = 3,
    kOpen = 4,
    kClose = 5,
    kOut = 6,
    kHalt = 7,
};

struct MachineRun {
    RunResult result;
    bool halted_by_opcode = false;  // 111 halt (extensions behave identically)
};

MachineRun execute(const std::vector<uint8_t>& ops, size_t max_steps, const TraceFn& trace) {
    MachineRun run;
    // Bracket matching; an unmatched close is a static error.
    std::vector<size_t> jump(ops.size(), ops.size());
    {
        std::vector<size_t> stack;
        for (size_t i = 0; i < ops.size(); ++i) {
            if (ops[i] == kOpen) {
                stack.push_back(i);
            } else if (ops[i] == kClose) {
                if (stack.empty()) {
                    run.result.status = RunStatus::Invalid;
                    return run;
                }
                jump[i] = stack.back();  // close -> its open
                jump[stack.back()] = i;  // open -> its close
                stack.pop_back();
            }
        }
        // remaining opens keep jump = ops.size(): past-the-end halt
    }

    std::vector<uint8_t> right(1, 0), left;
    long pos = 0;
    auto cell = [&]() -> uint8_t& {
        if (pos >= 0) {
            if (static_cast<size_t>(pos) >= right.size()) right.resize(pos + 1, 0);
            return right[pos];
        }
        const size_t idx = static_cast<size_t>(-pos - 1);
        if (idx >= left.size()) left.resize(idx + 1, 0);
        return left[idx];
    };

    size_t ip = 0;
    auto& res = run.result;
    while (ip < ops.size()) {
        if (res.steps == max_steps) {
            res.status = RunStatus::Timeout;
            return run;
        }
        const uint8_t op = ops[ip];
        ++res.steps;
        if (trace) trace(res.steps, ip, pos, cell(), res.output);
        switch (op) {
            case kRight: ++pos; break;
            case kLeft: --pos; break;
            case kInc: ++cell(); break;
            case kDec: --cell(); break;
            case kOut: res.output.push_back(cell() & 1); break;
            case kHalt:
                res.status = RunStatus::Halted;
                run.halted_by_opcode = true;
                return run;
            case kOpen:
                if (cell() == 0) {
                    const size_t target = jump[ip];
                    ip = target == ops.size() ? target : target + 1;
                    continue;
                }
                break;
            case kClose:
                if (cell() != 0) {
                    ip = jump[ip] + 1;
                    continue;
                }
                break;
        }
        ++ip;
    }
    res.status = RunStatus::Halted;  // ran past the last opcode
    return run;
}

// Cache of per-target results for a multi-target enumeration.
struct TargetResult {
    double m_hat = 0.0;
    std::optional<size_t> k_hat;
    std::optional<size_t> km_hat;
    std::optional<double> kt_hat;
    std::vector<Program> minimal;  // only filled when collecting
};

struct Search {
    std::vector<std::vector<uint8_t>> targets;
    size_t max_ops = 0;
    size_t max_steps = 0;
    bool collect = false;
};

void merge_min(std::optional<size_t>& into, const std::optional<size_t>& v) {
    if (v && (!into || *v < *into)) into = v;
}
void merge_min(std::optional<double>& into, const std::optional<double>& v) {
    if (v && (!into || *v < *into)) into = v;
}

bool starts_with(const std::vector<uint8_t>& o, const std::vector<uint8_t>& t) {
    return o.size() >= t.size() && std::equal(t.begin(), t.end(), o.begin());
}

Program to_program(const std::vector<uint8_t>& ops) {
    Program p;
    p.bits.reserve(ops.size() * 3);
    for (uint8_t op : ops) {
        p.bits.push_back((op >> 2) & 1);
        p.bits.push_back((op >> 1) & 1);
        p.bits.push_back(op & 1);
    }
    return p;
}

// Evaluates one node. Returns true when children should be explored.
// parent_out_len is the output length of the parent node (its output is
// always a prefix of this node's output).
bool visit(const Search& s, const std::vector<uint8_t>& ops, size_t parent_out_len,
           std::vector<TargetResult>& acc, size_t& out_len) {
    const MachineRun run = execute(ops, s.max_steps, nullptr);
    if (run.result.status == RunStatus::Invalid) return false;  // extensions stay invalid
    const auto& o = run.result.output;
    out_len = o.size();

    const size_t len_bits = ops.size() * 3;
    bool any_proper_prefix = false;
    for (size_t i = 0; i < s.targets.size(); ++i) {
        const auto& t = s.targets[i];
        if (starts_with(o, t)) {
            if (t.size() > parent_out_len || ops.empty()) {
                // first node on this chain whose output covers t: minimal
                acc[i].m_hat += std::ldexp(1.0, -static_cast<int>(len_bits));
                merge_min(acc[i].km_hat, len_bits);
                if (s.collect) acc[i].minimal.push_back(to_program(ops));
            }
            if (run.result.status == RunStatus::Halted && o.size() == t.size()) {
                merge_min(acc[i].k_hat, len_bits);
                const double logt =
                    run.result.steps <= 1 ? 0.0 : std::log2(static_cast<double>(run.result.steps));
                merge_min(acc[i].kt_hat, static_cast<double>(len_bits) + logt);
            }
        } else if (o.size() < t.size() && starts_with(t, o)) {
            any_proper_prefix = true;
        }
    }
    return any_proper_prefix && !run.halted_by_opcode &&
           run.result.status == RunStatus::Halted && ops.size() < s.max_ops;
}

void dfs(const Search& s, std::vector<uint8_t>& ops, size_t parent_out_len,
         std::vector<TargetResult>& acc) {
    size_t out_len = 0;
    if (!visit(s, ops, parent_out_len, acc, out_len)) return;
    ops.push_back(0);
    for (uint8_t op = 0; op < 8; ++op) {
        ops.back() = op;
        dfs(s, ops, out_len, acc);
    }
    ops.pop_back();
}

std::vector<TargetResult> enumerate(const Search& s, bool parallel) {
    std::vector<TargetResult> acc(s.targets.size());
    std::vector<uint8_t> ops;
    size_t root_out_len = 0;
    // Root: the empty program. parent_out_len is treated as "no parent";
    // visit() handles that via ops.empty().
    if (!visit(s, ops, 0, acc, root_out_len)) return acc;
    if (s.max_ops == 0) return acc;

    if (!parallel || s.max_ops < 3) {
        for (uint8_t op = 0; op < 8; ++op) {
            ops.assign(1, op);
            dfs(s, ops, root_out_len, acc);
        }
        return acc;
    }

    // Depth-1 nodes serially, then their 64 children in parallel; the merge
    // order is fixed by branch index, and m_hat increments are exact dyadics,
    // so the result is bitwise schedule independent.
    std::vector<std::pair<std::vector<uint8_t>, size_t>> seeds;  // (ops, parent_out_len)
    for (uint8_t op = 0; op < 8; ++op) {
        ops.assign(1, op);
        size_t out_len = 0;
        if (visit(s, ops, root_out_len, acc, out_len))
            for (uint8_t op2 = 0; op2 < 8; ++op2)
                seeds.push_back({{op, op2}, out_len});
    }
    std::vector<std::vector<TargetResult>> partial(seeds.size(),
                                                   std::vector<TargetResult>(s.targets.size()));
#pragma omp parallel for schedule(dynamic)
    for (size_t b = 0; b < seeds.size(); ++b) {
        auto branch_ops = seeds[b].first;
        dfs(s, branch_ops, seeds[b].second, partial[b]);
    }
    for (size_t b = 0; b < seeds.size(); ++b)
        for (size_t i = 0; i < acc.size(); ++i) {
            acc[i].m_hat += partial[b][i].m_hat;
            merge_min(acc[i].k_hat, partial[b][i].k_hat);
            merge_min(acc[i].km_hat, partial[b][i].km_hat);
            merge_min(acc[i].kt_hat, partial[b][i].kt_hat);
            if (s.collect)
                acc[i].minimal.insert(acc[i].minimal.end(), partial[b][i].minimal.begin(),
                                      partial[b][i].minimal.end());
        }
    return acc;
}

Search make_search(const std::vector<std::vector<uint8_t>>& targets, const MachineBudget& b,
                   bool collect) {
    Search s;
    s.targets = targets;
    s.max_ops = b.max_length / 3;
    s.max_steps = b.max_steps;
    s.collect = collect;
    if (b.max_steps < 1) throw UsageError("MachineBudget: T must be >= 1");
    return s;
}

std::vector<uint8_t> require_binary(const Sequence& x) {
    if (!(x.alphabet() == Alphabet::binary()))
        throw UsageError("algoprob: binary sequences only");
    return x.items();
}

}  // namespace

RunResult run_opcodes(const std::vector<uint8_t>& ops, size_t max_steps, const TraceFn& trace) {
    return execute(ops, max_steps, trace).result;
}

RunResult run_program(const Program& p, size_t max_steps, const TraceFn& trace) {
    return run_opcodes(parse_opcodes(p.bits), max_steps, trace);
}

std::vector<Program> enumerate_minimal(const Sequence& x, const MachineBudget& b) {
    const auto s = make_search({require_binary(x)}, b, true);
    auto res = enumerate(s, false);
    return std::move(res[0].minimal);
}

Approximation approximate(const Sequence& x, const MachineBudget& b, bool parallel) {
    const auto s = make_search({require_binary(x)}, b, false);
    auto res = enumerate(s, parallel);
    return {res[0].m_hat, res[0].k_hat, res[0].km_hat, res[0].kt_hat};
}

double m_hat(const Sequence& x, const MachineBudget& b) { return approximate(x, b).m_hat; }
std::optional<size_t> k_hat(const Sequence& x, const MachineBudget& b) {
    return approximate(x, b).k_hat;
}
std::optional<size_t> km_hat(const Sequence& x, const MachineBudget& b) {
    return approximate(x, b).km_hat;
}
std::optional<double> kt_hat(const Sequence& x, const MachineBudget& b) {
    return approximate(x, b).kt_hat;
}

std::string binary_expansion(uint64_t n) {
    if (n == 0) return "0";
    std::string s;
    for (; n > 0; n >>= 1) s += static_cast<char>('0' + (n & 1));
    std::reverse(s.begin(), s.end());
    return s;
}

SpikeReport instantaneous_report(size_t n_max, const MachineBudget& b, bool parallel) {
    // One pass for every 1^n and 1^n 0 target, one more for the bin(n) values.
    std::vector<std::vector<uint8_t>> ones_targets;   // index n: 1^n
    std::vector<std::vector<uint8_t>> mixed_targets;  // index n: 1^n 0
    for (size_t n = 0; n <= n_max; ++n)
        ones_targets.push_back(std::vector<uint8_t>(n, 1));
    for (size_t n = 0; n < n_max; ++n) {
        auto t = std::vector<uint8_t>(n, 1);
        t.push_back(0);
        mixed_targets.push_back(std::move(t));
    }
    std::vector<std::vector<uint8_t>> all = ones_targets;
    all.insert(all.end(), mixed_targets.begin(), mixed_targets.end());
    auto res = enumerate(make_search(all, b, false), parallel);

    std::vector<std::vector<uint8_t>> bin_targets;
    for (size_t n = 0; n < n_max; ++n)
        bin_targets.push_back(Sequence::from_bits(binary_expansion(n)).items());
    auto bin_res = enumerate(make_search(bin_targets, b, false), parallel);

    SpikeReport report;
    for (size_t n = 0; n < n_max; ++n) {
        SpikeRow row;
        row.n = n;
        const double denom = res[n].m_hat;                  // m_hat(1^n)
        const double numer = res[n_max + 1 + n].m_hat;      // m_hat(1^n 0)
        if (denom > 0) {
            row.available = true;
            row.conditional = numer / denom;
            report.conditional_sum += row.conditional;
        }
        row.k_of_n = bin_res[n].k_hat;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace induct
