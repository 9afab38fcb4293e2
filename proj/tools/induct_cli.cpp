// Command-line front end: every experiment as a reproducible subcommand with
// CSV or JSON output. Exit codes: 0 ok, 1 I/O, 2 usage/domain, 3 budget.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>

#include "induct/algoprob.hpp"
#include "induct/confirmation.hpp"
#include "induct/ctw.hpp"
#include "induct/mixture.hpp"
#include "induct/ncd.hpp"

using namespace induct;
using nlohmann::json;

namespace {

struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> derived;
};

std::string fmt_decimal(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string fmt_rational(const Rational& r) {
    std::ostringstream os;
    os << numerator(r) << "/" << denominator(r);
    return os.str();
}

void emit(const Report& r, const std::string& format) {
    if (format == "json") {
        json j;
        j["command"] = r.command;
        j["params"] = json::object();
        for (const auto& [k, v] : r.params) j["params"][k] = v;
        j["rows"] = json::array();
        for (const auto& row : r.rows) {
            json obj = json::object();
            for (size_t i = 0; i < r.columns.size(); ++i) obj[r.columns[i]] = row[i];
            j["rows"].push_back(obj);
        }
        j["derived_values"] = json::object();
        for (const auto& [k, v] : r.derived) j["derived_values"][k] = v;
        std::cout << j.dump(2) << "\n";
        return;
    }
    if (!r.columns.empty()) {
        for (size_t i = 0; i < r.columns.size(); ++i)
            std::cout << (i ? "," : "") << r.columns[i];
        std::cout << "\n";
        for (const auto& row : r.rows) {
            for (size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
            std::cout << "\n";
        }
    }
    for (const auto& [k, v] : r.derived) std::cout << "# " << k << " = " << v << "\n";
}

Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        const BigInt num(s.substr(0, slash));
        const BigInt den(s.substr(slash + 1));
        if (den == 0) throw UsageError("zero denominator: " + s);
        return Rational(num, den);
    }
    const auto dot = s.find('.');
    if (dot != std::string::npos) {
        const std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        BigInt den = 1;
        for (size_t i = dot + 1; i < s.size(); ++i) den *= 10;
        return Rational(BigInt(digits), den);
    }
    return Rational(BigInt(s));
}

// Budget profile from the environment: desk (default) or extended.
MachineBudget default_budget() {
    const char* profile = std::getenv("INDUCT_PROFILE");
    if (profile && std::string(profile) == "extended") return {24, 4000};
    return {21, 1000};
}

struct ClassSpec {
    std::vector<ModelClass::Member> members;
};

// Line format, rationals only:
//   bernoulli 7/10 w=1/3
//   det 010101 w=1/3       (bits repeated forever)
//   dirichlet 1 w=1/3
ClassSpec parse_class_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open class file: " + path);
    ClassSpec spec;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::string kind, arg, wtok;
        is >> kind >> arg >> wtok;
        if (kind.empty()) continue;
        if (wtok.rfind("w=", 0) != 0) throw UsageError("class file: missing w= on line: " + line);
        const Rational w = parse_rational(wtok.substr(2));
        EnvPtr env;
        if (kind == "bernoulli") {
            env = std::make_shared<BernoulliEnv>(parse_rational(arg));
        } else if (kind == "det") {
            env = std::make_shared<DeterministicEnv>(Sequence(Alphabet::binary()),
                                                     Sequence::from_bits(arg));
        } else if (kind == "dirichlet") {
            env = std::make_shared<DirichletPredictor>(Alphabet::binary(), parse_rational(arg));
        } else {
            throw UsageError("class file: unknown environment kind: " + kind);
        }
        spec.members.push_back({env, w});
    }
    if (spec.members.empty()) throw UsageError("class file: no environments");
    return spec;
}

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open: " + path);
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

Bytes seeded_bytes(uint64_t seed, size_t n) {
    std::mt19937_64 rng(seed);
    Bytes out(n);
    for (auto& b : out) b = static_cast<uint8_t>(rng() & 0xff);
    return out;
}

int cmd_succession(const std::string& format, int64_t s, int64_t f, int64_t n,
                   const std::string& k, bool pointmass) {
    if (s < 0 || f < 0) throw UsageError("succession: counts must be nonnegative");
    Report r;
    r.command = "succession";
    r.params = {{"s", std::to_string(s)}, {"f", std::to_string(f)}};
    r.columns = {"quantity", "exact", "decimal"};
    auto add = [&](const std::string& q, const Rational& v) {
        r.rows.push_back({q, fmt_rational(v), fmt_decimal(to_double(v))});
    };
    if (n >= 0) {
        r.params.emplace_back("n", std::to_string(n));
        r.params.emplace_back("k", k);
        std::optional<uint64_t> kv;
        if (k != "inf") kv = static_cast<uint64_t>(std::stoull(k));
        if (pointmass) {
            add("pointmass_confirmation", pointmass_confirmation(static_cast<uint64_t>(n), kv));
        } else {
            if (!kv) throw UsageError("succession: uniform confirmation needs finite k");
            add("uniform_confirmation", uniform_confirmation(static_cast<uint64_t>(n), *kv));
        }
    } else {
        const CountPair c{static_cast<uint64_t>(s), static_cast<uint64_t>(f)};
        add("rule_of_succession", rule_of_succession(c));
        add("laplace_marginal", laplace_marginal(c));
        add("pointmass_marginal", pointmass_marginal(c));
    }
    emit(r, format);
    return 0;
}

int cmd_maher(const std::string& format, uint64_t N, uint64_t n, const std::string& lambda,
              const std::string& gamma) {
    MaherParams p{parse_rational(lambda), parse_rational(gamma), N, n};
    if (p.n > p.N) throw UsageError("maher: n exceeds N");
    Report r;
    r.command = "maher";
    r.params = {{"N", std::to_string(N)},
                {"n", std::to_string(n)},
                {"lambda", lambda},
                {"gamma", gamma}};
    r.columns = {"quantity", "exact", "decimal"};
    const Rational joint_N = maher_joint(N, p);
    const Rational joint_n = maher_joint(n, p);
    const Rational confirm = maher_confirm(p);
    r.rows.push_back({"joint_N", fmt_rational(joint_N), fmt_decimal(to_double(joint_N))});
    r.rows.push_back({"joint_n", fmt_rational(joint_n), fmt_decimal(to_double(joint_n))});
    r.rows.push_back({"confirmation", fmt_rational(confirm), fmt_decimal(to_double(confirm))});
    emit(r, format);
    return 0;
}

int cmd_ravens(const std::string& format, uint64_t dmax, uint64_t n_max, int64_t obs_nbr_at) {
    if (dmax > 40) throw BudgetError("ravens: Dmax must be <= 40");
    const RavensGrid grid(dmax);

    Report r;
    r.command = "ravens";
    r.params = {{"dmax", std::to_string(dmax)}, {"n_max", std::to_string(n_max)}};
    r.columns = {"n", "p_hb", "delta_br", "delta_nbnr"};

    RavensRun run(grid);
    for (uint64_t n = 0; n <= n_max; ++n) {
        const Rational p_hb = run.posterior();
        const Rational delta_br = run.posterior_after(0) - p_hb;
        const Rational delta_nbnr = run.posterior_after(3) - p_hb;
        r.rows.push_back({std::to_string(n), fmt_decimal(to_double(p_hb)),
                          fmt_decimal(to_double(delta_br)), fmt_decimal(to_double(delta_nbnr))});
        // advance with the scheduled observation
        run.observe(obs_nbr_at >= 0 && n == static_cast<uint64_t>(obs_nbr_at) ? 1 : 0);
    }
    emit(r, format);
    return 0;
}

int cmd_bounds(const std::string& format, const std::string& class_file, size_t horizon,
               size_t mu_index, size_t future_block, size_t future_periods, uint64_t seed) {
    auto spec = parse_class_file(class_file);
    if (mu_index >= spec.members.size())
        throw UsageError("bounds: --mu index out of range; the true environment must be in the class");
    ModelClass cls(spec.members);
    const EnvPtr mu = spec.members[mu_index].env;

    Report r;
    r.command = "bounds";
    r.params = {{"class", class_file},
                {"horizon", std::to_string(horizon)},
                {"mu", std::to_string(mu_index)}};
    r.columns = {"t", "term", "cumulative", "bound"};

    const bool deterministic = dynamic_cast<const DeterministicEnv*>(mu.get()) != nullptr;
    BoundedSum result;
    if (deterministic) {
        const auto det = deterministic_error_sum(cls, mu, horizon);
        result = det;
        r.derived.emplace_back("final_predictive", fmt_decimal(det.final_predictive));
    } else {
        result = expected_hellinger_sum(cls, mu, horizon);
    }
    for (const auto& row : result.rows)
        r.rows.push_back({fmt_decimal(row[0]), fmt_decimal(row[1]), fmt_decimal(row[2]),
                          fmt_decimal(row[3])});
    r.derived.emplace_back("sum", fmt_decimal(result.sum));
    r.derived.emplace_back("bound_ln_w_inv", fmt_decimal(result.bound));

    if (future_block > 0) {
        // Report-only estimate of the future bound on a repeated-block source:
        // conditional complexity of the remaining stream given one block.
        const Bytes block = seeded_bytes(seed, future_block);
        Bytes rest;
        for (size_t i = 0; i < future_periods; ++i)
            rest.insert(rest.end(), block.begin(), block.end());
        const Lz78Compressor lz;
        r.derived.emplace_back("future_block_len_bits", fmt_decimal(lz.len_bits(block)));
        r.derived.emplace_back("future_cond_len_bits", fmt_decimal(cond_len(rest, block, lz)));
        r.derived.emplace_back("future_rest_len_bits", fmt_decimal(lz.len_bits(rest)));
    }
    emit(r, format);
    return 0;
}

int cmd_enumerate(const std::string& format, const std::string& x_bits, int64_t L, int64_t T,
                  bool spikes, size_t nmax, const std::string& run_bits, bool trace, bool serial) {
    MachineBudget budget = default_budget();
    if (L >= 0) budget.max_length = static_cast<size_t>(L);
    if (T >= 0) budget.max_steps = static_cast<size_t>(T);
    if (budget.max_length > 30) throw BudgetError("enumerate: L must be <= 30");

    Report r;
    r.command = "enumerate";
    r.params = {{"L", std::to_string(budget.max_length)},
                {"T", std::to_string(budget.max_steps)}};

    if (!run_bits.empty()) {
        const Program p = Program::from_bits(run_bits);
        TraceFn tracer = nullptr;
        if (trace)
            tracer = [](size_t step, size_t ip, long pos, uint8_t cell,
                        const std::vector<uint8_t>& out) {
                std::string bits;
                for (uint8_t b : out) bits += static_cast<char>('0' + b);
                std::fprintf(stderr, "step=%zu ip=%zu head=%ld cell=%u out=%s\n", step, ip, pos,
                             cell, bits.c_str());
            };
        const RunResult res = run_program(p, budget.max_steps, tracer);
        r.params.emplace_back("run", run_bits);
        r.columns = {"status", "steps", "output"};
        std::string out;
        for (uint8_t b : res.output) out += static_cast<char>('0' + b);
        const char* status = res.status == RunStatus::Halted ? "halted"
                             : res.status == RunStatus::Timeout ? "timeout"
                                                                : "invalid";
        r.rows.push_back({status, std::to_string(res.steps), out});
        emit(r, format);
        return 0;
    }

    if (spikes) {
        r.params.emplace_back("nmax", std::to_string(nmax));
        r.columns = {"n", "conditional", "two_pow_minus_k"};
        const SpikeReport report = instantaneous_report(nmax, budget, !serial);
        for (const auto& row : report.rows) {
            std::string cond = row.available ? fmt_decimal(row.conditional) : "unavailable";
            std::string pk = row.k_of_n ? fmt_decimal(std::ldexp(1.0, -static_cast<int>(*row.k_of_n)))
                                        : "unavailable";
            r.rows.push_back({std::to_string(row.n), cond, pk});
        }
        r.derived.emplace_back("conditional_sum", fmt_decimal(report.conditional_sum));
        emit(r, format);
        return 0;
    }

    const Sequence x = Sequence::from_bits(x_bits);
    r.params.emplace_back("x", x_bits);
    const Approximation a = approximate(x, budget, !serial);
    r.columns = {"quantity", "value"};
    r.rows.push_back({"m_hat", fmt_decimal(a.m_hat)});
    r.rows.push_back({"k_hat", a.k_hat ? std::to_string(*a.k_hat) : "none"});
    r.rows.push_back({"km_hat", a.km_hat ? std::to_string(*a.km_hat) : "none"});
    r.rows.push_back({"kt_hat", a.kt_hat ? fmt_decimal(*a.kt_hat) : "none"});
    emit(r, format);
    return 0;
}

// Bit stream from a file: by default each byte is unpacked MSB first; in bits
// mode each byte must be 0/1 ('0'/'1' text also accepted).
std::vector<uint8_t> file_bits(const std::string& path, bool bit_per_byte) {
    const Bytes data = read_file(path);
    std::vector<uint8_t> bits;
    if (bit_per_byte) {
        for (uint8_t b : data) {
            if (b == '0' || b == '1') b = static_cast<uint8_t>(b - '0');
            if (b > 1) throw UsageError("ctw: bits mode but byte is not 0/1");
            bits.push_back(b);
        }
    } else {
        for (uint8_t b : data)
            for (int k = 7; k >= 0; --k) bits.push_back((b >> k) & 1);
    }
    return bits;
}

int cmd_ctw(const std::string& format, const std::string& file, size_t depth, bool bit_mode,
            bool per_symbol) {
    if (depth > 48) throw BudgetError("ctw: depth must be <= 48");
    const auto bits = file_bits(file, bit_mode);

    Report r;
    r.command = "ctw";
    r.params = {{"file", file}, {"depth", std::to_string(depth)}};
    ContextTree tree(depth);
    double total_bits = 0;
    if (per_symbol) r.columns = {"t", "bit", "log_loss_bits"};
    for (size_t t = 0; t < bits.size(); ++t) {
        const double log_loss = -tree.update(bits[t]).value() / std::log(2.0);
        total_bits += log_loss;
        if (per_symbol)
            r.rows.push_back({std::to_string(t + 1), std::to_string(int(bits[t])),
                              fmt_decimal(log_loss)});
    }
    r.derived.emplace_back("n_bits", std::to_string(bits.size()));
    r.derived.emplace_back("codelength_bits", fmt_decimal(total_bits));
    emit(r, format);
    return 0;
}

int cmd_ncd(const std::string& format, const std::vector<std::string>& files,
            const std::string& backend, size_t depth, bool tree, bool bit_mode) {
    if (files.size() < 2) throw UsageError("ncd: need at least 2 files");
    std::unique_ptr<Compressor> comp;
    if (backend == "lz78")
        comp = std::make_unique<Lz78Compressor>();
    else if (backend == "ctw")
        comp = std::make_unique<CtwCompressor>(depth, bit_mode);
    else
        throw UsageError("ncd: unknown backend " + backend);

    std::vector<std::pair<std::string, Bytes>> items;
    std::map<std::string, int> seen;
    for (const auto& f : files) {
        auto base = f.substr(f.find_last_of('/') + 1);
        const int k = ++seen[base];
        if (k > 1) base += "#" + std::to_string(k);  // same file may repeat
        Bytes data = read_file(f);
        if (backend == "ctw" && bit_mode)
            for (auto& b : data)
                if (b == '0' || b == '1') b = static_cast<uint8_t>(b - '0');
        items.emplace_back(base, std::move(data));
    }
    const SimilarityMatrix m = similarity_matrix(items, *comp);

    Report r;
    r.command = "ncd";
    r.params = {{"backend", backend}};
    if (tree) {
        r.derived.emplace_back("newick", newick(cluster(m)));
        emit(r, format);
        return 0;
    }
    if (format == "json") {
        r.columns = m.labels;
        r.columns.insert(r.columns.begin(), "label");
        for (size_t i = 0; i < m.labels.size(); ++i) {
            std::vector<std::string> row{m.labels[i]};
            for (double v : m.values[i]) row.push_back(fmt_decimal(v));
            r.rows.push_back(row);
        }
        emit(r, format);
    } else {
        std::cout << matrix_csv(m);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Universal-induction desk experiments"};
    app.require_subcommand(1);
    std::string format = "csv";
    app.add_option("--format", format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    uint64_t seed = 1;
    app.add_option("--seed", seed, "Seed for generated corpora");

    // succession
    auto* succ = app.add_subcommand("succession", "Rule of succession and confirmation values");
    int64_t s = 0, f = 0, n = -1;
    std::string k = "inf";
    bool pointmass = false;
    succ->add_option("--s", s);
    succ->add_option("--f", f);
    succ->add_option("--n", n);
    succ->add_option("--k", k);
    succ->add_flag("--pointmass", pointmass);

    // maher
    auto* maher = app.add_subcommand("maher", "Maher's confirmation model");
    uint64_t mN = 0, mn = 0;
    std::string lambda = "2", gamma = "1/2";
    maher->add_option("--N", mN)->required();
    maher->add_option("--n", mn)->required();
    maher->add_option("--lambda", lambda);
    maher->add_option("--gamma", gamma);

    // ravens
    auto* ravens = app.add_subcommand("ravens", "Black-ravens posterior on the simplex grid");
    uint64_t dmax = 20, rn_max = 200;
    int64_t obs_nbr_at = -1;
    ravens->add_option("--dmax", dmax);
    ravens->add_option("--n-max", rn_max);
    ravens->add_option("--obs-nbr-at", obs_nbr_at, "Insert one non-black raven at this n");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Convergence-bound experiments");
    std::string class_file;
    size_t horizon = 8, mu_index = 0, future_block = 0, future_periods = 10;
    bounds->add_option("--class", class_file)->required();
    bounds->add_option("--horizon", horizon);
    bounds->add_option("--mu", mu_index, "Index of the true environment in the class file");
    bounds->add_option("--future-block", future_block,
                       "Also report a compressor-based future-bound estimate for a repeated "
                       "block of this many bytes");
    bounds->add_option("--future-periods", future_periods);

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "Program-enumeration approximations");
    std::string x_bits, run_bits;
    int64_t L = -1, T = -1;
    bool spikes = false, trace = false, serial = false;
    size_t nmax = 32;
    enumerate->add_option("--x", x_bits);
    enumerate->add_option("--L", L);
    enumerate->add_option("--T", T);
    enumerate->add_flag("--spikes", spikes);
    enumerate->add_option("--nmax", nmax);
    enumerate->add_option("--run", run_bits, "Run one program");
    enumerate->add_flag("--trace", trace, "Print a machine trace to stderr");
    enumerate->add_flag("--serial", serial, "Disable the parallel search");

    // ctw
    auto* ctw = app.add_subcommand("ctw", "Context-tree-weighting codelength");
    std::string ctw_file;
    size_t depth = 8;
    bool bit_mode = false, per_symbol = false;
    ctw->add_option("--file", ctw_file)->required();
    ctw->add_option("--depth", depth);
    ctw->add_flag("--bits", bit_mode, "Treat each input byte as one bit");
    ctw->add_flag("--per-symbol", per_symbol, "Emit per-symbol log loss rows");

    // ncd
    auto* ncd_cmd = app.add_subcommand("ncd", "Similarity matrix and clustering");
    std::vector<std::string> ncd_files;
    std::string backend = "lz78";
    size_t ncd_depth = 16;
    bool ncd_tree = false, ncd_bits = false;
    ncd_cmd->add_option("files", ncd_files)->expected(-1);
    ncd_cmd->add_option("--compressor", backend);
    ncd_cmd->add_option("--depth", ncd_depth);
    ncd_cmd->add_flag("--tree", ncd_tree, "Emit a Newick tree instead of the matrix");
    ncd_cmd->add_flag("--bits", ncd_bits, "CTW backend: bytes are bit valued");

    try {
        app.parse(argc, argv);
        if (succ->parsed()) return cmd_succession(format, s, f, n, k, pointmass);
        if (maher->parsed()) return cmd_maher(format, mN, mn, lambda, gamma);
        if (ravens->parsed()) return cmd_ravens(format, dmax, rn_max, obs_nbr_at);
        if (bounds->parsed())
            return cmd_bounds(format, class_file, horizon, mu_index, future_block, future_periods,
                              seed);
        if (enumerate->parsed())
            return cmd_enumerate(format, x_bits, L, T, spikes, nmax, run_bits, trace, serial);
        if (ctw->parsed()) return cmd_ctw(format, ctw_file, depth, bit_mode, per_symbol);
        if (ncd_cmd->parsed()) return cmd_ncd(format, ncd_files, backend, ncd_depth, ncd_tree, ncd_bits);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ConditioningError& e) {
        std::cerr << "conditioning error: " << e.what() << "\n";
        return 2;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
