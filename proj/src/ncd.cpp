#include "induct/ncd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "induct/ctw.hpp"

namespace induct {

size_t Lz78Compressor::phrase_count(const Bytes& x) {
    // trie as (node, byte) -> node; node 0 is the root
    std::unordered_map<uint64_t, uint32_t> trie;
    uint32_t next_node = 1;
    uint32_t cur = 0;
    size_t phrases = 0;
    for (uint8_t b : x) {
        const uint64_t key = (static_cast<uint64_t>(cur) << 8) | b;
        auto it = trie.find(key);
        if (it != trie.end()) {
            cur = it->second;
        } else {
            ++phrases;
            trie.emplace(key, next_node++);
            cur = 0;
        }
    }
    if (cur != 0) ++phrases;  // trailing incomplete phrase
    return phrases;
}

double Lz78Compressor::len_bits(const Bytes& x) const {
    const size_t t = phrase_count(x);
    double bits = 0;
    for (size_t i = 1; i <= t; ++i)
        bits += std::ceil(std::log2(static_cast<double>(i))) + 8.0;
    return bits;
}

double CtwCompressor::len_bits(const Bytes& x) const {
    ContextTree tree(depth_);
    double log_e = 0.0;
    if (bytes_are_bits_) {
        for (uint8_t b : x) {
            if (b > 1) throw UsageError("CtwCompressor: byte stream is not bit valued");
            log_e += tree.update(b).value();
        }
    } else {
        for (uint8_t b : x)
            for (int k = 7; k >= 0; --k) log_e += tree.update((b >> k) & 1).value();
    }
    return -log_e / std::log(2.0);
}

double cond_len(const Bytes& x, const Bytes& y, const Compressor& c) {
    Bytes yx = y;
    yx.insert(yx.end(), x.begin(), x.end());
    return std::max(c.len_bits(yx) - c.len_bits(y), 0.0);
}

double ncd(const Bytes& x, const Bytes& y, const Compressor& c) {
    if (x.empty() && y.empty()) throw UsageError("ncd: both inputs empty");
    const double denom = std::max(c.len_bits(x), c.len_bits(y));
    return std::max(cond_len(x, y, c), cond_len(y, x, c)) / denom;
}

SimilarityMatrix similarity_matrix(const std::vector<std::pair<std::string, Bytes>>& items,
                                   const Compressor& c, bool parallel) {
    if (items.size() < 2) throw UsageError("similarity_matrix: need at least 2 items");
    for (size_t i = 0; i < items.size(); ++i)
        for (size_t j = i + 1; j < items.size(); ++j)
            if (items[i].first == items[j].first)
                throw UsageError("similarity_matrix: duplicate label " + items[i].first);

    const size_t n = items.size();
    std::vector<double> self_len(n);
    for (size_t i = 0; i < n; ++i) self_len[i] = c.len_bits(items[i].second);

    SimilarityMatrix m;
    for (const auto& [label, bytes] : items) m.labels.push_back(label);
    m.values.assign(n, std::vector<double>(n, 0.0));

    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) pairs.emplace_back(i, j);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (size_t p = 0; p < pairs.size(); ++p) {
        const auto [i, j] = pairs[p];
        const double cxy = cond_len(items[i].second, items[j].second, c);
        const double cyx = cond_len(items[j].second, items[i].second, c);
        const double den = std::max(self_len[i], self_len[j]);
        // diagonal of two empty items: 0 by convention
        const double v = den == 0 ? 0.0 : std::max(cxy, cyx) / den;
        m.values[i][j] = v;
        m.values[j][i] = v;
    }
    return m;
}

Dendrogram cluster(const SimilarityMatrix& m) {
    const size_t n = m.labels.size();
    if (n < 2) throw UsageError("cluster: need at least 2 items");

    struct Cluster {
        std::unique_ptr<Dendrogram::Node> node;
        std::vector<size_t> members;
    };
    std::vector<Cluster> active;
    for (size_t i = 0; i < n; ++i) {
        auto node = std::make_unique<Dendrogram::Node>();
        node->label = m.labels[i];
        node->min_label = m.labels[i];
        active.push_back({std::move(node), {i}});
    }

    auto avg_dist = [&](const Cluster& a, const Cluster& b) {
        double s = 0;
        for (size_t i : a.members)
            for (size_t j : b.members) s += m.values[i][j];
        return s / static_cast<double>(a.members.size() * b.members.size());
    };

    while (active.size() > 1) {
        size_t bi = 0, bj = 1;
        double best = avg_dist(active[0], active[1]);
        auto tie_key = [&](size_t i, size_t j) {
            return std::minmax(active[i].node->min_label, active[j].node->min_label);
        };
        for (size_t i = 0; i < active.size(); ++i)
            for (size_t j = i + 1; j < active.size(); ++j) {
                const double d = avg_dist(active[i], active[j]);
                if (d < best || (d == best && tie_key(i, j) < tie_key(bi, bj))) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }

        auto merged = std::make_unique<Dendrogram::Node>();
        merged->height = best;
        auto& a = active[bi];
        auto& b = active[bj];
        // child order: smaller min label first
        if (b.node->min_label < a.node->min_label) std::swap(a.node, b.node);
        a.node->branch = best - a.node->height;
        b.node->branch = best - b.node->height;
        merged->min_label = a.node->min_label;
        merged->left = std::move(a.node);
        merged->right = std::move(b.node);

        a.node = std::move(merged);
        a.members.insert(a.members.end(), b.members.begin(), b.members.end());
        active.erase(active.begin() + static_cast<long>(bj));
    }

    Dendrogram d;
    d.root = std::move(active.front().node);
    return d;
}

namespace {

std::string format_branch(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_newick(const Dendrogram::Node& node, std::string& out) {
    if (node.is_leaf()) {
        out += node.label;
        return;
    }
    out += '(';
    write_newick(*node.left, out);
    out += ':';
    out += format_branch(node.left->branch);
    out += ',';
    write_newick(*node.right, out);
    out += ':';
    out += format_branch(node.right->branch);
    out += ')';
}

struct Parser {
    const std::string& s;
    size_t pos = 0;

    char peek() const { return pos < s.size() ? s[pos] : '\0'; }
    void expect(char c) {
        if (peek() != c) throw UsageError(std::string("newick: expected '") + c + "'");
        ++pos;
    }

    std::unique_ptr<Dendrogram::Node> node() {
        auto out = std::make_unique<Dendrogram::Node>();
        if (peek() == '(') {
            ++pos;
            out->left = node();
            out->left->branch = branch();
            expect(',');
            out->right = node();
            out->right->branch = branch();
            expect(')');
            out->height = out->left->height + out->left->branch;
            out->min_label = std::min(out->left->min_label, out->right->min_label);
        } else {
            std::string label;
            while (pos < s.size() && s[pos] != ':' && s[pos] != ',' && s[pos] != ')' &&
                   s[pos] != ';')
                label += s[pos++];
            if (label.empty()) throw UsageError("newick: empty label");
            out->label = label;
            out->min_label = label;
        }
        return out;
    }

    double branch() {
        expect(':');
        size_t consumed = 0;
        const double v = std::stod(s.substr(pos), &consumed);
        pos += consumed;
        return v;
    }
};

void collect_leaves(const Dendrogram::Node& n, std::vector<std::string>& out) {
    if (n.is_leaf()) {
        out.push_back(n.label);
        return;
    }
    collect_leaves(*n.left, out);
    collect_leaves(*n.right, out);
}

}  // namespace

std::string newick(const Dendrogram& d) {
    if (!d.root) throw UsageError("newick: empty dendrogram");
    std::string out;
    write_newick(*d.root, out);
    out += ';';
    return out;
}

Dendrogram parse_newick(const std::string& text) {
    Parser p{text};
    Dendrogram d;
    d.root = p.node();
    p.expect(';');
    return d;
}

std::pair<std::vector<std::string>, std::vector<std::string>> root_split(const Dendrogram& d) {
    if (!d.root || d.root->is_leaf()) throw UsageError("root_split: no merge at the root");
    std::pair<std::vector<std::string>, std::vector<std::string>> out;
    collect_leaves(*d.root->left, out.first);
    collect_leaves(*d.root->right, out.second);
    return out;
}

std::string matrix_csv(const SimilarityMatrix& m) {
    std::ostringstream os;
    os << "label";
    for (const auto& l : m.labels) os << ',' << l;
    os << '\n';
    for (size_t i = 0; i < m.labels.size(); ++i) {
        os << m.labels[i];
        for (size_t j = 0; j < m.labels.size(); ++j) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.12g", m.values[i][j]);
            os << ',' << buf;
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace induct
