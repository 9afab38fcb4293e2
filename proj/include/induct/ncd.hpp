#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "induct/core.hpp"

namespace induct {

using Bytes = std::vector<uint8_t>;

// Compressed-length contract used as the complexity approximation.
class Compressor {
public:
    virtual ~Compressor() = default;
    virtual double len_bits(const Bytes& x) const = 0;
    virtual std::string name() const = 0;
};

// LZ78 with phrase cost ceil(log2 i) + 8 bits (dictionary index + literal).
class Lz78Compressor final : public Compressor {
public:
    double len_bits(const Bytes& x) const override;
    std::string name() const override { return "lz78"; }

    // Number of LZ78 phrases in x.
    static size_t phrase_count(const Bytes& x);
};

// CTW codelength backend. With bytes_are_bits every byte must be 0 or 1 and
// is fed as a single bit, matching ctw_codelength exactly; otherwise bytes
// are unpacked to bits MSB first.
class CtwCompressor final : public Compressor {
public:
    explicit CtwCompressor(size_t depth, bool bytes_are_bits = true)
        : depth_(depth), bytes_are_bits_(bytes_are_bits) {}
    double len_bits(const Bytes& x) const override;
    std::string name() const override { return "ctw"; }

private:
    size_t depth_;
    bool bytes_are_bits_;
};

// Conditional complexity approximation K(x|y) ~ max(len(y||x) - len(y), 0).
double cond_len(const Bytes& x, const Bytes& y, const Compressor& c);

// Max-normalized similarity distance: max{K(x|y),K(y|x)} / max{K(x),K(y)}.
// Not clamped; values slightly above 1 are legal.
double ncd(const Bytes& x, const Bytes& y, const Compressor& c);

struct SimilarityMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> values;  // symmetric
};

// All-pairs similarity; each item compressed once, pairs parallelizable.
SimilarityMatrix similarity_matrix(const std::vector<std::pair<std::string, Bytes>>& items,
                                   const Compressor& c, bool parallel = true);

// Binary merge tree; branch = length of the edge to the parent.
struct Dendrogram {
    struct Node {
        std::string label;  // leaves only
        double branch = 0.0;
        double height = 0.0;  // merge height; 0 at leaves
        std::unique_ptr<Node> left, right;
        std::string min_label;  // lexicographically smallest leaf below
        bool is_leaf() const { return !left; }
    };
    std::unique_ptr<Node> root;
};

// Average-linkage agglomerative clustering; ties broken by the
// lexicographically smallest label pair.
Dendrogram cluster(const SimilarityMatrix& m);

// Newick text with children ordered by smallest leaf label.
std::string newick(const Dendrogram& d);

// Parses a Newick string produced by newick(); round trip is identity.
Dendrogram parse_newick(const std::string& text);

// Leaf labels of the two children of the root, for split checks.
std::pair<std::vector<std::string>, std::vector<std::string>> root_split(const Dendrogram& d);

std::string matrix_csv(const SimilarityMatrix& m);

}  // namespace induct
