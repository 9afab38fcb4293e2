#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "induct/ctw.hpp"
#include "induct/ncd.hpp"

using namespace induct;

namespace {

Bytes rand_bytes(uint64_t seed, size_t n) {
    std::mt19937_64 rng(seed);
    Bytes out(n);
    for (auto& b : out) b = uint8_t(rng() & 0xff);
    return out;
}

Bytes rand_bits(uint64_t seed, size_t n) {
    std::mt19937_64 rng(seed);
    Bytes out(n);
    for (auto& b : out) b = uint8_t(rng() & 1);
    return out;
}

// seeded 4-byte block repeated to 1 KiB: highly self-similar byte data
Bytes block_corpus(uint64_t seed) {
    const Bytes block = rand_bytes(seed, 4);
    Bytes out;
    for (int i = 0; i < 256; ++i) out.insert(out.end(), block.begin(), block.end());
    return out;
}

// seeded 16-bit pattern repeated 128 times: structured bit data for CTW
Bytes pattern_bits(uint64_t seed) {
    const Bytes pat = rand_bits(seed, 16);
    Bytes out;
    for (int i = 0; i < 128; ++i) out.insert(out.end(), pat.begin(), pat.end());
    return out;
}

}  // namespace

TEST_CASE("lz78 code length") {
    const Lz78Compressor lz;
    CHECK(lz.len_bits({}) == 0.0);
    // "aaaa": phrases a, aa, a -> (0+8) + (1+8) + (2+8) = 27
    CHECK(lz.len_bits(Bytes{'a', 'a', 'a', 'a'}) == 27.0);
    CHECK(Lz78Compressor::phrase_count(Bytes{'a', 'a', 'a', 'a'}) == 3);

    // long constant runs compress well below raw size
    const Bytes run(4096, 'a');
    CHECK(lz.len_bits(run) <= 0.6 * 8 * 4096);

    // random data does not
    const Bytes noise = rand_bytes(5, 4096);
    CHECK(lz.len_bits(noise) >= 0.9 * 8 * 4096);

    // length is monotone in prefix for these inputs
    CHECK(lz.len_bits(Bytes{'a'}) < lz.len_bits(Bytes{'a', 'b'}));
}

TEST_CASE("conditional length") {
    const Lz78Compressor lz;
    const Bytes x = rand_bytes(1, 512);
    const Bytes y = rand_bytes(2, 512);

    // empty condition gives the plain length
    CHECK(cond_len(x, {}, lz) == lz.len_bits(x));
    // conditioning is never negative
    CHECK(cond_len(x, y, lz) >= 0.0);
    // knowing an identical y makes x much cheaper than from scratch
    CHECK(cond_len(x, x, lz) < 0.75 * lz.len_bits(x));
    // an unrelated y cannot make x much cheaper: the dictionary carries
    // at most boundary savings
    CHECK(cond_len(x, y, lz) >= 0.5 * lz.len_bits(x));
}

TEST_CASE("ncd basics") {
    const Lz78Compressor lz;
    const Bytes x = rand_bytes(10, 1024);
    const Bytes y = rand_bytes(11, 1024);

    SUBCASE("symmetry is exact") {
        CHECK(ncd(x, y, lz) == ncd(y, x, lz));
    }

    SUBCASE("independent random inputs are far apart") {
        CHECK(ncd(x, y, lz) >= 0.85);
    }

    SUBCASE("self distance on compressible data stays small") {
        // the lz78 self distance has a positive floor set by phrase growth,
        // so "small" means under 0.5 on block-structured data
        CHECK(ncd(block_corpus(3), block_corpus(3), lz) <= 0.5);
    }

    SUBCASE("related beats unrelated") {
        const Bytes a = block_corpus(21);
        Bytes a2 = a;
        a2[100] ^= 0xff;  // tiny perturbation
        CHECK(ncd(a, a2, lz) < ncd(a, rand_bytes(22, a.size()), lz));
    }

    SUBCASE("both empty rejected") {
        CHECK_THROWS_AS(ncd({}, {}, lz), UsageError);
    }
}

TEST_CASE("ctw backend") {
    const CtwCompressor ctw(16);

    // matches the context-tree codelength exactly on bit data
    const Bytes bits = rand_bits(9, 300);
    std::string s;
    for (uint8_t b : bits) s.push_back(char('0' + b));
    CHECK(ctw.len_bits(bits) == doctest::Approx(ctw_codelength(Sequence::from_bits(s), 16))
                                    .epsilon(1e-12));
    CHECK_THROWS_AS(ctw.len_bits(Bytes{0, 1, 2}), UsageError);

    // byte mode unpacks MSB first: 0x80 is the bit string 10000000
    const CtwCompressor bytes_mode(4, false);
    CHECK(bytes_mode.len_bits(Bytes{0x80}) ==
          doctest::Approx(ctw_codelength(Sequence::from_bits("10000000"), 4)).epsilon(1e-12));

    SUBCASE("structured bit data has a tiny self distance") {
        CHECK(ncd(pattern_bits(4), pattern_bits(4), ctw) <= 0.1);
    }

    SUBCASE("independent random bit data is far apart") {
        CHECK(ncd(rand_bits(5, 2048), rand_bits(6, 2048), ctw) >= 0.85);
    }
}

TEST_CASE("similarity matrix") {
    const Lz78Compressor lz;
    std::vector<std::pair<std::string, Bytes>> items;
    for (int i = 0; i < 5; ++i)
        items.emplace_back("item" + std::to_string(i), rand_bytes(100 + uint64_t(i), 600));

    const SimilarityMatrix m = similarity_matrix(items, lz);
    REQUIRE(m.labels.size() == 5);
    for (size_t i = 0; i < 5; ++i)
        for (size_t j = 0; j < 5; ++j) CHECK(m.values[i][j] == m.values[j][i]);
    // diagonal holds the true self distance, not an artificial zero
    for (size_t i = 0; i < 5; ++i) CHECK(m.values[i][i] > 0.0);

    // parallel and serial agree bitwise
    const SimilarityMatrix ser = similarity_matrix(items, lz, false);
    for (size_t i = 0; i < 5; ++i)
        for (size_t j = 0; j < 5; ++j) CHECK(m.values[i][j] == ser.values[i][j]);

    items[3].first = "item0";
    CHECK_THROWS_AS(similarity_matrix(items, lz), UsageError);
    CHECK_THROWS_AS(similarity_matrix({items[0]}, lz), UsageError);

    const std::string csv = matrix_csv(m);
    CHECK(csv.find("item0") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);  // header + 5 rows
}

TEST_CASE("clustering") {
    SUBCASE("two items: one merge, branch lengths from the merge height") {
        SimilarityMatrix m;
        m.labels = {"A", "B"};
        m.values = {{0.0, 0.4}, {0.4, 0.0}};
        const Dendrogram d = cluster(m);
        CHECK(newick(d) == "(A:0.4,B:0.4);");
        const auto [l, r] = root_split(d);
        CHECK(l == std::vector<std::string>{"A"});
        CHECK(r == std::vector<std::string>{"B"});
    }

    SUBCASE("closest pair merges first") {
        SimilarityMatrix m;
        m.labels = {"A", "B", "C"};
        m.values = {{0, 0.9, 0.2}, {0.9, 0, 0.8}, {0.2, 0.8, 0}};
        const Dendrogram d = cluster(m);
        // A and C join first, then B attaches at the average of 0.9 and 0.8
        const auto [l, r] = root_split(d);
        CHECK(l == std::vector<std::string>{"A", "C"});
        CHECK(r == std::vector<std::string>{"B"});
        CHECK(d.root->height == doctest::Approx(0.85));
    }

    SUBCASE("two families split exactly at the root") {
        const Lz78Compressor lz;
        // family base: a seeded 16-byte block repeated 64 times, so shared
        // structure is visible to the compressor; members differ by a few
        // flipped bytes
        const auto family_base = [](uint64_t seed) {
            const Bytes blk = rand_bytes(seed, 16);
            Bytes out;
            for (int i = 0; i < 64; ++i) out.insert(out.end(), blk.begin(), blk.end());
            return out;
        };
        std::vector<std::pair<std::string, Bytes>> items;
        const Bytes base1 = family_base(41);
        const Bytes base2 = family_base(42);
        for (int i = 0; i < 5; ++i) {
            Bytes v1 = base1, v2 = base2;
            for (int k = 0; k < 8; ++k) {
                v1[size_t(37 * i + 131 * k) % v1.size()] ^= uint8_t(k + 1);
                v2[size_t(31 * i + 171 * k) % v2.size()] ^= uint8_t(k + 1);
            }
            items.emplace_back("x" + std::to_string(i), v1);
            items.emplace_back("y" + std::to_string(i), v2);
        }
        const SimilarityMatrix m = similarity_matrix(items, lz);

        // family separation: every cross-family pair is farther than every
        // within-family pair by a clear margin
        double max_within = 0, min_cross = 2;
        for (size_t i = 0; i < items.size(); ++i)
            for (size_t j = i + 1; j < items.size(); ++j) {
                const bool same = items[i].first[0] == items[j].first[0];
                if (same)
                    max_within = std::max(max_within, m.values[i][j]);
                else
                    min_cross = std::min(min_cross, m.values[i][j]);
            }
        CHECK(min_cross - max_within >= 0.15);

        const Dendrogram d = cluster(m);
        auto [l, r] = root_split(d);
        std::sort(l.begin(), l.end());
        std::sort(r.begin(), r.end());
        if (!l.empty() && l[0][0] == 'y') std::swap(l, r);
        CHECK(l == std::vector<std::string>({"x0", "x1", "x2", "x3", "x4"}));
        CHECK(r == std::vector<std::string>({"y0", "y1", "y2", "y3", "y4"}));

        // identical inputs give identical output bytes
        CHECK(newick(cluster(similarity_matrix(items, lz))) == newick(d));
    }
}

TEST_CASE("newick round trip") {
    std::mt19937_64 rng(77);
    SimilarityMatrix m;
    for (int i = 0; i < 10; ++i) m.labels.push_back("leaf" + std::to_string(i));
    m.values.assign(10, std::vector<double>(10, 0.0));
    for (size_t i = 0; i < 10; ++i)
        for (size_t j = i + 1; j < 10; ++j) {
            const double v = 0.1 + 0.9 * double(rng() % 1000) / 1000.0;
            m.values[i][j] = m.values[j][i] = v;
        }
    const Dendrogram d = cluster(m);
    const std::string text = newick(d);
    CHECK(newick(parse_newick(text)) == text);
    CHECK_THROWS_AS(parse_newick("(A:0.4,B"), UsageError);
}
