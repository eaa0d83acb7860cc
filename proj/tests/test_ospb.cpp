#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "psskit/construct.hpp"
#include "psskit/family.hpp"
#include "psskit/ospb.hpp"

using namespace psskit;

namespace {

using Partition = std::set<std::set<std::size_t>>;

Partition partition_of(const OspbDecomposition& dec)
{
    Partition p;
    for (const OspbBlock& b : dec.blocks)
        p.insert(std::set<std::size_t>(b.indices.begin(), b.indices.end()));
    return p;
}

}  // namespace

TEST_CASE("detect maximal and minimal bases")
{
    const OspbDetection max3 = detect_ospb(gen_maximal(3));
    REQUIRE(max3);
    CHECK(max3.decomposition->s() == 3);
    CHECK(max3.decomposition->blocks[0].indices == IndexList{0, 3});
    CHECK(max3.decomposition->blocks[2].indices == IndexList{2, 5});

    const OspbDetection min4 = detect_ospb(gen_minimal(4));
    REQUIRE(min4);
    CHECK(min4.decomposition->s() == 1);
}

TEST_CASE("detect rejects non-OSPBs")
{
    const VectorFamily skewed(4, {{1, 0, 0, 0}, {0, 1, 0, 0}, {-1, -1, 2, 2}, {1, 1, -4, -4}, {0, 0, 1, 0}, {0, 0, 0, 1}});
    const OspbDetection d = detect_ospb(skewed);
    CHECK_FALSE(d);
    CHECK(d.failure == OspbFailure::ComponentCount);

    CHECK(detect_ospb(VectorFamily(2, {{1, 0}, {0, 1}})).failure == OspbFailure::ComponentCount);
    CHECK(detect_ospb(VectorFamily(3, {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}})).failure == OspbFailure::NotSpanning);
    // Three vectors on a line plus a pair: right count of components would need
    // s = m - n, but the line block is not minimal.
    const OspbDetection nm = detect_ospb(VectorFamily(2, {{1, 0}, {-1, 0}, {-2, 0}, {0, 1}, {0, -1}}));
    CHECK_FALSE(nm);
}

TEST_CASE("detect two planar blocks in R^4")
{
    const double r = 1.0 / std::sqrt(2.0);
    const VectorFamily f(4, {{1, 0, 0, 0}, {0, 1, 0, 0}, {-r, -r, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, -r, -r}});
    const OspbDetection d = detect_ospb(f);
    REQUIRE(d);
    CHECK(partition_of(*d.decomposition) == Partition{{0, 1, 2}, {3, 4, 5}});
}

TEST_CASE("ospb cosine measure closed forms")
{
    const VectorFamily m4 = gen_maximal(4);
    const CosineResult r = cosine_measure_ospb(m4, *detect_ospb(m4).decomposition);
    CHECK(std::abs(r.value - 0.5) < 1e-12);
    CHECK(r.bases_examined == 8);
    CHECK(r.cosine_vectors.size() == 16);

    const VectorFamily n3 = gen_minimal(3);
    const CosineResult c = cosine_measure_ospb(n3, *detect_ospb(n3).decomposition);
    CHECK(std::abs(c.value - 1.0 / std::sqrt(9.0 + 4.0 * std::sqrt(3.0))) < 1e-12);
    CHECK(c.bases_examined == 4);
}

TEST_CASE("ospb matches generic on a random R^5 instance")
{
    std::mt19937_64 rng(2024);
    const VectorFamily f(oracle::random_ospb(5, {2, 3}, rng));
    const OspbDetection d = detect_ospb(f);
    REQUIRE(d);
    const CosineResult fast = cosine_measure_ospb(f, *d.decomposition);
    const CosineResult slow = cosine_measure_generic(f);
    CHECK(std::abs(fast.value - slow.value) < 1e-9);
    CHECK(same_vector_set(fast.cosine_vectors, slow.cosine_vectors));
    CHECK(fast.bases_examined == 7);
}

TEST_CASE("cosine vector cap sets the truncation flag")
{
    const VectorFamily m4 = gen_maximal(4);
    OspbCosineOptions opts;
    opts.max_cosine_vectors = 5;
    const CosineResult r = cosine_measure_ospb(m4, *detect_ospb(m4).decomposition, {}, opts);
    CHECK(r.truncated);
    CHECK(r.cosine_vectors.size() == 5);
    CHECK(std::abs(r.value - 0.5) < 1e-12);
}

TEST_CASE("invalid decompositions are rejected")
{
    const VectorFamily m2 = gen_maximal(2);
    OspbDecomposition dec = *detect_ospb(m2).decomposition;
    std::swap(dec.blocks[0].indices[1], dec.blocks[1].indices[1]);
    CHECK_THROWS_AS(cosine_measure_ospb(m2, dec), InvalidDecomposition);

    OspbDecomposition partial = *detect_ospb(m2).decomposition;
    partial.blocks.pop_back();
    CHECK_THROWS_AS(cosine_measure_ospb(m2, partial), InvalidDecomposition);
}

TEST_CASE("detection round trip and permutation equivariance")
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
        const auto dims = oracle::random_partition(n, rng);
        std::vector<std::vector<std::size_t>> truth;
        const VectorFamily f(oracle::random_ospb(n, dims, rng, &truth));
        const OspbDetection d = detect_ospb(f);
        REQUIRE(d);
        Partition expected;
        for (const auto& b : truth)
            expected.insert(std::set<std::size_t>(b.begin(), b.end()));
        CHECK(partition_of(*d.decomposition) == expected);

        IndexList perm(f.size());
        for (std::size_t i = 0; i < perm.size(); ++i)
            perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        const OspbDetection dp = detect_ospb(f.subset(perm));
        REQUIRE(dp);
        Partition mapped;
        for (const OspbBlock& b : dp.decomposition->blocks) {
            std::set<std::size_t> s;
            for (std::size_t i : b.indices)
                s.insert(perm[i]);
            mapped.insert(s);
        }
        CHECK(mapped == expected);
        for (const OspbBlock& b : dp.decomposition->blocks)
            CHECK(std::is_sorted(b.indices.begin(), b.indices.end()));
    }
}
