#include "codeorigin/error.hpp"
#include "codeorigin/representation.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

using namespace codeorigin;
using namespace codeorigin::representation;
namespace fs = std::filesystem;

namespace {

fs::path temp(const std::string& name)
{
    return fs::temp_directory_path() / ("codeorigin_" + name);
}

std::vector<unsigned char> bytes_of(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void put_bytes(const fs::path& p, const std::vector<unsigned char>& b)
{
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

void put_ids(const fs::path& p, const std::vector<std::string>& ids)
{
    std::ofstream out(ids_path_for(p));
    for (const auto& id : ids)
        out << id << "\n";
}

std::string error_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST(Pooling, Examples)
{
    Matrix h(2, 2);
    h(0, 0) = h(0, 1) = 1;
    h(1, 0) = h(1, 1) = 3;
    const int first[] = {1, 0};
    const int both[] = {1, 1};
    const int none[] = {0, 0};
    EXPECT_EQ(masked_mean_pool(h, first), (std::vector<double>{1, 1}));
    EXPECT_EQ(masked_mean_pool(h, both), (std::vector<double>{2, 2}));
    EXPECT_THROW(masked_mean_pool(h, none), Error);
    const int short_mask[] = {1};
    EXPECT_THROW(masked_mean_pool(h, short_mask), Error);
}

TEST(Pooling, IgnoresMaskedRows)
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    Matrix h(6, 4);
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            h(r, c) = g(rng);
    const int mask[] = {1, 0, 1, 0, 0, 1};
    const auto before = masked_mean_pool(h, mask);
    for (std::size_t c = 0; c < 4; ++c)
        h(1, c) = h(3, c) = 1e9;
    EXPECT_EQ(masked_mean_pool(h, mask), before);
}

TEST(Normalize, Examples)
{
    const double v[] = {3, 4};
    const auto n = l2_normalize(v);
    EXPECT_NEAR(n[0], 0.6, 1e-15);
    EXPECT_NEAR(n[1], 0.8, 1e-15);
    const double unit[] = {0, 1, 0};
    EXPECT_EQ(l2_normalize(unit), (std::vector<double>{0, 1, 0}));
    const double zero[] = {0, 0};
    const auto msg = error_of([&] { l2_normalize(zero, "snippet-17"); });
    EXPECT_NE(msg.find("snippet-17"), std::string::npos) << msg;
}

TEST(Normalize, IdempotentAndScaleInvariant)
{
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    for (int t = 0; t < 100; ++t) {
        std::vector<double> v(16);
        for (auto& x : v)
            x = g(rng);
        const auto n = l2_normalize(v);
        double sq = 0;
        for (double x : n)
            sq += x * x;
        EXPECT_NEAR(std::sqrt(sq), 1.0, 1e-12);
        const auto nn = l2_normalize(n);
        std::vector<double> scaled(v);
        for (auto& x : scaled)
            x *= 7.5;
        const auto ns = l2_normalize(scaled);
        for (std::size_t i = 0; i < v.size(); ++i) {
            EXPECT_NEAR(nn[i], n[i], 1e-15);
            EXPECT_NEAR(ns[i], n[i], 1e-15);
            EXPECT_GT(n[i] * v[i], -1e-300); // same sign: positive multiple
        }
    }
}

TEST(VectorFile, HeaderArithmetic)
{
    const auto p = temp("two_by_three.vec");
    std::vector<unsigned char> b = {'M', 'G', 'C', 'V', 1, 2, 0, 0, 0, 3, 0, 0, 0};
    for (int i = 0; i < 6; ++i) {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(i) + 0.5f);
        for (int k = 0; k < 4; ++k)
            b.push_back(static_cast<unsigned char>(bits >> (8 * k)));
    }
    ASSERT_EQ(b.size(), 13u + 24u);
    put_bytes(p, b);
    put_ids(p, {"a", "b"});
    const auto vs = read_vectors(p);
    ASSERT_EQ(vs.size(), 2u);
    EXPECT_EQ(vs[1].id, "b");
    EXPECT_EQ(vs[1].values, (std::vector<double>{3.5, 4.5, 5.5}));
}

TEST(VectorFile, TruncationReportsOffset)
{
    const auto p = temp("truncated.vec");
    std::vector<EmbeddingVector> vs = {{"a", {1, 2, 3}}, {"b", {4, 5, 6}}};
    write_vectors(vs, p);
    auto b = bytes_of(p);
    b.resize(b.size() - 5); // 13 + 24 declared, 32 present
    put_bytes(p, b);
    const auto msg = error_of([&] { read_vectors(p); });
    EXPECT_NE(msg.find("byte offset 32"), std::string::npos) << msg;

    b = bytes_of(p);
    b[0] = 'X';
    put_bytes(p, b);
    EXPECT_NE(error_of([&] { read_vectors(p); }).find("byte offset 0"), std::string::npos);
}

TEST(VectorFile, BitExactRoundTrip)
{
    const auto p = temp("roundtrip.vec");
    std::mt19937_64 rng(3);
    std::vector<EmbeddingVector> vs;
    for (int i = 0; i < 20; ++i) {
        EmbeddingVector v{"id" + std::to_string(i), {}};
        for (int j = 0; j < 7; ++j) {
            // any finite float32 bit pattern
            std::uint32_t bits;
            do
                bits = static_cast<std::uint32_t>(rng());
            while (((bits >> 23) & 0xFF) == 0xFF);
            v.values.push_back(std::bit_cast<float>(bits));
        }
        vs.push_back(v);
    }
    write_vectors(vs, p);
    const auto back = read_vectors(p);
    ASSERT_EQ(back.size(), vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) {
        EXPECT_EQ(back[i].id, vs[i].id);
        for (std::size_t j = 0; j < 7; ++j)
            EXPECT_EQ(std::bit_cast<std::uint64_t>(back[i].values[j]), std::bit_cast<std::uint64_t>(vs[i].values[j]));
    }
}

TEST(VectorFile, SizesAndErrors)
{
    const auto p = temp("sizes.vec");
    write_vectors(std::vector<EmbeddingVector>{}, p);
    EXPECT_EQ(fs::file_size(p), kVectorHeaderSize);
    EXPECT_TRUE(read_vectors(p).empty());

    write_vectors(std::vector<EmbeddingVector>{{"only", std::vector<double>(768, 0.25)}}, p);
    EXPECT_EQ(fs::file_size(p), kVectorHeaderSize + 768 * 4);

    std::vector<EmbeddingVector> mixed = {{"a", {1, 2}}, {"b", {1, 2, 3}}};
    EXPECT_THROW(write_vectors(mixed, p), Error);

    std::vector<EmbeddingVector> two = {{"a", {1, 2}}, {"b", {1, 2}}};
    write_vectors(two, p);
    put_ids(p, {"a"});
    EXPECT_THROW(read_vectors(p), Error);
}

TEST(Embeddings, LoadRenormalizes)
{
    const auto p = temp("load.vec");
    write_vectors(std::vector<EmbeddingVector>{{"unit", {0.6, 0.8}}, {"long", {3, 4}}}, p);
    const auto loaded = load_embeddings(p);
    EXPECT_EQ(loaded.dim, 2u);
    EXPECT_EQ(loaded.renormalized, 1u);
    EXPECT_NEAR(loaded.vectors[1].values[0], 0.6, 1e-7);
    EXPECT_EQ(parse_representation("features"), RepresentationKind::handcrafted_features);
    EXPECT_EQ(parse_representation("embeddings"), RepresentationKind::embeddings);
    EXPECT_THROW(parse_representation("tfidf"), Error);
}
