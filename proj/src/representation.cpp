#include "codeorigin/representation.hpp"

#include "codeorigin/error.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace codeorigin::representation {

namespace {

std::uint32_t read_u32_le(const unsigned char* p)
{
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void append_u32_le(std::string& out, std::uint32_t value)
{
    for (int shift = 0; shift < 32; shift += 8)
        out.push_back(static_cast<char>((value >> shift) & 0xFF));
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail_input("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string at_offset(const std::filesystem::path& path, std::size_t offset)
{
    return path.string() + " (byte offset " + std::to_string(offset) + ")";
}

} // namespace

const char* to_string(RepresentationKind kind)
{
    return kind == RepresentationKind::embeddings ? "embeddings" : "features";
}

RepresentationKind parse_representation(std::string_view text)
{
    if (text == "features")
        return RepresentationKind::handcrafted_features;
    if (text == "embeddings")
        return RepresentationKind::embeddings;
    fail_input("unknown representation '" + std::string(text) + "' (expected features or embeddings)");
}

std::vector<double> masked_mean_pool(const Matrix& hidden_states, std::span<const int> mask)
{
    if (mask.size() != hidden_states.rows())
        fail_input("mask length " + std::to_string(mask.size()) + " does not match " +
                   std::to_string(hidden_states.rows()) + " hidden-state rows");
    std::vector<double> pooled(hidden_states.cols(), 0.0);
    std::size_t active = 0;
    for (std::size_t t = 0; t < hidden_states.rows(); ++t) {
        if (mask[t] == 0)
            continue;
        ++active;
        const auto row = hidden_states.row(t);
        for (std::size_t j = 0; j < pooled.size(); ++j)
            pooled[j] += row[j];
    }
    if (active == 0)
        fail_input("attention mask has no active positions");
    for (auto& value : pooled)
        value /= static_cast<double>(active);
    return pooled;
}

std::vector<double> l2_normalize(std::span<const double> v, std::string_view id)
{
    double sum_sq = 0.0;
    for (double x : v)
        sum_sq += x * x;
    const double norm = std::sqrt(sum_sq);
    if (!(norm > 1e-12))
        fail_input("cannot normalize near-zero vector" +
                   (id.empty() ? std::string() : " for snippet '" + std::string(id) + "'"));
    std::vector<double> out(v.begin(), v.end());
    for (auto& x : out)
        x /= norm;
    return out;
}

std::filesystem::path ids_path_for(const std::filesystem::path& vector_path)
{
    auto p = vector_path;
    p += ".ids";
    return p;
}

std::vector<EmbeddingVector> read_vectors(const std::filesystem::path& path)
{
    const std::string bytes = read_file(path);
    const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());

    if (bytes.size() < 4 || bytes.compare(0, 4, kVectorMagic, 4) != 0)
        fail_input("bad magic in vector file " + at_offset(path, 0));
    if (bytes.size() < 5)
        fail_input("missing version byte in " + at_offset(path, 4));
    if (data[4] != kVectorVersion)
        fail_input("unsupported vector file version " + std::to_string(data[4]) + " in " + at_offset(path, 4));
    if (bytes.size() < kVectorHeaderSize)
        fail_input("truncated header in " + at_offset(path, bytes.size()));

    const std::uint32_t count = read_u32_le(data + 5);
    const std::uint32_t dim = read_u32_le(data + 9);
    const std::uint64_t payload = static_cast<std::uint64_t>(count) * dim * 4;
    const std::uint64_t expected = kVectorHeaderSize + payload;
    if (bytes.size() < expected)
        fail_input("truncated payload: header declares " + std::to_string(count) + " x " + std::to_string(dim) +
                   " floats, data ends at " + at_offset(path, bytes.size()) + ", expected " +
                   std::to_string(expected) + " bytes");
    if (bytes.size() > expected)
        fail_input("trailing bytes after " + std::to_string(count) + " x " + std::to_string(dim) +
                   " payload at " + at_offset(path, static_cast<std::size_t>(expected)));

    std::vector<std::string> ids;
    {
        std::istringstream in(read_file(ids_path_for(path)));
        std::string line;
        while (std::getline(in, line))
            ids.push_back(line);
    }
    if (ids.size() != count)
        fail_input("ids file " + ids_path_for(path).string() + " has " + std::to_string(ids.size()) +
                   " ids for " + std::to_string(count) + " vectors");

    std::vector<EmbeddingVector> out(count);
    const unsigned char* cursor = data + kVectorHeaderSize;
    for (std::uint32_t r = 0; r < count; ++r) {
        out[r].id = std::move(ids[r]);
        out[r].values.resize(dim);
        for (std::uint32_t j = 0; j < dim; ++j, cursor += 4)
            out[r].values[j] = static_cast<double>(std::bit_cast<float>(read_u32_le(cursor)));
    }
    return out;
}

void write_vectors(std::span<const EmbeddingVector> vectors, const std::filesystem::path& path)
{
    const std::size_t dim = vectors.empty() ? 0 : vectors.front().values.size();
    std::string ids;
    for (const auto& v : vectors) {
        if (v.values.size() != dim)
            fail_input("mixed dimensions: '" + v.id + "' has " + std::to_string(v.values.size()) +
                       " values, expected " + std::to_string(dim));
        if (v.id.find('\n') != std::string::npos)
            fail_input("snippet id '" + v.id + "' contains a newline");
        ids += v.id;
        ids += '\n';
    }

    std::string out(kVectorMagic, 4);
    out.push_back(static_cast<char>(kVectorVersion));
    append_u32_le(out, static_cast<std::uint32_t>(vectors.size()));
    append_u32_le(out, static_cast<std::uint32_t>(dim));
    out.reserve(out.size() + vectors.size() * dim * 4);
    for (const auto& v : vectors)
        for (double x : v.values)
            append_u32_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));

    std::ofstream vec(path, std::ios::binary | std::ios::trunc);
    std::ofstream idf(ids_path_for(path), std::ios::binary | std::ios::trunc);
    if (!vec || !idf)
        fail_input("cannot write vector file " + path.string());
    vec.write(out.data(), static_cast<std::streamsize>(out.size()));
    idf.write(ids.data(), static_cast<std::streamsize>(ids.size()));
}

LoadedEmbeddings load_embeddings(const std::filesystem::path& path)
{
    LoadedEmbeddings loaded;
    auto raw = read_vectors(path);
    loaded.dim = raw.empty() ? 0 : raw.front().values.size();
    loaded.vectors.reserve(raw.size());
    for (auto& v : raw) {
        double sum_sq = 0.0;
        for (double x : v.values) {
            if (!std::isfinite(x))
                fail_input("non-finite embedding value for snippet '" + v.id + "'");
            sum_sq += x * x;
        }
        if (std::abs(std::sqrt(sum_sq) - 1.0) > 1e-4)
            ++loaded.renormalized;
        loaded.vectors.push_back({v.id, l2_normalize(v.values, v.id)});
    }
    return loaded;
}

} // namespace codeorigin::representation
