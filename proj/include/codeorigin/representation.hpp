#pragma once

#include "codeorigin/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace codeorigin::representation {

/// What a trained model consumes: the stylometry vector or external embeddings.
enum class RepresentationKind { handcrafted_features, embeddings };

/// "features" / "embeddings".
const char* to_string(RepresentationKind kind);
RepresentationKind parse_representation(std::string_view text);

struct EmbeddingVector {
    std::string id;
    std::vector<double> values;
};

/// Mean of the hidden-state rows whose mask entry is non-zero. Rows that are
/// masked out never influence the result.
std::vector<double> masked_mean_pool(const Matrix& hidden_states, std::span<const int> mask);

/// Unit-length copy of v. Throws when ||v|| <= 1e-12; `id` names the snippet
/// in that error.
std::vector<double> l2_normalize(std::span<const double> v, std::string_view id = {});

// Vector file layout, all little-endian:
//   "MGCV" | version 0x01 | u32 count | u32 dim | count*dim float32, row-major
// plus a companion text file with one snippet id per line (line i <-> row i).
inline constexpr char kVectorMagic[4] = {'M', 'G', 'C', 'V'};
inline constexpr std::uint8_t kVectorVersion = 0x01;
inline constexpr std::size_t kVectorHeaderSize = 13;

/// `<vector file>.ids`
std::filesystem::path ids_path_for(const std::filesystem::path& vector_path);

/// Raw rows as stored (float32 promoted to double); no normalization.
std::vector<EmbeddingVector> read_vectors(const std::filesystem::path& path);

/// Writes the vector file and its ids companion. All vectors must share one
/// dimension; values are narrowed to float32.
void write_vectors(std::span<const EmbeddingVector> vectors, const std::filesystem::path& path);

struct LoadedEmbeddings {
    std::vector<EmbeddingVector> vectors; // L2-normalized
    std::size_t dim = 0;
    /// Rows whose stored norm was off from 1 by more than 1e-4.
    std::size_t renormalized = 0;
};

/// read_vectors followed by finite-value checks and re-normalization of every row.
LoadedEmbeddings load_embeddings(const std::filesystem::path& path);

} // namespace codeorigin::representation
