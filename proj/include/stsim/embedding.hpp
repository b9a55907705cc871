#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stsim/kernel.hpp"

namespace stsim {

enum class OovPolicy { ZeroVector, HashedGaussian };

/// Immutable store of pre-trained word vectors. Entries keep file order so
/// that save/load round-trips reproduce the original table.
///
/// Lookup never fails: exact match first, lowercase fallback second, then the
/// out-of-vocabulary policy synthesizes a vector. With HashedGaussian the OOV
/// vector is a pure function of (token, oov_seed, dim).
struct EmbeddingTable {
    std::size_t dim = 0;
    std::vector<std::string> tokens;
    std::vector<Vec> vectors;
    std::unordered_map<std::string, std::size_t> index;
    OovPolicy oov_policy = OovPolicy::HashedGaussian;
    std::uint64_t oov_seed = 0;

    std::size_t size() const { return tokens.size(); }
    void insert(std::string token, Vec v);

    /// Stored vector for the token, trying exact then lowercased form.
    const Vec* find(std::string_view token) const;
    /// Storage slot for the token under the same normalization, if any.
    std::optional<std::size_t> find_index(std::string_view token) const;
    /// Total lookup: stored vector or the OOV policy's synthetic one.
    Vec lookup(std::string_view token) const;
    Vec oov_vector(std::string_view token) const;

    /// Order-sensitive digest of all vector payloads; used to verify the
    /// table is untouched by training.
    std::uint64_t checksum() const;
};

EmbeddingTable load_embeddings_text(const std::string& path);
EmbeddingTable load_embeddings_binary(const std::string& path);
/// Sniffs whether the payload after the header line is ASCII decimals or raw
/// little-endian floats.
EmbeddingTable load_embeddings_auto(const std::string& path);

void save_embeddings_text(const EmbeddingTable& table, const std::string& path);
void save_embeddings_binary(const EmbeddingTable& table, const std::string& path);

}  // namespace stsim
