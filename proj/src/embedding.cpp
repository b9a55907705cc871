#include "stsim/embedding.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace stsim {

namespace {

std::string lowercase_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::uint64_t mix_seed(std::uint64_t seed) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

struct Header {
    std::size_t count = 0;
    std::size_t dim = 0;
};

Header parse_header(const std::string& line, const std::string& path) {
    std::istringstream in(line);
    long long count = -1, dim = -1;
    if (!(in >> count >> dim) || count < 0 || dim <= 0) {
        std::string rest;
        throw data_error(path + ": malformed header line '" + line + "'");
    }
    std::string trailing;
    if (in >> trailing) throw data_error(path + ": malformed header line '" + line + "'");
    return {static_cast<std::size_t>(count), static_cast<std::size_t>(dim)};
}

float read_f32_le(const unsigned char* p) {
    std::uint32_t u = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                      (static_cast<std::uint32_t>(p[2]) << 16) |
                      (static_cast<std::uint32_t>(p[3]) << 24);
    return std::bit_cast<float>(u);
}

void write_f32_le(std::ostream& out, float f) {
    std::uint32_t u = std::bit_cast<std::uint32_t>(f);
    char buf[4] = {static_cast<char>(u & 0xff), static_cast<char>((u >> 8) & 0xff),
                   static_cast<char>((u >> 16) & 0xff), static_cast<char>((u >> 24) & 0xff)};
    out.write(buf, 4);
}

// True when the first row after the header parses as token + decimal floats.
bool looks_like_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::string header;
    std::getline(in, header);
    std::string row;
    if (!std::getline(in, row)) return true;  // empty table, format irrelevant
    std::istringstream fields(row);
    std::string token;
    if (!(fields >> token)) return false;
    std::string field;
    std::size_t floats = 0;
    while (fields >> field) {
        char* end = nullptr;
        std::strtod(field.c_str(), &end);
        if (end != field.c_str() + field.size()) return false;
        ++floats;
    }
    return floats > 0;
}

}  // namespace

void EmbeddingTable::insert(std::string token, Vec v) {
    if (dim == 0) dim = v.size();
    if (v.size() != dim) throw data_error("embedding vector for '" + token + "' has wrong width");
    require_finite(v, "embedding vector for '" + token + "'");
    if (index.count(token)) throw data_error("duplicate token '" + token + "'");
    index.emplace(token, tokens.size());
    tokens.push_back(std::move(token));
    vectors.push_back(std::move(v));
}

std::optional<std::size_t> EmbeddingTable::find_index(std::string_view token) const {
    auto it = index.find(std::string(token));
    if (it != index.end()) return it->second;
    it = index.find(lowercase_ascii(token));
    if (it != index.end()) return it->second;
    return std::nullopt;
}

const Vec* EmbeddingTable::find(std::string_view token) const {
    if (auto slot = find_index(token)) return &vectors[*slot];
    return nullptr;
}

Vec EmbeddingTable::oov_vector(std::string_view token) const {
    if (oov_policy == OovPolicy::ZeroVector) return Vec(dim, 0.0);
    Rng rng(fnv1a64(token) ^ mix_seed(oov_seed));
    Vec v(dim);
    fill_gaussian(rng, v, 0.01);
    return v;
}

Vec EmbeddingTable::lookup(std::string_view token) const {
    if (const Vec* v = find(token)) return *v;
    return oov_vector(token);
}

std::uint64_t EmbeddingTable::checksum() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto feed = [&h](const void* p, std::size_t n) {
        const unsigned char* bytes = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ull;
        }
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        feed(tokens[i].data(), tokens[i].size());
        feed(vectors[i].data(), vectors[i].size() * sizeof(double));
    }
    return h;
}

EmbeddingTable load_embeddings_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open embeddings file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw data_error(path + ": empty file");
    const Header header = parse_header(line, path);

    EmbeddingTable table;
    table.dim = header.dim;
    table.tokens.reserve(header.count);
    table.vectors.reserve(header.count);

    std::size_t line_no = 1;
    for (std::size_t i = 0; i < header.count; ++i) {
        if (!std::getline(in, line))
            throw data_error(path + ": truncated file, " + std::to_string(i) + " of " +
                             std::to_string(header.count) + " rows");
        ++line_no;
        std::istringstream fields(line);
        std::string token;
        if (!(fields >> token))
            throw data_error(path + ": line " + std::to_string(line_no) + ": empty row");
        Vec v;
        v.reserve(header.dim);
        std::string field;
        while (fields >> field) {
            char* end = nullptr;
            const double x = std::strtod(field.c_str(), &end);
            if (end != field.c_str() + field.size())
                throw data_error(path + ": line " + std::to_string(line_no) +
                                 ": bad float '" + field + "'");
            if (!std::isfinite(x))
                throw data_error(path + ": line " + std::to_string(line_no) +
                                 ": non-finite value '" + field + "'");
            v.push_back(x);
        }
        if (v.size() != header.dim)
            throw data_error(path + ": line " + std::to_string(line_no) + ": row has " +
                             std::to_string(v.size()) + " of " + std::to_string(header.dim) +
                             " components");
        if (table.index.count(token))
            throw data_error(path + ": line " + std::to_string(line_no) + ": duplicate token '" +
                             token + "'");
        table.insert(std::move(token), std::move(v));
    }
    while (std::getline(in, line)) {
        if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos)
            throw data_error(path + ": more rows than the declared vocabulary of " +
                             std::to_string(header.count));
    }
    return table;
}

EmbeddingTable load_embeddings_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open embeddings file '" + path + "'");
    std::string header_line;
    if (!std::getline(in, header_line)) throw data_error(path + ": empty file");
    const Header header = parse_header(header_line, path);

    std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const unsigned char* p = reinterpret_cast<const unsigned char*>(payload.data());
    const unsigned char* end = p + payload.size();

    EmbeddingTable table;
    table.dim = header.dim;
    table.tokens.reserve(header.count);
    table.vectors.reserve(header.count);

    for (std::size_t i = 0; i < header.count; ++i) {
        while (p < end && (*p == '\n' || *p == '\r')) ++p;
        std::string token;
        while (p < end && *p != ' ') token.push_back(static_cast<char>(*p++));
        if (p >= end)
            throw data_error(path + ": truncated file, " + std::to_string(i) + " of " +
                             std::to_string(header.count) + " entries");
        ++p;  // the single space terminating the token
        if (static_cast<std::size_t>(end - p) < 4 * header.dim)
            throw data_error(path + ": truncated file, " + std::to_string(i) + " of " +
                             std::to_string(header.count) + " entries");
        Vec v(header.dim);
        for (std::size_t c = 0; c < header.dim; ++c) {
            const float f = read_f32_le(p);
            p += 4;
            if (!std::isfinite(f))
                throw data_error(path + ": non-finite value in entry '" + token + "'");
            v[c] = static_cast<double>(f);
        }
        if (table.index.count(token))
            throw data_error(path + ": duplicate token '" + token + "'");
        table.insert(std::move(token), std::move(v));
    }
    while (p < end && (*p == '\n' || *p == '\r' || *p == ' ')) ++p;
    if (p != end)
        throw data_error(path + ": payload continues past the declared " +
                         std::to_string(header.count) + " entries");
    return table;
}

EmbeddingTable load_embeddings_auto(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw data_error("cannot open embeddings file '" + path + "'");
    probe.close();
    return looks_like_text(path) ? load_embeddings_text(path) : load_embeddings_binary(path);
}

void save_embeddings_text(const EmbeddingTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write embeddings file '" + path + "'");
    out << table.size() << ' ' << table.dim << '\n';
    char buf[64];
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << table.tokens[i];
        for (double x : table.vectors[i]) {
            std::snprintf(buf, sizeof(buf), " %.17g", x);
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw data_error("write failed for '" + path + "'");
}

void save_embeddings_binary(const EmbeddingTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write embeddings file '" + path + "'");
    out << table.size() << ' ' << table.dim << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << table.tokens[i] << ' ';
        for (double x : table.vectors[i]) write_f32_le(out, static_cast<float>(x));
        out << '\n';
    }
    if (!out) throw data_error("write failed for '" + path + "'");
}

}  // namespace stsim
