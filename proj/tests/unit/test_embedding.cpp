#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "stsim/embedding.hpp"
#include "test_util.hpp"

using namespace stsim;

namespace {

std::string write_file(const std::string& stem, const std::string& content) {
    const std::string path = testutil::temp_path(stem);
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("text loader reads the toy file back") {
    const std::string path = write_file("emb_toy", "2 3\na 1 0 0\nb 0 1 0\n");
    const EmbeddingTable table = load_embeddings_text(path);
    CHECK(table.dim == 3);
    CHECK(table.size() == 2);
    CHECK(table.lookup("a") == Vec{1.0, 0.0, 0.0});
    CHECK(table.lookup("b") == Vec{0.0, 1.0, 0.0});
}

TEST_CASE("text loader rejects malformed input") {
    CHECK_THROWS_AS(load_embeddings_text(write_file("emb_short_row", "1 3\na 1 0\n")),
                    data_error);
    CHECK_THROWS_AS(load_embeddings_text(write_file("emb_bad_header", "two 3\na 1 0 0\n")),
                    data_error);
    CHECK_THROWS_AS(load_embeddings_text(write_file("emb_nonfinite", "1 2\na 1 nan\n")),
                    data_error);
    CHECK_THROWS_AS(load_embeddings_text(write_file("emb_truncated", "3 2\na 1 0\nb 0 1\n")),
                    data_error);
    CHECK_THROWS_AS(
        load_embeddings_text(write_file("emb_extra", "1 2\na 1 0\nb 0 1\n")),
        data_error);

    try {
        load_embeddings_text(write_file("emb_dup", "2 2\na 1 0\na 0 1\n"));
        FAIL("expected duplicate-token error");
    } catch (const data_error& e) {
        // the report names the offending line
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }
}

TEST_CASE("binary round-trip is exact") {
    EmbeddingTable table;
    table.insert("a", {1.0, 0.0});
    const std::string path = testutil::temp_path("emb_bin");
    save_embeddings_binary(table, path);
    const EmbeddingTable loaded = load_embeddings_binary(path);
    CHECK(loaded.dim == 2);
    CHECK(loaded.lookup("a") == Vec{1.0, 0.0});

    // a second save is byte-identical
    const std::string path2 = testutil::temp_path("emb_bin");
    save_embeddings_binary(loaded, path2);
    std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
    const std::string b1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    const std::string b2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(b1 == b2);
}

TEST_CASE("binary loader rejects a count mismatch") {
    EmbeddingTable table;
    for (int i = 0; i < 4; ++i) table.insert("w" + std::to_string(i), {double(i), 1.0});
    const std::string path = testutil::temp_path("emb_bin_short");
    save_embeddings_binary(table, path);
    // bump the declared count from 4 to 5
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f << "5";
    f.close();
    CHECK_THROWS_AS(load_embeddings_binary(path), data_error);
}

TEST_CASE("text save/load is the identity on tables") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    EmbeddingTable table;
    for (int i = 0; i < 20; ++i) {
        Vec v(7);
        for (double& x : v) x = dist(rng);
        table.insert("tok" + std::to_string(i), std::move(v));
    }
    const std::string path = testutil::temp_path("emb_text_rt");
    save_embeddings_text(table, path);
    const EmbeddingTable loaded = load_embeddings_text(path);
    REQUIRE(loaded.size() == table.size());
    CHECK(loaded.tokens == table.tokens);
    for (std::size_t i = 0; i < table.size(); ++i) CHECK(loaded.vectors[i] == table.vectors[i]);
}

TEST_CASE("text to binary conversion is exact at f32 precision") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    EmbeddingTable table;
    for (int i = 0; i < 10; ++i) {
        Vec v(5);
        for (double& x : v) x = dist(rng);
        table.insert("w" + std::to_string(i), std::move(v));
    }
    const std::string text_path = testutil::temp_path("emb_t2b");
    save_embeddings_text(table, text_path);
    const EmbeddingTable via_text = load_embeddings_text(text_path);
    const std::string bin_path = testutil::temp_path("emb_t2b_bin");
    save_embeddings_binary(via_text, bin_path);
    const EmbeddingTable via_bin = load_embeddings_binary(bin_path);
    for (std::size_t i = 0; i < table.size(); ++i)
        for (std::size_t c = 0; c < table.dim; ++c)
            CHECK(via_bin.vectors[i][c] ==
                  static_cast<double>(static_cast<float>(table.vectors[i][c])));
}

TEST_CASE("full-width tables load at dim 300") {
    std::mt19937 rng(14);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    EmbeddingTable table;
    for (int i = 0; i < 5; ++i) {
        Vec v(300);
        for (double& x : v) x = dist(rng);
        table.insert("word" + std::to_string(i), std::move(v));
    }
    const std::string path = testutil::temp_path("emb_300");
    save_embeddings_text(table, path);
    const EmbeddingTable loaded = load_embeddings_text(path);
    CHECK(loaded.dim == 300);
    CHECK(loaded.lookup("word3") == table.vectors[3]);
}

TEST_CASE("format auto-detection") {
    EmbeddingTable table;
    table.insert("alpha", {0.25, -1.5});
    table.insert("beta", {2.0, 0.125});
    const std::string tp = testutil::temp_path("emb_auto_t");
    const std::string bp = testutil::temp_path("emb_auto_b");
    save_embeddings_text(table, tp);
    save_embeddings_binary(table, bp);
    CHECK(load_embeddings_auto(tp).lookup("beta") == Vec{2.0, 0.125});
    CHECK(load_embeddings_auto(bp).lookup("beta") == Vec{2.0, 0.125});
}

TEST_CASE("lookup is total under both OOV policies") {
    EmbeddingTable table;
    table.insert("known", {1.0, 2.0, 3.0});

    table.oov_policy = OovPolicy::ZeroVector;
    CHECK(table.lookup("unknown") == Vec{0.0, 0.0, 0.0});

    table.oov_policy = OovPolicy::HashedGaussian;
    table.oov_seed = 7;
    const Vec first = table.lookup("unknown");
    const Vec second = table.lookup("unknown");
    CHECK(first == second);
    REQUIRE(first.size() == 3);
    CHECK(first != Vec{0.0, 0.0, 0.0});
    CHECK(table.lookup("unknown") != table.lookup("other-unknown"));

    // a separately constructed table with the same seed synthesizes the same vector
    EmbeddingTable other;
    other.insert("x", {0.0, 0.0, 0.0});
    other.oov_policy = OovPolicy::HashedGaussian;
    other.oov_seed = 7;
    CHECK(other.lookup("unknown") == first);

    // different seed, different vector
    other.oov_seed = 8;
    CHECK(other.lookup("unknown") != first);
}

TEST_CASE("lookup falls back to the lowercased token") {
    EmbeddingTable table;
    table.insert("her", {0.5, 0.5});
    table.insert("Mary", {1.0, 0.0});
    CHECK(table.lookup("Her") == Vec{0.5, 0.5});
    CHECK(table.lookup("Mary") == Vec{1.0, 0.0});  // exact match wins
}

TEST_CASE("checksum tracks content") {
    EmbeddingTable a;
    a.insert("x", {1.0});
    EmbeddingTable b;
    b.insert("x", {1.0});
    CHECK(a.checksum() == b.checksum());
    b.vectors[0][0] = 2.0;
    CHECK(a.checksum() != b.checksum());
}
