#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "stsim/error.hpp"

namespace stsim {

/// One annotated sentence pair; gold relatedness lies in [1, 5].
struct SentencePair {
    std::string id;
    std::vector<std::string> tokens_a;
    std::vector<std::string> tokens_b;
    double gold = 0.0;
};

enum class SplitTag { Train, Validation, Test, Unassigned };

struct TaggedPair {
    SentencePair pair;
    SplitTag tag = SplitTag::Unassigned;
};

struct DatasetSplit {
    std::vector<SentencePair> train;
    std::vector<SentencePair> validation;
    std::vector<SentencePair> test;
    std::vector<SentencePair> unused;
};

/// Training target for a gold label: (gold - 1) / 4, the [0,1] scale the
/// similarity head produces.
inline double normalized_target(double gold) { return (gold - 1.0) / 4.0; }

/// Whitespace split with every ASCII punctuation character peeled into its
/// own token. Deterministic; throws on blank input.
std::vector<std::string> tokenize(std::string_view sentence);

/// Reads a SICK-style TSV: header row naming at least pair id, sentence A,
/// sentence B and the relatedness score; an official split column is used
/// when present, otherwise rows come back Unassigned.
std::vector<TaggedPair> load_sick(const std::string& path);

struct FirstNCounts {
    std::size_t train = 4927;
    std::size_t validation = 2000;
    std::size_t test = 3000;
};

/// Split according to the file's own split column.
DatasetSplit partition_by_file(const std::vector<TaggedPair>& records);
/// Slice the first counts.train records into train, the next counts.validation
/// into validation, the next counts.test into test; the rest land in unused.
DatasetSplit partition_first_n(const std::vector<TaggedPair>& records, FirstNCounts counts);

/// Gold-score histogram. The four bins are right-open: [1,2) [2,3) [3,4)
/// [4,5); pairs with gold exactly 5 are counted separately in top_exact.
struct GoldHistogram {
    std::array<std::size_t, 4> bins{0, 0, 0, 0};
    std::size_t top_exact = 0;
};

GoldHistogram gold_histogram(const std::vector<TaggedPair>& records);

}  // namespace stsim
