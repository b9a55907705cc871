#include "stsim/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace stsim {

namespace {

bool is_word_byte(unsigned char c) {
    // Letters, digits and any non-ASCII byte stay inside a token; every other
    // printable ASCII character is punctuation and becomes its own token.
    return std::isalnum(c) || c >= 0x80;
}

std::string lowercase_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
        fields.back().pop_back();
    return fields;
}

// Column resolution by header name; accepts the SICK distribution's names and
// a few generic spellings.
long find_column(const std::vector<std::string>& header,
                 const std::vector<std::string>& candidates) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = lowercase_ascii(header[i]);
        for (const auto& c : candidates)
            if (name == c) return static_cast<long>(i);
    }
    return -1;
}

SplitTag parse_split_tag(std::string_view raw) {
    const std::string tag = lowercase_ascii(raw);
    if (tag == "train" || tag == "training") return SplitTag::Train;
    if (tag == "trial" || tag == "validation" || tag == "dev") return SplitTag::Validation;
    if (tag == "test") return SplitTag::Test;
    return SplitTag::Unassigned;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view sentence) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : sentence) {
        if (std::isspace(c)) {
            if (!current.empty()) tokens.push_back(std::move(current)), current.clear();
        } else if (is_word_byte(c)) {
            current.push_back(static_cast<char>(c));
        } else {
            if (!current.empty()) tokens.push_back(std::move(current)), current.clear();
            tokens.emplace_back(1, static_cast<char>(c));
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    if (tokens.empty()) throw data_error("tokenize: blank input");
    return tokens;
}

std::vector<TaggedPair> load_sick(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open dataset file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw data_error(path + ": empty file");

    const std::vector<std::string> header = split_tabs(line);
    const long id_col = find_column(header, {"pair_id", "pair id", "id"});
    const long a_col = find_column(header, {"sentence_a", "sentence a", "sentence1"});
    const long b_col = find_column(header, {"sentence_b", "sentence b", "sentence2"});
    const long score_col =
        find_column(header, {"relatedness_score", "relatedness", "score", "gold"});
    const long split_col = find_column(header, {"semeval_set", "split", "set"});
    if (id_col < 0 || a_col < 0 || b_col < 0 || score_col < 0)
        throw data_error(path + ": header is missing a required column (need pair id, "
                                "sentence A, sentence B, relatedness score)");

    std::vector<TaggedPair> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::vector<std::string> fields = split_tabs(line);
        const std::size_t needed = static_cast<std::size_t>(
            std::max({id_col, a_col, b_col, score_col, split_col < 0 ? 0L : split_col}));
        if (fields.size() <= needed)
            throw data_error(path + ": line " + std::to_string(line_no) + ": too few columns");

        const std::string& score_text = fields[static_cast<std::size_t>(score_col)];
        char* end = nullptr;
        const double gold = std::strtod(score_text.c_str(), &end);
        if (end != score_text.c_str() + score_text.size() || !std::isfinite(gold))
            throw data_error(path + ": line " + std::to_string(line_no) +
                             ": unparseable score '" + score_text + "'");
        if (gold < 1.0 || gold > 5.0)
            throw data_error(path + ": line " + std::to_string(line_no) + ": score " +
                             score_text + " outside [1,5]");

        TaggedPair record;
        record.pair.id = fields[static_cast<std::size_t>(id_col)];
        try {
            record.pair.tokens_a = tokenize(fields[static_cast<std::size_t>(a_col)]);
            record.pair.tokens_b = tokenize(fields[static_cast<std::size_t>(b_col)]);
        } catch (const data_error&) {
            throw data_error(path + ": line " + std::to_string(line_no) + ": blank sentence");
        }
        record.pair.gold = gold;
        if (split_col >= 0)
            record.tag = parse_split_tag(fields[static_cast<std::size_t>(split_col)]);
        records.push_back(std::move(record));
    }
    return records;
}

DatasetSplit partition_by_file(const std::vector<TaggedPair>& records) {
    bool any_tag = false;
    for (const auto& r : records)
        if (r.tag != SplitTag::Unassigned) any_tag = true;
    if (!any_tag)
        throw data_error("file-column split requested but the dataset has no split column");
    DatasetSplit split;
    for (const auto& r : records) {
        switch (r.tag) {
            case SplitTag::Train: split.train.push_back(r.pair); break;
            case SplitTag::Validation: split.validation.push_back(r.pair); break;
            case SplitTag::Test: split.test.push_back(r.pair); break;
            case SplitTag::Unassigned: split.unused.push_back(r.pair); break;
        }
    }
    return split;
}

DatasetSplit partition_first_n(const std::vector<TaggedPair>& records, FirstNCounts counts) {
    const std::size_t wanted = counts.train + counts.validation + counts.test;
    if (wanted > records.size())
        throw data_error("first-n split needs " + std::to_string(wanted) + " records, got " +
                         std::to_string(records.size()));
    DatasetSplit split;
    std::size_t i = 0;
    for (; i < counts.train; ++i) split.train.push_back(records[i].pair);
    for (; i < counts.train + counts.validation; ++i) split.validation.push_back(records[i].pair);
    for (; i < wanted; ++i) split.test.push_back(records[i].pair);
    for (; i < records.size(); ++i) split.unused.push_back(records[i].pair);
    return split;
}

GoldHistogram gold_histogram(const std::vector<TaggedPair>& records) {
    GoldHistogram h;
    for (const auto& r : records) {
        const double g = r.pair.gold;
        if (g == 5.0)
            ++h.top_exact;
        else
            ++h.bins[static_cast<std::size_t>(g - 1.0)];
    }
    return h;
}

}  // namespace stsim
