#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace epindex {

enum class DocType { article, review, other };

const char* doc_type_name(DocType t);
DocType parse_doc_type(const std::string& text);  // unknown labels map to other

struct PaperRecord {
    std::string paper_id;
    int year = 0;
    long long citations = 0;
    int author_count = 1;
    DocType doc_type = DocType::article;
    std::vector<std::string> institution_ids;  // empty for world-only records
};

struct YearRange {
    int first = 0;
    int last = 0;

    bool contains(int year) const { return year >= first && year <= last; }
};

// Immutable after construction; safe for concurrent reads.
struct Corpus {
    std::string field_label;
    YearRange years;
    std::vector<PaperRecord> papers;
};

struct InstitutionGroup {
    std::string group_id;
    std::vector<std::string> member_ids;
};

// Reads the corpus CSV schema
//   paper_id,year,citations,author_count,doc_type,institution_ids
// keeping exactly the well-formed rows inside `years` in file order.
// Throws malformed_row (with line number), duplicate_id, empty_corpus.
Corpus load_corpus(const std::filesystem::path& path, YearRange years,
                   const std::string& field_label);

void write_corpus_csv(std::ostream& out, const Corpus& corpus);

// Institution-group CSV: group_id,member_ids (semicolon-separated members).
std::vector<InstitutionGroup> load_groups(const std::filesystem::path& path);

struct ArticleFilter {
    Corpus corpus;
    std::size_t dropped_reviews = 0;
    std::size_t dropped_other = 0;
};

// Keeps doc_type == article only; idempotent. Throws empty_corpus when no
// articles remain.
ArticleFilter filter_articles(const Corpus& corpus);

// Records of `year` whose institution set intersects the group's members.
// A record matching several members of the same group appears once; the same
// record may appear in selections of different groups (full counting).
// Throws empty_selection when nothing matches.
Corpus select_institution(const Corpus& corpus, const InstitutionGroup& group, int year);

// All records of one year, institutional or not (world slices are computed
// over the full research-area output).
Corpus year_slice(const Corpus& corpus, int year);

}  // namespace epindex
