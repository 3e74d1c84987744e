#include "epindex/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <unordered_set>

#include "epindex/csv.hpp"
#include "epindex/errors.hpp"

namespace epindex {

const char* doc_type_name(DocType t) {
    switch (t) {
        case DocType::article: return "article";
        case DocType::review: return "review";
        case DocType::other: return "other";
    }
    return "other";
}

DocType parse_doc_type(const std::string& text) {
    if (text == "article") return DocType::article;
    if (text == "review") return DocType::review;
    return DocType::other;
}

namespace {

long long parse_int(const std::string& field, std::size_t line_no, const char* what,
                    long long min_value) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw Error(Errc::malformed_row,
                    "line " + std::to_string(line_no) + ": " + what + " is not an integer: '" +
                        field + "'");
    if (value < min_value)
        throw Error(Errc::malformed_row, "line " + std::to_string(line_no) + ": " + what +
                                             " must be >= " + std::to_string(min_value));
    return value;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path, YearRange years,
                   const std::string& field_label) {
    auto table = csv::read_file(path);
    auto id_col = table.require("paper_id");
    auto year_col = table.require("year");
    auto cite_col = table.require("citations");
    auto auth_col = table.require("author_count");
    auto type_col = table.require("doc_type");
    auto inst_col = table.require("institution_ids");

    Corpus corpus;
    corpus.field_label = field_label;
    corpus.years = years;
    std::unordered_set<std::string> seen;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        std::size_t line_no = table.line_numbers[r];
        PaperRecord rec;
        rec.paper_id = row[id_col];
        if (rec.paper_id.empty())
            throw Error(Errc::malformed_row, "line " + std::to_string(line_no) + ": empty paper_id");
        rec.year = static_cast<int>(parse_int(row[year_col], line_no, "year", 0));
        rec.citations = parse_int(row[cite_col], line_no, "citations", 0);
        rec.author_count = static_cast<int>(parse_int(row[auth_col], line_no, "author_count", 1));
        rec.doc_type = parse_doc_type(row[type_col]);
        rec.institution_ids = csv::split_list(row[inst_col]);
        if (!seen.insert(rec.paper_id).second)
            throw Error(Errc::duplicate_id,
                        "line " + std::to_string(line_no) + ": paper_id '" + rec.paper_id + "'");
        if (years.contains(rec.year)) corpus.papers.push_back(std::move(rec));
    }
    if (corpus.papers.empty())
        throw Error(Errc::empty_corpus, path.string() + " has no rows inside " +
                                            std::to_string(years.first) + "-" +
                                            std::to_string(years.last));
    return corpus;
}

void write_corpus_csv(std::ostream& out, const Corpus& corpus) {
    out << "paper_id,year,citations,author_count,doc_type,institution_ids\n";
    for (const auto& rec : corpus.papers) {
        std::string insts;
        for (std::size_t i = 0; i < rec.institution_ids.size(); ++i) {
            if (i) insts += ';';
            insts += rec.institution_ids[i];
        }
        out << csv::quote(rec.paper_id) << ',' << rec.year << ',' << rec.citations << ','
            << rec.author_count << ',' << doc_type_name(rec.doc_type) << ','
            << csv::quote(insts) << '\n';
    }
}

std::vector<InstitutionGroup> load_groups(const std::filesystem::path& path) {
    auto table = csv::read_file(path);
    auto id_col = table.require("group_id");
    auto members_col = table.require("member_ids");
    std::vector<InstitutionGroup> groups;
    std::unordered_set<std::string> seen;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        InstitutionGroup g;
        g.group_id = table.rows[r][id_col];
        g.member_ids = csv::split_list(table.rows[r][members_col]);
        if (g.group_id.empty() || g.member_ids.empty())
            throw Error(Errc::malformed_row, "line " + std::to_string(table.line_numbers[r]) +
                                                 ": group needs an id and members");
        if (!seen.insert(g.group_id).second)
            throw Error(Errc::duplicate_id, "group_id '" + g.group_id + "'");
        groups.push_back(std::move(g));
    }
    if (groups.empty()) throw Error(Errc::empty_corpus, path.string() + " defines no groups");
    return groups;
}

ArticleFilter filter_articles(const Corpus& corpus) {
    ArticleFilter result;
    result.corpus.field_label = corpus.field_label;
    result.corpus.years = corpus.years;
    for (const auto& rec : corpus.papers) {
        switch (rec.doc_type) {
            case DocType::article: result.corpus.papers.push_back(rec); break;
            case DocType::review: ++result.dropped_reviews; break;
            case DocType::other: ++result.dropped_other; break;
        }
    }
    if (result.corpus.papers.empty())
        throw Error(Errc::empty_corpus, "no articles remain after filtering");
    return result;
}

Corpus select_institution(const Corpus& corpus, const InstitutionGroup& group, int year) {
    std::unordered_set<std::string> members(group.member_ids.begin(), group.member_ids.end());
    Corpus selection;
    selection.field_label = corpus.field_label;
    selection.years = {year, year};
    for (const auto& rec : corpus.papers) {
        if (rec.year != year) continue;
        bool match = std::any_of(rec.institution_ids.begin(), rec.institution_ids.end(),
                                 [&](const std::string& id) { return members.contains(id); });
        if (match) selection.papers.push_back(rec);
    }
    if (selection.papers.empty())
        throw Error(Errc::empty_selection, "group '" + group.group_id + "' has no papers in " +
                                               std::to_string(year));
    return selection;
}

Corpus year_slice(const Corpus& corpus, int year) {
    Corpus slice;
    slice.field_label = corpus.field_label;
    slice.years = {year, year};
    for (const auto& rec : corpus.papers) {
        if (rec.year == year) slice.papers.push_back(rec);
    }
    return slice;
}

}  // namespace epindex
