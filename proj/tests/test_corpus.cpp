#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "epindex/corpus.hpp"
#include "epindex/errors.hpp"
#include "helpers.hpp"

using namespace epindex;
using test_helpers::TempFile;

namespace {

const char* kHeader = "paper_id,year,citations,author_count,doc_type,institution_ids\n";

Corpus tiny(std::initializer_list<PaperRecord> records, YearRange years = {2009, 2012}) {
    Corpus c;
    c.field_label = "test";
    c.years = years;
    c.papers = records;
    return c;
}

}  // namespace

TEST_CASE("load_corpus keeps well-formed rows in range") {
    TempFile file(std::string(kHeader) +
                  "W1,2009,10,3,article,A;B\n"
                  "W2,2010,0,1,review,\n"
                  "W3,2012,55,2,article,C\n"
                  "W4,2015,7,1,article,\n");  // outside the range, silently dropped
    auto corpus = load_corpus(file.path(), {2009, 2012}, "chem");
    CHECK(corpus.papers.size() == 3);
    CHECK(corpus.papers[0].paper_id == "W1");
    CHECK(corpus.papers[0].institution_ids == std::vector<std::string>{"A", "B"});
    CHECK(corpus.papers[1].doc_type == DocType::review);
    CHECK(corpus.papers[1].institution_ids.empty());
    CHECK(corpus.field_label == "chem");
}

TEST_CASE("load_corpus rejects bad rows") {
    SUBCASE("negative citations") {
        TempFile file(std::string(kHeader) + "W1,2009,-1,3,article,A\n");
        CHECK_THROWS_WITH_AS(load_corpus(file.path(), {2009, 2012}, "f"),
                             doctest::Contains("citations"), Error);
    }
    SUBCASE("duplicate id") {
        TempFile file(std::string(kHeader) + "W1,2009,1,1,article,A\nW1,2010,2,1,article,B\n");
        try {
            load_corpus(file.path(), {2009, 2012}, "f");
            FAIL("expected DuplicateId");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::duplicate_id);
        }
    }
    SUBCASE("author_count below 1") {
        TempFile file(std::string(kHeader) + "W1,2009,1,0,article,A\n");
        CHECK_THROWS_AS(load_corpus(file.path(), {2009, 2012}, "f"), Error);
    }
    SUBCASE("nothing in range") {
        TempFile file(std::string(kHeader) + "W1,1999,1,1,article,A\n");
        try {
            load_corpus(file.path(), {2009, 2012}, "f");
            FAIL("expected EmptyCorpus");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::empty_corpus);
        }
    }
}

TEST_CASE("filter_articles keeps articles and reports the rest") {
    auto corpus = tiny({{"a", 2009, 5, 1, DocType::article, {}},
                        {"b", 2009, 9, 1, DocType::review, {}},
                        {"c", 2010, 2, 1, DocType::article, {}},
                        {"d", 2010, 2, 1, DocType::other, {}}});
    auto filtered = filter_articles(corpus);
    CHECK(filtered.corpus.papers.size() == 2);
    CHECK(filtered.dropped_reviews == 1);
    CHECK(filtered.dropped_other == 1);

    SUBCASE("idempotent") {
        auto twice = filter_articles(filtered.corpus);
        CHECK(twice.corpus.papers.size() == filtered.corpus.papers.size());
        CHECK(twice.dropped_reviews == 0);
    }
    SUBCASE("all-review corpus is empty") {
        auto reviews = tiny({{"r", 2009, 1, 1, DocType::review, {}}});
        try {
            filter_articles(reviews);
            FAIL("expected EmptyCorpus");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::empty_corpus);
        }
    }
}

TEST_CASE("select_institution implements full counting with in-group dedup") {
    auto corpus = tiny({{"p1", 2009, 5, 1, DocType::article, {"A", "B"}},
                        {"p2", 2009, 7, 1, DocType::article, {"A"}},
                        {"p3", 2009, 2, 1, DocType::article, {"B"}},
                        {"p4", 2010, 9, 1, DocType::article, {"A"}}});

    SUBCASE("joint group counts a shared paper once") {
        auto joint = select_institution(corpus, {"AB", {"A", "B"}}, 2009);
        CHECK(joint.papers.size() == 3);
    }
    SUBCASE("the same paper appears in each separate group") {
        auto only_a = select_institution(corpus, {"GA", {"A"}}, 2009);
        auto only_b = select_institution(corpus, {"GB", {"B"}}, 2009);
        auto in = [](const Corpus& c, const std::string& id) {
            return std::any_of(c.papers.begin(), c.papers.end(),
                               [&](const PaperRecord& r) { return r.paper_id == id; });
        };
        CHECK(in(only_a, "p1"));
        CHECK(in(only_b, "p1"));
        // Full counting can exceed the union, never undercount it.
        std::set<std::string> unioned;
        for (const auto& r : only_a.papers) unioned.insert(r.paper_id);
        for (const auto& r : only_b.papers) unioned.insert(r.paper_id);
        CHECK(only_a.papers.size() + only_b.papers.size() >= unioned.size());
    }
    SUBCASE("selection stays inside the requested year") {
        auto sel = select_institution(corpus, {"GA", {"A"}}, 2009);
        CHECK(std::all_of(sel.papers.begin(), sel.papers.end(),
                          [](const PaperRecord& r) { return r.year == 2009; }));
    }
    SUBCASE("no match") {
        try {
            select_institution(corpus, {"GC", {"C"}}, 2009);
            FAIL("expected EmptySelection");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::empty_selection);
        }
    }
}

TEST_CASE("group file loads semicolon member lists") {
    TempFile file(
        "group_id,member_ids\n"
        "edinburgh_st_andrews,University of Edinburgh;University of St Andrews\n"
        "bath,University of Bath\n");
    auto groups = load_groups(file.path());
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].member_ids.size() == 2);
    CHECK(groups[1].member_ids == std::vector<std::string>{"University of Bath"});
}

TEST_CASE("corpus csv round-trips quoted ids") {
    auto corpus = tiny({{"id,with,commas", 2009, 3, 2, DocType::article, {"X"}}});
    std::ostringstream out;
    write_corpus_csv(out, corpus);
    TempFile file(out.str());
    auto loaded = load_corpus(file.path(), {2009, 2012}, "t");
    REQUIRE(loaded.papers.size() == 1);
    CHECK(loaded.papers[0].paper_id == "id,with,commas");
    CHECK(loaded.papers[0].citations == 3);
}
