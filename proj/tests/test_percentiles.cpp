#include <doctest.h>

#include <map>
#include <numeric>
#include <random>

#include "epindex/errors.hpp"
#include "epindex/percentiles.hpp"

using namespace epindex;

namespace {

Corpus corpus_from(const std::vector<long long>& citations, int year = 2009) {
    Corpus c;
    c.field_label = "test";
    c.years = {year, year};
    for (std::size_t i = 0; i < citations.size(); ++i) {
        c.papers.push_back({"p" + std::to_string(i), year, citations[i], 1,
                            DocType::article, {}});
    }
    return c;
}

// Independent oracle for the world-average identity: walk the distinct
// citation values and add each tie group's mass when its rank qualifies.
double world_self_share(const std::vector<long long>& world, double x, TiePolicy policy) {
    std::map<long long, std::size_t> counts;
    for (long long c : world) counts[c] += 1;
    auto n = static_cast<double>(world.size());
    double above = 0.0;
    double qualifying = 0.0;
    for (auto it = counts.rbegin(); it != counts.rend(); ++it) {
        auto equal = static_cast<double>(it->second);
        double rank = 0.0;
        switch (policy) {
            case TiePolicy::midpoint: rank = 100.0 * (above + equal / 2.0) / n; break;
            case TiePolicy::strict: rank = 100.0 * (above + equal) / n; break;
            case TiePolicy::optimistic: rank = 100.0 * (above + 0.5) / n; break;
        }
        if (rank <= x) qualifying += equal;
        above += equal;
    }
    return 100.0 * qualifying / n;
}

}  // namespace

TEST_CASE("midpoint ranks over a distinct world") {
    std::vector<long long> cites(10);
    std::iota(cites.begin(), cites.end(), 0);  // 0..9
    WorldIndex world(cites);
    CHECK(world.percentile_rank(9, TiePolicy::midpoint) == doctest::Approx(5.0));
    CHECK(world.percentile_rank(5, TiePolicy::midpoint) == doctest::Approx(45.0));
    // distinct worlds enumerate (i + 0.5) * 100 / N
    for (int i = 0; i < 10; ++i) {
        CHECK(world.percentile_rank(9 - i, TiePolicy::midpoint) ==
              doctest::Approx((i + 0.5) * 10.0));
    }
}

TEST_CASE("tied world ranks") {
    WorldIndex world(std::vector<long long>{5, 5, 5, 5});
    CHECK(world.percentile_rank(5, TiePolicy::midpoint) == doctest::Approx(50.0));
    CHECK(world.percentile_rank(5, TiePolicy::strict) == doctest::Approx(100.0));
    CHECK(world.percentile_rank(5, TiePolicy::optimistic) == doctest::Approx(12.5));
}

TEST_CASE("percentile_rank is antitone in citations for every policy") {
    std::mt19937 gen(11);
    std::uniform_int_distribution<long long> dist(0, 40);
    std::vector<long long> cites(500);
    for (auto& c : cites) c = dist(gen);
    WorldIndex world(cites);
    for (TiePolicy policy :
         {TiePolicy::midpoint, TiePolicy::strict, TiePolicy::optimistic}) {
        for (long long c = 0; c < 45; ++c) {
            CHECK(world.percentile_rank(c + 1, policy) <= world.percentile_rank(c, policy));
        }
        CHECK(world.percentile_rank(0, policy) <= 100.0);
        CHECK(world.percentile_rank(1000, policy) > 0.0);
    }
}

TEST_CASE("top_share on the 1000-paper distinct world") {
    std::vector<long long> cites(1000);
    std::iota(cites.begin(), cites.end(), 0);
    WorldIndex world(cites);
    auto inst = corpus_from({995, 950, 800, 500, 100});
    CHECK(top_share(inst, world, 10.0, TiePolicy::midpoint) == doctest::Approx(40.0));
    CHECK(top_share(inst, world, 20.0, TiePolicy::midpoint) == doctest::Approx(60.0));
    CHECK(top_share(inst, world, 100.0, TiePolicy::midpoint) == 100.0);
}

TEST_CASE("top_share ordering across tie policies and monotonicity in x") {
    std::mt19937 gen(7);
    std::uniform_int_distribution<long long> dist(0, 60);
    std::vector<long long> world_cites(800);
    for (auto& c : world_cites) c = dist(gen);
    WorldIndex world(world_cites);
    std::vector<long long> inst_cites(150);
    for (auto& c : inst_cites) c = dist(gen);
    auto inst = corpus_from(inst_cites);

    double previous = 0.0;
    for (double x : {1.0, 5.0, 10.0, 25.0, 50.0, 75.0, 100.0}) {
        double strict = top_share(inst, world, x, TiePolicy::strict);
        double mid = top_share(inst, world, x, TiePolicy::midpoint);
        double opt = top_share(inst, world, x, TiePolicy::optimistic);
        CHECK(strict <= mid);
        CHECK(mid <= opt);
        CHECK(mid >= previous);
        previous = mid;
    }
}

TEST_CASE("world drawn as its own institution tracks the percentile line") {
    std::mt19937 gen(3);
    std::uniform_int_distribution<long long> dist(0, 30);  // coarse ties on purpose
    std::vector<long long> cites(2000);
    for (auto& c : cites) c = dist(gen);
    WorldIndex world(cites);
    auto inst = corpus_from(cites);
    for (TiePolicy policy : {TiePolicy::midpoint, TiePolicy::strict, TiePolicy::optimistic}) {
        for (double x : kReferencePercentiles) {
            CHECK(top_share(inst, world, x, policy) ==
                  doctest::Approx(world_self_share(cites, x, policy)).epsilon(1e-12));
        }
    }
}

TEST_CASE("quantile inverts the strict lower tie edge") {
    WorldIndex world(std::vector<long long>{1, 1, 2, 5, 5, 5, 9, 12, 12, 20});
    CHECK(world.quantile(100.0) == 1);   // the whole world qualifies
    CHECK(world.quantile(0.001) == 20);  // deeper than the top paper: max value
    CHECK(world.quantile(10.0) == 20);
    CHECK(world.quantile(30.0) == 12);
    // monotone: smaller percentile never maps to a smaller citation count
    long long previous = world.quantile(0.5);
    for (double p = 1.0; p <= 100.0; p += 0.5) {
        long long value = world.quantile(p);
        CHECK(value <= previous);
        previous = value;
    }
}

TEST_CASE("top_share_curve averages years with equal weight") {
    // year A: world 0..9 distinct, inst {9} -> share(10) = 100 at x >= 5
    std::vector<long long> base(10);
    std::iota(base.begin(), base.end(), 0);
    std::map<int, WorldIndex> world;
    world.emplace(2009, WorldIndex(base));
    world.emplace(2010, WorldIndex(base));
    std::map<int, Corpus> inst;
    inst.emplace(2009, corpus_from({9, 0}, 2009));   // shares: 50 at x=10
    inst.emplace(2010, corpus_from({9, 9}, 2010));   // shares: 100 at x=10

    auto curve = top_share_curve(inst, world, {10.0, 50.0}, TiePolicy::midpoint, 1);
    CHECK(curve.pp_values[0] == doctest::Approx(75.0));  // mean of 50 and 100
    CHECK(curve.years == std::vector<int>{2009, 2010});
    CHECK(curve.n_papers_per_year.at(2009) == 2);
    CHECK_FALSE(curve.low_n);
    CHECK(curve.monotonic);

    SUBCASE("single year curve equals that year's shares") {
        std::map<int, Corpus> one;
        one.emplace(2009, corpus_from({9, 0}, 2009));
        std::map<int, WorldIndex> one_world;
        one_world.emplace(2009, WorldIndex(base));
        auto single = top_share_curve(one, one_world, {10.0, 50.0}, TiePolicy::midpoint, 1);
        CHECK(single.pp_values[0] == doctest::Approx(50.0));
    }
    SUBCASE("year mismatch") {
        std::map<int, Corpus> extra = inst;
        extra.emplace(2011, corpus_from({1}, 2011));
        try {
            top_share_curve(extra, world, {10.0}, TiePolicy::midpoint, 1);
            FAIL("expected YearMismatch");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::year_mismatch);
        }
    }
    SUBCASE("low_n flag below the floor") {
        auto flagged = top_share_curve(inst, world, {10.0}, TiePolicy::midpoint, 80);
        CHECK(flagged.low_n);
    }
    SUBCASE("linearity of the yearly average") {
        // shares 50 and 100 -> 75; dropping the 2010 papers to one zero-cite
        // paper scales year-2010 share to 0 at x=10 -> mean 25
        std::map<int, Corpus> scaled;
        scaled.emplace(2009, corpus_from({9, 0}, 2009));
        scaled.emplace(2010, corpus_from({0}, 2010));
        auto curve2 = top_share_curve(scaled, world, {10.0}, TiePolicy::midpoint, 1);
        CHECK(curve2.pp_values[0] == doctest::Approx(25.0));
    }
}

TEST_CASE("empty world is an error") {
    CHECK_THROWS_AS(WorldIndex(std::vector<long long>{}), Error);
}
