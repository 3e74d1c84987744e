#pragma once

#include <map>
#include <vector>

#include "epindex/corpus.hpp"

namespace epindex {

// Tie handling for percentile ranks. With A = world papers citing strictly
// more, E = papers with equal citations (>= 1: the ranked paper counts as a
// world paper), N = world size:
//   midpoint    100 * (A + E/2) / N        (default)
//   strict      100 * (A + E) / N          (worst slot of the tie group)
//   optimistic  100 * (A + 0.5) / N        (best slot, half-slot convention)
enum class TiePolicy { midpoint, strict, optimistic };

const char* tie_policy_name(TiePolicy policy);
TiePolicy parse_tie_policy(const std::string& text);

// One year's world slice, indexed for rank and quantile queries.
class WorldIndex {
public:
    explicit WorldIndex(const Corpus& world_slice);
    explicit WorldIndex(std::vector<long long> citations);

    std::size_t size() const { return sorted_.size(); }

    // Rank in (0, 100]; smaller = more cited.
    double percentile_rank(long long citations, TiePolicy policy) const;

    // Smallest citation value whose strict lower tie edge 100*(A+E)/N reaches
    // `percentile`; equivalently the value at descending position
    // ceil(percentile * N / 100). Inverse of the rank map for sampling.
    long long quantile(double percentile) const;

private:
    std::vector<long long> sorted_;  // ascending
};

// 100 * fraction of `inst` papers whose rank against `world` is <= x.
double top_share(const Corpus& inst, const WorldIndex& world, double x, TiePolicy policy);

inline const std::vector<double> kReferencePercentiles{7.0, 10.0, 14.0, 20.0, 27.0, 35.0};

// Institutional share of the global top-x% at each reference percentile,
// averaged over years with equal weight.
struct TopShareCurve {
    std::vector<double> percentiles;
    std::vector<double> pp_values;
    std::map<int, std::size_t> n_papers_per_year;
    std::vector<int> years;
    bool low_n = false;      // some year fell below the size floor
    bool monotonic = true;   // pp non-decreasing along percentiles

    double mean_yearly_papers() const;
};

// Year keys of both maps must match (year_mismatch), every year non-empty
// (empty_year). A yearly selection below `min_n` marks the curve low_n;
// a non-monotone pp sequence clears `monotonic` (warning, not an error).
TopShareCurve top_share_curve(const std::map<int, Corpus>& inst_by_year,
                              const std::map<int, WorldIndex>& world_by_year,
                              const std::vector<double>& percentiles,
                              TiePolicy policy, std::size_t min_n = 80);

}  // namespace epindex
