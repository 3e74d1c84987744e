#include "epindex/percentiles.hpp"

#include <algorithm>
#include <cmath>

#include "epindex/errors.hpp"

namespace epindex {

const char* tie_policy_name(TiePolicy policy) {
    switch (policy) {
        case TiePolicy::midpoint: return "midpoint";
        case TiePolicy::strict: return "strict";
        case TiePolicy::optimistic: return "optimistic";
    }
    return "midpoint";
}

TiePolicy parse_tie_policy(const std::string& text) {
    if (text == "midpoint") return TiePolicy::midpoint;
    if (text == "strict") return TiePolicy::strict;
    if (text == "optimistic") return TiePolicy::optimistic;
    throw Error(Errc::bad_config, "unknown tie policy '" + text + "'");
}

WorldIndex::WorldIndex(const Corpus& world_slice) {
    sorted_.reserve(world_slice.papers.size());
    for (const auto& rec : world_slice.papers) sorted_.push_back(rec.citations);
    if (sorted_.empty()) throw Error(Errc::empty_world, "world slice has no papers");
    std::sort(sorted_.begin(), sorted_.end());
}

WorldIndex::WorldIndex(std::vector<long long> citations) : sorted_(std::move(citations)) {
    if (sorted_.empty()) throw Error(Errc::empty_world, "world slice has no papers");
    std::sort(sorted_.begin(), sorted_.end());
}

double WorldIndex::percentile_rank(long long citations, TiePolicy policy) const {
    auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), citations);
    auto hi = std::upper_bound(lo, sorted_.end(), citations);
    auto n = static_cast<double>(sorted_.size());
    auto above = static_cast<double>(sorted_.end() - hi);
    // The ranked paper always counts as one member of its own tie group.
    auto equal = std::max<double>(static_cast<double>(hi - lo), 1.0);
    switch (policy) {
        case TiePolicy::midpoint: return 100.0 * (above + equal / 2.0) / n;
        case TiePolicy::strict: return 100.0 * (above + equal) / n;
        case TiePolicy::optimistic: return 100.0 * (above + 0.5) / n;
    }
    return 0.0;
}

long long WorldIndex::quantile(double percentile) const {
    if (!(percentile > 0.0 && percentile <= 100.0))
        throw Error(Errc::domain_error, "quantile percentile must be in (0, 100]");
    auto n = sorted_.size();
    auto k = static_cast<std::size_t>(
        std::ceil(percentile * static_cast<double>(n) / 100.0));
    k = std::clamp<std::size_t>(k, 1, n);
    return sorted_[n - k];
}

double top_share(const Corpus& inst, const WorldIndex& world, double x, TiePolicy policy) {
    if (inst.papers.empty()) throw Error(Errc::empty_selection, "top_share of empty selection");
    if (!(x > 0.0 && x <= 100.0))
        throw Error(Errc::domain_error, "top_share percentile must be in (0, 100]");
    std::size_t qualifying = 0;
    for (const auto& rec : inst.papers) {
        if (world.percentile_rank(rec.citations, policy) <= x) ++qualifying;
    }
    return 100.0 * static_cast<double>(qualifying) / static_cast<double>(inst.papers.size());
}

double TopShareCurve::mean_yearly_papers() const {
    if (n_papers_per_year.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [year, n] : n_papers_per_year) sum += static_cast<double>(n);
    return sum / static_cast<double>(n_papers_per_year.size());
}

TopShareCurve top_share_curve(const std::map<int, Corpus>& inst_by_year,
                              const std::map<int, WorldIndex>& world_by_year,
                              const std::vector<double>& percentiles,
                              TiePolicy policy, std::size_t min_n) {
    if (inst_by_year.size() != world_by_year.size())
        throw Error(Errc::year_mismatch, "institution and world year sets differ in size");
    for (const auto& [year, corpus] : inst_by_year) {
        if (!world_by_year.contains(year))
            throw Error(Errc::year_mismatch, "no world slice for year " + std::to_string(year));
        if (corpus.papers.empty())
            throw Error(Errc::empty_year, "institution empty in year " + std::to_string(year));
    }
    if (percentiles.empty())
        throw Error(Errc::domain_error, "no percentiles requested");
    for (std::size_t i = 1; i < percentiles.size(); ++i) {
        if (!(percentiles[i] > percentiles[i - 1]))
            throw Error(Errc::domain_error, "percentiles must be strictly increasing");
    }

    TopShareCurve curve;
    curve.percentiles = percentiles;
    for (const auto& [year, corpus] : inst_by_year) {
        curve.years.push_back(year);
        curve.n_papers_per_year[year] = corpus.papers.size();
        if (corpus.papers.size() < min_n) curve.low_n = true;
    }
    // Fixed summation order: years ascending (std::map order).
    for (double x : percentiles) {
        double sum = 0.0;
        for (const auto& [year, corpus] : inst_by_year) {
            sum += top_share(corpus, world_by_year.at(year), x, policy);
        }
        curve.pp_values.push_back(sum / static_cast<double>(inst_by_year.size()));
    }
    for (std::size_t i = 1; i < curve.pp_values.size(); ++i) {
        if (curve.pp_values[i] < curve.pp_values[i - 1]) curve.monotonic = false;
    }
    return curve;
}

}  // namespace epindex
