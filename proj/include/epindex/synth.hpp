#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "epindex/corpus.hpp"
#include "epindex/percentiles.hpp"

namespace epindex {

// One population in a synthetic world or institution. Institutions may be
// model-driven (ep set: percentiles drawn from the inverse of the
// PP_top law and mapped through world quantiles) or direct lognormal
// citation populations (mu/sigma set). Worlds are lognormal only.
struct SynthComponent {
    std::optional<double> ep;
    std::optional<double> mu;
    std::optional<double> sigma;
    double weight = 1.0;
    int author_count = 5;
};

struct SynthSpec {
    std::uint64_t seed = 0;
    std::vector<int> years;
    std::string field_label = "synthetic";
    std::size_t world_n_per_year = 0;
    std::vector<SynthComponent> world_components;  // lognormal populations
    std::string institution_id = "INST";
    std::size_t inst_n_per_year = 0;
    std::vector<SynthComponent> inst_components;

    void validate() const;  // throws bad_config / domain_error
};

SynthSpec load_synth_spec(const std::filesystem::path& path);

// n rounded draws of exp(N(mu, sigma^2)), floored at 0. Fixed seed gives
// identical output across runs and platforms (see rng.hpp for the pinning).
std::vector<long long> world_citations(double mu, double sigma, std::size_t n,
                                       std::uint64_t seed);

// n draws of the model percentile law: with U uniform on (0,1],
// x = 10^(2 - ln U / ln ep), so P(x <= t) = ep^(2 - lg t).
std::vector<double> sample_percentiles(double ep, std::size_t n, std::uint64_t seed);

// Synthetic institutional selection at a prescribed ep: percentiles drawn by
// sample_percentiles and mapped to citation counts through the world
// empirical quantile. Records carry `institution_id` and `author_count`.
Corpus make_institution(double ep, std::size_t n, const WorldIndex& world,
                        std::uint64_t seed, const std::string& institution_id,
                        int year, int author_count = 5);

// Full corpus for the spec: world records (untagged) plus institution
// records (tagged), every year. Component sizes are the largest-remainder
// rounding of weight * n; per-stream seeds derive from (seed, year, stream).
Corpus generate_corpus(const SynthSpec& spec);

}  // namespace epindex
