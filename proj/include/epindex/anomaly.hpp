#pragma once

#include <optional>
#include <vector>

#include "epindex/corpus.hpp"
#include "epindex/powerlaw.hpp"

namespace epindex {

// Author-count distribution of a selection. Fractions use strict
// "exceeding" (author_count > threshold). Histogram bins are fixed
// log-spaced: edges 10^(k/8) for k = 0..28 (1 .. ~3162) plus an open
// overflow bin, so the multi-author series is reproducible bit-exactly.
struct AuthorshipProfile {
    struct Fraction {
        int threshold = 0;
        double percent = 0.0;
    };
    struct Bin {
        double low = 0.0;
        double high = 0.0;  // +inf for the overflow bin
        std::size_t count = 0;
    };

    std::size_t total = 0;
    std::vector<Fraction> fractions;
    std::vector<Bin> histogram;

    double fraction_above(int threshold) const;  // percent, strict
};

std::vector<double> author_histogram_edges();  // the 29 fixed edges

AuthorshipProfile authorship_profile(const Corpus& selection,
                                     const std::vector<int>& thresholds = {20, 50, 100});

// Truncated-lognormal citation fit: values >= c_min, left truncation at
// c_min - 0.5 on the continuous scale (integer counts are rounded draws).
struct LognormalFit {
    double mu = 0.0;
    double sigma = 0.0;
    long long c_min = 0;
    std::size_t n_used = 0;
    double log_likelihood = 0.0;
};

// Maximizes the truncated likelihood with a pinned deterministic
// Nelder-Mead (start at the ln-moments, parameter tolerance 1e-6).
// Throws insufficient_data (< 30 retained values) and degenerate_data
// (all retained values equal).
LognormalFit fit_lognormal(const std::vector<long long>& citations, long long c_min);

struct MixtureConfig {
    double hyper_frac_threshold = 15.0;  // percent of papers with > 100 authors
    long long c_min = 3;                 // truncation for the side fits
    int main_max_authors = 30;           // "normal" population boundary
    int hyper_min_authors = 100;         // hyper population boundary (strict >)
};

// Advisory diagnostic: never mutates fits.
struct MixtureDiagnostic {
    bool mixture_suspect = false;
    bool fit_rejected = false;
    double hyper_fraction = 0.0;  // percent of papers with > 100 authors
    std::optional<LognormalFit> main_fit;   // author_count <= 30
    std::optional<LognormalFit> hyper_fit;  // author_count > 100
};

// Flags MIXTURE_SUSPECT when the power-law fit was rejected or the
// hyper-authored share reaches the threshold; attaches the two
// sub-population fits when each side has >= 30 usable papers.
MixtureDiagnostic mixture_flag(const Corpus& selection, bool fit_accepted,
                               const AuthorshipProfile& profile,
                               const MixtureConfig& config = {});

}  // namespace epindex
