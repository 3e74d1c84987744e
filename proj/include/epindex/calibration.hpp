#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "epindex/powerlaw.hpp"

namespace epindex {

// REF-style peer outcome for one university: one entry per unit of
// assessment, all referred to a single database paper count.
struct PeerEntry {
    std::string uoa_id;
    double outputs_submitted = 0.0;
    double pct_4star = 0.0;
};

struct PeerOutcome {
    std::string university_id;
    std::vector<PeerEntry> entries;
    double wos_total = 0.0;
    std::optional<double> pp4_printed;  // reference column when present
};

// PP(4*) as a share of the whole database-indexed production:
// 100 * sum(outputs * pct/100) / wos_total. Multi-UOA entries sum in the
// numerator against the one joint wos_total.
double pp4(const PeerOutcome& outcome);

struct UniversityAssessment {
    std::string university_id;
    double ep = 0.0;
    std::optional<double> pp4;  // absent -> excluded from ratio tables
    bool excluded = false;      // caller-imposed exclusion
    std::string exclude_reason;
};

struct RatioRow {
    std::string university_id;
    double pp_top_x = 0.0;
    double pp4 = 0.0;
    double ratio = 0.0;
    bool excluded = false;  // shown but outside mean/SD
};

struct RatioTable {
    double x = 0.0;
    std::vector<RatioRow> rows;  // descending ratio
    double mean_ratio = 0.0;     // included rows only
    double sd_ratio = 0.0;       // population SD, included rows only
    std::size_t n_included = 0;
    std::vector<std::pair<std::string, std::string>> excluded;  // id, reason
};

// Rows carry pp_top(ep, x) against pp4; universities in `exclusions`, flagged
// ones, and rows without a positive pp4 take no part in mean/SD. Throws
// empty_table when no row remains included.
RatioTable ratio_table(const std::vector<UniversityAssessment>& assessments, double x,
                       const std::set<std::string>& exclusions = {});

struct CalibrationGrid {
    double x_min = 0.1;
    double x_max = 20.0;
    double step = 0.1;
};

struct CalibrationResult {
    double x_star = 0.0;
    RatioTable table;  // evaluated at x_star
};

// Scans the grid for the x minimizing |mean ratio - 1| (ties toward smaller
// x; the mean is strictly increasing in x so bisection gives the same
// answer). Throws no_bracket when the mean is still below 1 at x_max or
// already above 1 at x_min; requires >= 2 included assessments.
CalibrationResult calibrate_x(const std::vector<UniversityAssessment>& assessments,
                              const CalibrationGrid& grid,
                              const std::set<std::string>& exclusions = {});

// Coarse scan followed by one refinement pass at step 0.01 around the
// coarse optimum.
CalibrationResult calibrate_refined(const std::vector<UniversityAssessment>& assessments,
                                    const CalibrationGrid& grid,
                                    const std::set<std::string>& exclusions = {});

struct OutlierPolicy {
    // Manual mode echoes this list (iteration 0). Otherwise the one-sided
    // z-rule: iteratively flag ratio > mean + z*SD over the remaining rows,
    // stop at a fixpoint, SD = 0 flags nothing.
    std::vector<std::string> manual_ids;
    bool automatic = false;
    double z_threshold = 1.5;
    int max_iter = 10;
};

struct OutlierFlag {
    std::string university_id;
    int iteration = 0;
};

std::vector<OutlierFlag> detect_outliers(const RatioTable& table, const OutlierPolicy& policy);

// Peer-outcome CSV: university_id,uoa_id,outputs_submitted,pct_4star,wos_total
// (wos_total repeated across a university's UOA rows; mismatch is an error).
// Extra columns are ignored except pp4_printed, kept when present.
std::vector<PeerOutcome> load_peer_outcomes(const std::filesystem::path& path);

// Assessment CSV needs university_id,ep,pp4 (pp4 may be empty); an optional
// `excluded` column (0/1) marks caller-imposed exclusions. Extra columns are
// ignored.
std::vector<UniversityAssessment> load_assessments(const std::filesystem::path& path);

}  // namespace epindex
