#include "epindex/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "epindex/csv.hpp"
#include "epindex/errors.hpp"
#include "epindex/stats.hpp"

namespace epindex {

double pp4(const PeerOutcome& outcome) {
    if (!(outcome.wos_total > 0.0))
        throw Error(Errc::zero_denominator, outcome.university_id + ": wos_total must be > 0");
    if (outcome.entries.empty())
        throw Error(Errc::domain_error, outcome.university_id + ": no UOA entries");
    double four_star = 0.0;
    for (const auto& e : outcome.entries) {
        if (e.outputs_submitted < 0.0 || e.pct_4star < 0.0 || e.pct_4star > 100.0)
            throw Error(Errc::negative_input, outcome.university_id + "/" + e.uoa_id);
        four_star += e.outputs_submitted * e.pct_4star / 100.0;
    }
    return 100.0 * four_star / outcome.wos_total;
}

namespace {

struct Included {
    std::vector<const UniversityAssessment*> rows;
    std::vector<std::pair<std::string, std::string>> excluded;
};

Included partition(const std::vector<UniversityAssessment>& assessments,
                   const std::set<std::string>& exclusions) {
    Included out;
    for (const auto& a : assessments) {
        if (!a.pp4.has_value()) {
            out.excluded.emplace_back(a.university_id, "pp4 missing");
        } else if (!(*a.pp4 > 0.0)) {
            out.excluded.emplace_back(a.university_id, "pp4 zero");
        } else if (a.excluded) {
            out.excluded.emplace_back(a.university_id,
                                      a.exclude_reason.empty() ? "excluded" : a.exclude_reason);
            out.rows.push_back(&a);  // shown, not averaged
        } else if (exclusions.contains(a.university_id)) {
            out.excluded.emplace_back(a.university_id, "manual exclusion");
            out.rows.push_back(&a);
        } else {
            out.rows.push_back(&a);
        }
    }
    return out;
}

double mean_ratio_at(const std::vector<const UniversityAssessment*>& rows,
                     const std::unordered_set<std::string>& excluded_ids, double x,
                     std::size_t* n_included = nullptr) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto* a : rows) {
        if (excluded_ids.contains(a->university_id)) continue;
        sum += pp_top(a->ep, x) / *a->pp4;
        ++n;
    }
    if (n_included) *n_included = n;
    if (n == 0) throw Error(Errc::empty_table, "no included assessments");
    return sum / static_cast<double>(n);
}

}  // namespace

RatioTable ratio_table(const std::vector<UniversityAssessment>& assessments, double x,
                       const std::set<std::string>& exclusions) {
    auto part = partition(assessments, exclusions);
    std::unordered_set<std::string> excluded_ids;
    for (const auto& [id, _] : part.excluded) excluded_ids.insert(id);

    RatioTable table;
    table.x = x;
    table.excluded = part.excluded;
    std::vector<double> included_ratios;
    for (const auto* a : part.rows) {
        RatioRow row;
        row.university_id = a->university_id;
        row.pp_top_x = pp_top(a->ep, x);
        row.pp4 = *a->pp4;
        row.ratio = row.pp_top_x / row.pp4;
        row.excluded = excluded_ids.contains(a->university_id);
        if (!row.excluded) included_ratios.push_back(row.ratio);
        table.rows.push_back(std::move(row));
    }
    if (included_ratios.empty()) throw Error(Errc::empty_table, "no included assessments");
    std::sort(table.rows.begin(), table.rows.end(), [](const RatioRow& a, const RatioRow& b) {
        if (a.ratio != b.ratio) return a.ratio > b.ratio;
        return a.university_id < b.university_id;
    });
    table.mean_ratio = stats::mean(included_ratios);
    table.sd_ratio = stats::population_sd(included_ratios);
    table.n_included = included_ratios.size();
    return table;
}

CalibrationResult calibrate_x(const std::vector<UniversityAssessment>& assessments,
                              const CalibrationGrid& grid,
                              const std::set<std::string>& exclusions) {
    if (!(grid.step > 0.0) || !(grid.x_min > 0.0) || !(grid.x_max > grid.x_min))
        throw Error(Errc::bad_config, "calibration grid needs x_min < x_max and step > 0");

    auto part = partition(assessments, exclusions);
    std::unordered_set<std::string> excluded_ids;
    for (const auto& [id, _] : part.excluded) excluded_ids.insert(id);
    std::size_t n_inc = 0;
    double at_min = mean_ratio_at(part.rows, excluded_ids, grid.x_min, &n_inc);
    if (n_inc < 2) throw Error(Errc::empty_table, "need >= 2 included assessments");
    double at_max = mean_ratio_at(part.rows, excluded_ids, grid.x_max);
    // The mean is strictly increasing in x, so a fixed point exists inside
    // the grid only when it straddles 1.0.
    if (at_min > 1.0)
        throw Error(Errc::no_bracket,
                    "mean ratio already " + std::to_string(at_min) + " at x_min");
    if (at_max < 1.0)
        throw Error(Errc::no_bracket, "mean ratio still " + std::to_string(at_max) + " at x_max");

    const auto steps =
        static_cast<std::size_t>(std::floor((grid.x_max - grid.x_min) / grid.step + 1e-9));
    double best_x = grid.x_min;
    double best_gap = std::fabs(at_min - 1.0);
    for (std::size_t k = 1; k <= steps; ++k) {
        double x = grid.x_min + static_cast<double>(k) * grid.step;
        if (x > 100.0) break;
        double gap = std::fabs(mean_ratio_at(part.rows, excluded_ids, x) - 1.0);
        if (gap < best_gap) {  // strict: ties resolve toward smaller x
            best_gap = gap;
            best_x = x;
        }
    }
    return {best_x, ratio_table(assessments, best_x, exclusions)};
}

CalibrationResult calibrate_refined(const std::vector<UniversityAssessment>& assessments,
                                    const CalibrationGrid& grid,
                                    const std::set<std::string>& exclusions) {
    auto coarse = calibrate_x(assessments, grid, exclusions);
    CalibrationGrid fine;
    fine.step = 0.01;
    fine.x_min = std::max(grid.x_min, coarse.x_star - grid.step);
    fine.x_max = std::min(grid.x_max, coarse.x_star + grid.step);
    try {
        return calibrate_x(assessments, fine, exclusions);
    } catch (const Error& e) {
        if (e.code() == Errc::no_bracket) return coarse;  // crossing hugs a window edge
        throw;
    }
}

std::vector<OutlierFlag> detect_outliers(const RatioTable& table, const OutlierPolicy& policy) {
    if (table.rows.empty()) throw Error(Errc::empty_table, "outlier scan on empty table");
    if (!policy.automatic) {
        std::vector<OutlierFlag> flags;
        for (const auto& id : policy.manual_ids) flags.push_back({id, 0});
        return flags;
    }

    std::vector<OutlierFlag> flags;
    std::vector<RatioRow> active(table.rows.begin(), table.rows.end());
    for (int iter = 1; iter <= policy.max_iter; ++iter) {
        std::vector<double> ratios;
        ratios.reserve(active.size());
        for (const auto& row : active) ratios.push_back(row.ratio);
        if (ratios.size() < 2) break;
        double m = stats::mean(ratios);
        double sd = stats::population_sd(ratios);
        if (sd == 0.0) break;  // all equal: nothing to flag
        double threshold = m + policy.z_threshold * sd;
        std::vector<RatioRow> rest;
        bool any = false;
        for (const auto& row : active) {
            if (row.ratio > threshold) {
                flags.push_back({row.university_id, iter});
                any = true;
            } else {
                rest.push_back(row);
            }
        }
        if (!any) break;
        active = std::move(rest);
    }
    return flags;
}

std::vector<PeerOutcome> load_peer_outcomes(const std::filesystem::path& path) {
    auto table = csv::read_file(path);
    auto uni_col = table.require("university_id");
    auto uoa_col = table.require("uoa_id");
    auto sub_col = table.require("outputs_submitted");
    auto pct_col = table.require("pct_4star");
    auto wos_col = table.require("wos_total");
    auto printed_col = table.find("pp4_printed");

    std::vector<PeerOutcome> outcomes;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        std::size_t line_no = table.line_numbers[r];
        PeerEntry entry;
        entry.uoa_id = row[uoa_col];
        try {
            entry.outputs_submitted = std::stod(row[sub_col]);
            entry.pct_4star = std::stod(row[pct_col]);
        } catch (const std::exception&) {
            throw Error(Errc::malformed_row,
                        "line " + std::to_string(line_no) + ": non-numeric peer entry");
        }
        double wos = 0.0;
        try {
            wos = std::stod(row[wos_col]);
        } catch (const std::exception&) {
            throw Error(Errc::malformed_row,
                        "line " + std::to_string(line_no) + ": non-numeric wos_total");
        }
        auto [it, inserted] = index.try_emplace(row[uni_col], outcomes.size());
        if (inserted) {
            PeerOutcome outcome;
            outcome.university_id = row[uni_col];
            outcome.wos_total = wos;
            if (printed_col && !row[*printed_col].empty())
                outcome.pp4_printed = std::stod(row[*printed_col]);
            outcomes.push_back(std::move(outcome));
        } else if (outcomes[it->second].wos_total != wos) {
            throw Error(Errc::malformed_row, "line " + std::to_string(line_no) +
                                                 ": wos_total differs across rows of '" +
                                                 row[uni_col] + "'");
        }
        outcomes[index[row[uni_col]]].entries.push_back(std::move(entry));
    }
    if (outcomes.empty()) throw Error(Errc::empty_table, path.string() + " has no rows");
    return outcomes;
}

std::vector<UniversityAssessment> load_assessments(const std::filesystem::path& path) {
    auto table = csv::read_file(path);
    auto uni_col = table.require("university_id");
    auto ep_col = table.require("ep");
    auto pp4_col = table.require("pp4");
    auto excl_col = table.find("excluded");

    std::vector<UniversityAssessment> assessments;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        UniversityAssessment a;
        a.university_id = row[uni_col];
        try {
            a.ep = std::stod(row[ep_col]);
            if (!row[pp4_col].empty()) a.pp4 = std::stod(row[pp4_col]);
        } catch (const std::exception&) {
            throw Error(Errc::malformed_row,
                        "line " + std::to_string(table.line_numbers[r]) + ": non-numeric field");
        }
        if (!(a.ep > 0.0 && a.ep < 1.0))
            throw Error(Errc::domain_error, a.university_id + ": ep outside (0, 1)");
        if (excl_col && row[*excl_col] == "1") {
            a.excluded = true;
            a.exclude_reason = "fixture exclusion";
        }
        assessments.push_back(std::move(a));
    }
    if (assessments.empty()) throw Error(Errc::empty_table, path.string() + " has no rows");
    return assessments;
}

}  // namespace epindex
