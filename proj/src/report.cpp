#include "epindex/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "epindex/csv.hpp"
#include "epindex/errors.hpp"

namespace epindex::report {

std::string format_full(double value) {
    char buffer[32];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) throw Error(Errc::domain_error, "value not representable");
    return std::string(buffer, ptr);
}

std::string format_fixed(double value, int decimals) {
    char buffer[64];
    auto [ptr, ec] =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::fixed, decimals);
    if (ec != std::errc{}) throw Error(Errc::domain_error, "value not representable");
    return std::string(buffer, ptr);
}

nlohmann::json to_json(const EpFit& fit) {
    nlohmann::json flags = nlohmann::json::array();
    if (fit.low_n) flags.push_back("LOW_N");
    if (fit.implausible) flags.push_back("IMPLAUSIBLE");
    return {
        {"ep", fit.ep},
        {"slope", fit.slope},
        {"intercept", fit.intercept},
        {"r2_log", fit.r_squared},
        {"r2_linear", fit.r_squared_linear},
        {"chi2", fit.chi_squared},
        {"p_value", fit.p_value},
        {"n_points", fit.n_points},
        {"omitted", fit.omitted_percentiles},
        {"flags", flags},
    };
}

nlohmann::json to_json(const RatioTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        rows.push_back({{"university_id", row.university_id},
                        {"pp_top_x", row.pp_top_x},
                        {"pp4", row.pp4},
                        {"ratio", row.ratio},
                        {"excluded", row.excluded}});
    }
    nlohmann::json excluded = nlohmann::json::array();
    for (const auto& [id, reason] : table.excluded)
        excluded.push_back({{"university_id", id}, {"reason", reason}});
    return {
        {"x", table.x},
        {"mean_ratio", table.mean_ratio},
        {"sd_ratio", table.sd_ratio},
        {"sd_kind", "population"},
        {"n_included", table.n_included},
        {"rows", rows},
        {"excluded", excluded},
    };
}

nlohmann::json to_json(const MixtureDiagnostic& diagnostic, const AuthorshipProfile& profile) {
    nlohmann::json flags = nlohmann::json::array();
    if (diagnostic.mixture_suspect) flags.push_back("MIXTURE_SUSPECT");
    nlohmann::json fractions = nlohmann::json::object();
    for (const auto& f : profile.fractions)
        fractions[">" + std::to_string(f.threshold)] = f.percent;
    auto fit_json = [](const std::optional<LognormalFit>& fit) -> nlohmann::json {
        if (!fit) return nullptr;
        return {{"mu", fit->mu},
                {"sigma", fit->sigma},
                {"c_min", fit->c_min},
                {"n_used", fit->n_used},
                {"log_likelihood", fit->log_likelihood}};
    };
    return {
        {"flags", flags},
        {"fractions", fractions},
        {"mu_sigma_main", fit_json(diagnostic.main_fit)},
        {"mu_sigma_hyper", fit_json(diagnostic.hyper_fit)},
        {"fit_status", diagnostic.fit_rejected ? "rejected" : "accepted"},
        {"hyper_fraction", diagnostic.hyper_fraction},
    };
}

void write_ratio_table_csv(std::ostream& out, const RatioTable& table, bool display) {
    auto fmt = [&](double v, int decimals) {
        return display ? format_fixed(v, decimals) : format_full(v);
    };
    out << "# x=" << format_full(table.x) << " mean_ratio=" << fmt(table.mean_ratio, 2)
        << " sd_ratio=" << fmt(table.sd_ratio, 2) << " sd_kind=population"
        << " n_included=" << table.n_included << '\n';
    out << "university_id,pp_top_x,pp4,ratio,excluded\n";
    for (const auto& row : table.rows) {
        out << csv::quote(row.university_id) << ',' << fmt(row.pp_top_x, 2) << ','
            << fmt(row.pp4, 2) << ',' << fmt(row.ratio, 2) << ',' << (row.excluded ? 1 : 0)
            << '\n';
    }
    for (const auto& [id, reason] : table.excluded) {
        if (reason == "pp4 missing" || reason == "pp4 zero")
            out << "# excluded: " << id << " (" << reason << ")\n";
    }
}

void write_profile_csv(std::ostream& out, const AuthorshipProfile& profile) {
    out << "threshold,percent_exceeding\n";
    for (const auto& f : profile.fractions)
        out << f.threshold << ',' << format_full(f.percent) << '\n';
}

void write_histogram_csv(std::ostream& out, const AuthorshipProfile& profile) {
    out << "bin_low,bin_high,count\n";
    for (const auto& bin : profile.histogram) {
        out << format_full(bin.low) << ',';
        if (std::isinf(bin.high))
            out << "inf";
        else
            out << format_full(bin.high);
        out << ',' << bin.count << '\n';
    }
}

}  // namespace epindex::report
