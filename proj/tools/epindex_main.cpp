// epindex: percentile-indicator toolkit for research assessment.
//
// Subcommands: epfit, evaluate, calibrate, pp4, anomaly, synth, report.
// Exit codes: 0 success, 2 input/config error, 3 fit rejected,
// 4 insufficient papers everywhere, 5 calibration bracket failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "epindex/anomaly.hpp"
#include "epindex/calibration.hpp"
#include "epindex/corpus.hpp"
#include "epindex/csv.hpp"
#include "epindex/errors.hpp"
#include "epindex/percentiles.hpp"
#include "epindex/powerlaw.hpp"
#include "epindex/report.hpp"
#include "epindex/synth.hpp"

namespace {

using namespace epindex;

struct GlobalOptions {
    std::string tie_policy = "midpoint";
    std::string percentiles = "7,10,14,20,27,35";
    std::size_t min_n = 80;
    int max_omit = 0;
    double min_r2 = 0.99;
    std::string grid = "0.1:20:0.1";
    std::string exclude;  // semicolon-separated university ids
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string format = "csv";
    std::string out;
    bool display = false;
};

std::vector<double> parse_percentiles(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) values.push_back(std::stod(item));
    }
    if (values.empty()) throw Error(Errc::bad_config, "empty percentile list");
    return values;
}

CalibrationGrid parse_grid(const std::string& text) {
    CalibrationGrid grid;
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c, ':'))
        throw Error(Errc::bad_config, "grid must be min:max:step");
    grid.x_min = std::stod(a);
    grid.x_max = std::stod(b);
    grid.step = std::stod(c);
    return grid;
}

YearRange parse_years(const std::string& text) {
    auto sep = text.find(':');
    if (sep == std::string::npos)
        throw Error(Errc::bad_config, "years must be first:last");
    YearRange years{std::stoi(text.substr(0, sep)), std::stoi(text.substr(sep + 1))};
    if (years.last < years.first) throw Error(Errc::bad_config, "years out of order");
    return years;
}

// All report output funnels through one sink so rerunning a command yields
// byte-identical bytes on stdout or in --out.
void emit(const GlobalOptions& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(g.out, std::ios::binary);
        if (!out) throw Error(Errc::io_error, "cannot write " + g.out);
        out << text;
    }
}

std::set<std::string> exclusion_set(const GlobalOptions& g) {
    auto ids = csv::split_list(g.exclude);
    return {ids.begin(), ids.end()};
}

int run_evaluate(const GlobalOptions& g, double ep, double x) {
    double top = pp_top(ep, x);
    double breakthrough = pp_top_breakthrough(ep);
    if (g.format == "json") {
        nlohmann::json j{
            {"ep", ep}, {"x", x}, {"pp_top", top}, {"pp_top_001", breakthrough}};
        emit(g, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "ep,x,pp_top,pp_top_001\n"
            << report::format_full(ep) << ',' << report::format_full(x) << ','
            << (g.display ? report::format_fixed(top, 2) : report::format_full(top)) << ','
            << (g.display ? report::format_fixed(breakthrough, 4)
                          : report::format_full(breakthrough))
            << '\n';
        emit(g, out.str());
    }
    return 0;
}

int run_pp4(const GlobalOptions& g, const std::string& peer_path) {
    auto outcomes = load_peer_outcomes(peer_path);
    if (g.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& outcome : outcomes) {
            nlohmann::json row{{"university_id", outcome.university_id},
                               {"wos_total", outcome.wos_total},
                               {"pp4", pp4(outcome)}};
            if (outcome.pp4_printed) row["pp4_printed"] = *outcome.pp4_printed;
            rows.push_back(row);
        }
        emit(g, rows.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "university_id,wos_total,pp4\n";
        for (const auto& outcome : outcomes) {
            double value = pp4(outcome);
            out << csv::quote(outcome.university_id) << ','
                << report::format_full(outcome.wos_total) << ','
                << (g.display ? report::format_fixed(value, 2) : report::format_full(value))
                << '\n';
        }
        emit(g, out.str());
    }
    return 0;
}

struct EpfitRow {
    std::string group_id;
    std::string status;  // ok | FitRejected | LowN | EmptySelection | ...
    std::optional<EpFit> fit;
    std::string detail;
};

int run_epfit(const GlobalOptions& g, const std::string& corpus_path,
              const std::string& groups_path, const std::string& institution,
              const std::string& years_text, bool keep_all_types, bool free_intercept,
              bool unweighted, bool allow_low_n) {
    auto years = parse_years(years_text);
    auto corpus = load_corpus(corpus_path, years, "cli");
    Corpus articles = keep_all_types ? corpus : filter_articles(corpus).corpus;

    std::vector<InstitutionGroup> groups;
    if (!groups_path.empty()) groups = load_groups(groups_path);
    if (!institution.empty()) groups.push_back({institution, {institution}});
    if (groups.empty())
        throw Error(Errc::bad_config, "epfit needs --groups or --institution");

    TiePolicy policy = parse_tie_policy(g.tie_policy);
    auto percentiles = parse_percentiles(g.percentiles);
    FitOptions options;
    options.fixed_intercept = !free_intercept;
    options.max_omit = g.max_omit;
    options.min_r_squared = g.min_r2;
    options.weights =
        unweighted ? FitOptions::Weights::unweighted : FitOptions::Weights::binomial;
    options.allow_low_n = allow_low_n;

    std::map<int, WorldIndex> world_by_year;
    for (int year = years.first; year <= years.last; ++year) {
        world_by_year.emplace(year, WorldIndex(year_slice(articles, year)));
    }

    std::vector<EpfitRow> rows;
    for (const auto& group : groups) {
        EpfitRow row;
        row.group_id = group.group_id;
        try {
            std::map<int, Corpus> inst_by_year;
            for (int year = years.first; year <= years.last; ++year) {
                inst_by_year.emplace(year, select_institution(articles, group, year));
            }
            auto curve = top_share_curve(inst_by_year, world_by_year, percentiles, policy,
                                         g.min_n);
            row.fit = fit_ep(curve, options);
            row.status = "ok";
        } catch (const FitRejectedError& e) {
            row.status = "FitRejected";
            row.detail = e.what();
        } catch (const Error& e) {
            row.status = errc_name(e.code());
            row.detail = e.what();
        }
        rows.push_back(std::move(row));
    }

    if (g.format == "json") {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& row : rows) {
            nlohmann::json j{{"group_id", row.group_id}, {"status", row.status}};
            if (row.fit) j["fit"] = report::to_json(*row.fit);
            if (!row.detail.empty()) j["detail"] = row.detail;
            out.push_back(j);
        }
        emit(g, out.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "group_id,status,ep,slope,r2_log,r2_linear,chi2,p_value,n_points,omitted,flags\n";
        for (const auto& row : rows) {
            out << csv::quote(row.group_id) << ',' << row.status << ',';
            if (row.fit) {
                const auto& f = *row.fit;
                auto fmt = [&](double v, int d) {
                    return g.display ? report::format_fixed(v, d) : report::format_full(v);
                };
                std::string omitted;
                for (std::size_t i = 0; i < f.omitted_percentiles.size(); ++i) {
                    if (i) omitted += ';';
                    omitted += report::format_full(f.omitted_percentiles[i]);
                }
                std::string flags;
                if (f.low_n) flags += "LOW_N";
                if (f.implausible) flags += flags.empty() ? "IMPLAUSIBLE" : ";IMPLAUSIBLE";
                out << fmt(f.ep, 3) << ',' << report::format_full(f.slope) << ','
                    << report::format_full(f.r_squared) << ','
                    << report::format_full(f.r_squared_linear) << ','
                    << report::format_full(f.chi_squared) << ','
                    << report::format_full(f.p_value) << ',' << f.n_points << ',' << omitted
                    << ',' << flags << '\n';
            } else {
                out << ",,,,,,,,\n";
            }
        }
        emit(g, out.str());
    }

    bool any_rejected = false;
    bool any_ok = false;
    for (const auto& row : rows) {
        if (row.status == "FitRejected") any_rejected = true;
        if (row.status == "ok") any_ok = true;
    }
    if (any_rejected) return 3;
    if (!any_ok) return 4;
    return 0;
}

int run_calibrate(const GlobalOptions& g, const std::string& assessments_path, bool refine) {
    auto assessments = load_assessments(assessments_path);
    auto grid = parse_grid(g.grid);
    auto exclusions = exclusion_set(g);
    auto result = refine ? calibrate_refined(assessments, grid, exclusions)
                         : calibrate_x(assessments, grid, exclusions);
    if (g.format == "json") {
        nlohmann::json j{{"x_star", result.x_star}, {"table", report::to_json(result.table)}};
        emit(g, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "# x_star=" << report::format_full(result.x_star) << '\n';
        report::write_ratio_table_csv(out, result.table, g.display);
        emit(g, out.str());
    }
    return 0;
}

int run_anomaly(const GlobalOptions& g, const std::string& corpus_path,
                const std::string& years_text, int year, const std::string& institution,
                long long c_min, double hyper_threshold, const std::string& histogram_out) {
    auto years = parse_years(years_text);
    auto corpus = load_corpus(corpus_path, years, "cli");

    Corpus selection;
    if (institution.empty()) {
        selection = year_slice(corpus, year);
        if (selection.papers.empty())
            throw Error(Errc::empty_selection, "no papers in year " + std::to_string(year));
    } else {
        selection = select_institution(corpus, {institution, {institution}}, year);
    }

    auto profile = authorship_profile(selection);

    // Diagnostics always evaluate the gate, regardless of selection size.
    TiePolicy policy = parse_tie_policy(g.tie_policy);
    bool fit_accepted = false;
    std::string fit_detail;
    try {
        std::map<int, Corpus> inst{{year, selection}};
        std::map<int, WorldIndex> world;
        world.emplace(year, WorldIndex(year_slice(corpus, year)));
        auto curve =
            top_share_curve(inst, world, parse_percentiles(g.percentiles), policy, g.min_n);
        FitOptions options;
        options.max_omit = g.max_omit;
        options.min_r_squared = g.min_r2;
        options.allow_low_n = true;
        fit_ep(curve, options);
        fit_accepted = true;
    } catch (const Error& e) {
        fit_detail = e.what();
    }

    MixtureConfig config;
    config.hyper_frac_threshold = hyper_threshold;
    config.c_min = c_min;
    auto diagnostic = mixture_flag(selection, fit_accepted, profile, config);

    nlohmann::json j = report::to_json(diagnostic, profile);
    if (!fit_detail.empty()) j["fit_detail"] = fit_detail;
    if (g.format == "json") {
        emit(g, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "# fit_status=" << (diagnostic.fit_rejected ? "rejected" : "accepted")
            << " mixture_suspect=" << (diagnostic.mixture_suspect ? 1 : 0)
            << " hyper_fraction=" << report::format_full(diagnostic.hyper_fraction) << '\n';
        report::write_profile_csv(out, profile);
        emit(g, out.str());
    }
    if (!histogram_out.empty()) {
        std::ofstream out(histogram_out, std::ios::binary);
        if (!out) throw Error(Errc::io_error, "cannot write " + histogram_out);
        report::write_histogram_csv(out, profile);
    }
    return 0;
}

int run_synth(const GlobalOptions& g, const std::string& spec_path,
              const std::string& corpus_out) {
    auto spec = load_synth_spec(spec_path);
    if (g.seed_given) spec.seed = g.seed;
    auto corpus = generate_corpus(spec);

    std::ofstream out(corpus_out, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write " + corpus_out);
    write_corpus_csv(out, corpus);

    std::map<int, std::size_t> per_year;
    for (const auto& rec : corpus.papers) per_year[rec.year] += 1;
    std::ostringstream summary;
    summary << "# seed=" << spec.seed << " years=" << spec.years.size()
            << " world_n_per_year=" << spec.world_n_per_year
            << " inst_n_per_year=" << spec.inst_n_per_year << '\n';
    summary << "year,records\n";
    for (const auto& [year, count] : per_year) summary << year << ',' << count << '\n';
    emit(g, summary.str());
    return 0;
}

int run_report(const GlobalOptions& g, const std::string& kind,
               const std::string& assessments_path, const std::string& peer_path,
               const std::string& corpus_path, const std::string& years_text, int year,
               const std::string& groups_path, double x) {
    if (kind == "pp4") {
        if (peer_path.empty()) throw Error(Errc::bad_config, "report pp4 needs --peer");
        return run_pp4(g, peer_path);
    }
    if (kind == "ratio") {
        if (assessments_path.empty())
            throw Error(Errc::bad_config, "report ratio needs --assessments");
        auto assessments = load_assessments(assessments_path);
        auto table = ratio_table(assessments, x, exclusion_set(g));
        if (g.format == "json") {
            emit(g, report::to_json(table).dump(2) + "\n");
        } else {
            std::ostringstream out;
            report::write_ratio_table_csv(out, table, g.display);
            emit(g, out.str());
        }
        return 0;
    }
    if (kind == "authors") {
        if (corpus_path.empty()) throw Error(Errc::bad_config, "report authors needs --corpus");
        auto corpus = load_corpus(corpus_path, parse_years(years_text), "cli");
        std::vector<InstitutionGroup> groups;
        if (!groups_path.empty()) groups = load_groups(groups_path);
        std::ostringstream out;
        nlohmann::json jrows = nlohmann::json::array();
        out << "university_id,total,pct_gt20,pct_gt50,pct_gt100\n";
        auto add_row = [&](const std::string& id, const Corpus& selection) {
            auto profile = authorship_profile(selection);
            if (g.format == "json") {
                jrows.push_back({{"university_id", id},
                                 {"total", profile.total},
                                 {"pct_gt20", profile.fraction_above(20)},
                                 {"pct_gt50", profile.fraction_above(50)},
                                 {"pct_gt100", profile.fraction_above(100)}});
            } else {
                auto fmt = [&](double v) {
                    return g.display ? report::format_fixed(v, 1) : report::format_full(v);
                };
                out << csv::quote(id) << ',' << profile.total << ','
                    << fmt(profile.fraction_above(20)) << ',' << fmt(profile.fraction_above(50))
                    << ',' << fmt(profile.fraction_above(100)) << '\n';
            }
        };
        if (groups.empty()) {
            add_row("all", year_slice(corpus, year));
        } else {
            for (const auto& group : groups) {
                try {
                    add_row(group.group_id, select_institution(corpus, group, year));
                } catch (const Error& e) {
                    if (e.code() != Errc::empty_selection) throw;
                }
            }
        }
        emit(g, g.format == "json" ? jrows.dump(2) + "\n" : out.str());
        return 0;
    }
    throw Error(Errc::bad_config, "unknown report kind '" + kind + "'");
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case Errc::fit_rejected: return 3;
        case Errc::no_bracket: return 5;
        default: return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"percentile-indicator toolkit for research assessment"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--tie-policy", g.tie_policy, "midpoint|strict|optimistic")
        ->capture_default_str();
    app.add_option("--percentiles", g.percentiles, "comma-separated reference percentiles")
        ->capture_default_str();
    app.add_option("--min-n", g.min_n, "yearly paper floor before low_n")
        ->capture_default_str();
    app.add_option("--max-omit", g.max_omit, "leave-k-out budget (0..2)")
        ->capture_default_str();
    app.add_option("--min-r2", g.min_r2, "log-space R^2 acceptance gate")
        ->capture_default_str();
    app.add_option("--grid", g.grid, "calibration grid min:max:step")->capture_default_str();
    app.add_option("--exclude", g.exclude, "semicolon-separated university ids");
    auto* seed_opt = app.add_option("--seed", g.seed, "generator seed override");
    app.add_option("--format", g.format, "csv|json")->capture_default_str();
    app.add_option("--out", g.out, "write the report here instead of stdout");
    app.add_flag("--display", g.display, "round CSV output for display");
    app.fallthrough();

    auto* evaluate = app.add_subcommand("evaluate", "PP_top x% and PP_top 0.01% for a given ep");
    double eval_ep = 0.1, eval_x = 10.0;
    evaluate->add_option("--ep", eval_ep, "e_p index")->required();
    evaluate->add_option("--x", eval_x, "top percentile")->capture_default_str();

    auto* pp4_cmd = app.add_subcommand("pp4", "PP(4*) from a peer-outcome CSV");
    std::string peer_path;
    pp4_cmd->add_option("--peer", peer_path, "peer-outcome CSV")->required();

    auto* epfit = app.add_subcommand("epfit", "corpus -> percentile shares -> e_p fit");
    std::string corpus_path, groups_path, institution, years_text = "2009:2012";
    bool keep_all_types = false, free_intercept = false, unweighted = false,
         allow_low_n = false;
    epfit->add_option("--corpus", corpus_path, "corpus CSV")->required();
    epfit->add_option("--groups", groups_path, "institution-group CSV");
    epfit->add_option("--institution", institution, "single institution id");
    epfit->add_option("--years", years_text, "first:last")->capture_default_str();
    epfit->add_flag("--keep-all-doc-types", keep_all_types,
                    "skip the articles-only restriction");
    epfit->add_flag("--free-intercept", free_intercept, "fit the intercept too (diagnostic)");
    epfit->add_flag("--unweighted", unweighted, "unweighted least squares");
    epfit->add_flag("--allow-low-n", allow_low_n, "fit curves below the size floor");

    auto* calibrate = app.add_subcommand("calibrate", "search x* with mean ratio 1.0");
    std::string assessments_path;
    bool refine = false;
    calibrate->add_option("--assessments", assessments_path, "university_id,ep,pp4 CSV")
        ->required();
    calibrate->add_flag("--refine", refine, "refine once at step 0.01");

    auto* anomaly = app.add_subcommand("anomaly", "authorship profile + lognormal diagnostics");
    std::string anomaly_corpus, anomaly_institution, histogram_out,
        anomaly_years = "2009:2012";
    int anomaly_year = 2012;
    long long c_min = 3;
    double hyper_threshold = 15.0;
    anomaly->add_option("--corpus", anomaly_corpus, "corpus CSV")->required();
    anomaly->add_option("--years", anomaly_years, "first:last")->capture_default_str();
    anomaly->add_option("--year", anomaly_year, "year to diagnose")->capture_default_str();
    anomaly->add_option("--institution", anomaly_institution,
                        "institution id (whole year slice when omitted)");
    anomaly->add_option("--cmin", c_min, "citation truncation for lognormal fits")
        ->capture_default_str();
    anomaly->add_option("--hyper-threshold", hyper_threshold,
                        "percent of >100-author papers that flags a mixture")
        ->capture_default_str();
    anomaly->add_option("--histogram-out", histogram_out, "author histogram CSV path");

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus from a spec");
    std::string spec_path, corpus_out;
    synth->add_option("--spec", spec_path, "SynthSpec JSON")->required();
    synth->add_option("--corpus-out", corpus_out, "corpus CSV to write")->required();

    auto* report_cmd = app.add_subcommand("report", "paper-table style reports");
    std::string report_kind, report_assessments, report_peer, report_corpus,
        report_groups, report_years = "2009:2012";
    int report_year = 2012;
    double report_x = 10.0;
    report_cmd->add_option("--kind", report_kind, "pp4|ratio|authors")->required();
    report_cmd->add_option("--assessments", report_assessments, "assessment CSV (ratio)");
    report_cmd->add_option("--peer", report_peer, "peer-outcome CSV (pp4)");
    report_cmd->add_option("--corpus", report_corpus, "corpus CSV (authors)");
    report_cmd->add_option("--groups", report_groups, "institution-group CSV (authors)");
    report_cmd->add_option("--years", report_years, "first:last")->capture_default_str();
    report_cmd->add_option("--year", report_year, "year (authors)")->capture_default_str();
    report_cmd->add_option("--x", report_x, "percentile for ratio tables")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    g.seed_given = seed_opt->count() > 0;

    try {
        if (evaluate->parsed()) return run_evaluate(g, eval_ep, eval_x);
        if (pp4_cmd->parsed()) return run_pp4(g, peer_path);
        if (epfit->parsed())
            return run_epfit(g, corpus_path, groups_path, institution, years_text,
                             keep_all_types, free_intercept, unweighted, allow_low_n);
        if (calibrate->parsed()) return run_calibrate(g, assessments_path, refine);
        if (anomaly->parsed())
            return run_anomaly(g, anomaly_corpus, anomaly_years, anomaly_year,
                               anomaly_institution, c_min, hyper_threshold, histogram_out);
        if (synth->parsed()) return run_synth(g, spec_path, corpus_out);
        if (report_cmd->parsed())
            return run_report(g, report_kind, report_assessments, report_peer, report_corpus,
                              report_years, report_year, report_groups, report_x);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
