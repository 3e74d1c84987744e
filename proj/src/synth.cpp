#include "epindex/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "epindex/errors.hpp"
#include "epindex/rng.hpp"

namespace epindex {

void SynthSpec::validate() const {
    if (years.empty()) throw Error(Errc::bad_config, "spec needs at least one year");
    if (world_n_per_year == 0 || world_components.empty())
        throw Error(Errc::bad_config, "spec needs a world population");
    auto check_components = [](const std::vector<SynthComponent>& components, bool allow_ep,
                               const char* what) {
        double weight_sum = 0.0;
        for (const auto& c : components) {
            if (!(c.weight > 0.0)) throw Error(Errc::bad_config, std::string(what) + ": weight <= 0");
            weight_sum += c.weight;
            if (c.ep.has_value()) {
                if (!allow_ep)
                    throw Error(Errc::bad_config, std::string(what) + ": ep not allowed here");
                if (!(*c.ep > 0.0 && *c.ep < 1.0))
                    throw Error(Errc::domain_error, std::string(what) + ": ep outside (0, 1)");
            } else {
                if (!c.mu.has_value() || !c.sigma.has_value())
                    throw Error(Errc::bad_config, std::string(what) + ": needs ep or mu+sigma");
                if (!(*c.sigma > 0.0))
                    throw Error(Errc::domain_error, std::string(what) + ": sigma <= 0");
            }
            if (c.author_count < 1)
                throw Error(Errc::bad_config, std::string(what) + ": author_count < 1");
        }
        if (std::fabs(weight_sum - 1.0) > 1e-9)
            throw Error(Errc::bad_config, std::string(what) + ": weights must sum to 1");
    };
    check_components(world_components, false, "world");
    if (inst_n_per_year > 0) {
        if (inst_components.empty())
            throw Error(Errc::bad_config, "institution population without components");
        check_components(inst_components, true, "institution");
    }
}

namespace {

SynthComponent parse_component(const nlohmann::json& j, double default_weight) {
    SynthComponent c;
    if (j.contains("ep")) c.ep = j.at("ep").get<double>();
    if (j.contains("mu")) c.mu = j.at("mu").get<double>();
    if (j.contains("sigma")) c.sigma = j.at("sigma").get<double>();
    c.weight = j.value("weight", default_weight);
    c.author_count = j.value("author_count", 5);
    return c;
}

}  // namespace

SynthSpec load_synth_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::bad_config, path.string() + ": " + e.what());
    }
    SynthSpec spec;
    try {
        spec.seed = j.value("seed", 0ULL);
        spec.years = j.at("years").get<std::vector<int>>();
        spec.field_label = j.value("field_label", std::string("synthetic"));
        const auto& world = j.at("world");
        spec.world_n_per_year = world.at("n_per_year").get<std::size_t>();
        if (world.contains("components")) {
            for (const auto& c : world.at("components")) {
                spec.world_components.push_back(parse_component(c, 1.0));
            }
        } else {
            spec.world_components.push_back(parse_component(world, 1.0));
        }
        if (j.contains("institution")) {
            const auto& inst = j.at("institution");
            spec.institution_id = inst.value("id", std::string("INST"));
            spec.inst_n_per_year = inst.at("n_per_year").get<std::size_t>();
            if (inst.contains("components")) {
                for (const auto& c : inst.at("components")) {
                    spec.inst_components.push_back(parse_component(c, 1.0));
                }
            } else {
                spec.inst_components.push_back(parse_component(inst, 1.0));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::bad_config, path.string() + ": " + e.what());
    }
    spec.validate();
    return spec;
}

std::vector<long long> world_citations(double mu, double sigma, std::size_t n,
                                       std::uint64_t seed) {
    if (!(sigma > 0.0)) throw Error(Errc::domain_error, "world_citations needs sigma > 0");
    if (n == 0) throw Error(Errc::domain_error, "world_citations needs n > 0");
    Rng rng(seed);
    std::vector<long long> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double draw = std::exp(rng.normal(mu, sigma));
        // Rounded to nearest, floored at zero; extreme draws saturate rather
        // than overflow llround.
        if (draw >= 9.0e18) {
            out.push_back(9'000'000'000'000'000'000LL);
        } else {
            out.push_back(std::max<long long>(std::llround(draw), 0));
        }
    }
    return out;
}

std::vector<double> sample_percentiles(double ep, std::size_t n, std::uint64_t seed) {
    if (!(ep > 0.0 && ep < 1.0))
        throw Error(Errc::domain_error, "sample_percentiles needs 0 < ep < 1");
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(n);
    const double log_ep = std::log(ep);
    for (std::size_t i = 0; i < n; ++i) {
        double u = rng.uniform_open_closed();
        out.push_back(std::pow(10.0, 2.0 - std::log(u) / log_ep));
    }
    return out;
}

Corpus make_institution(double ep, std::size_t n, const WorldIndex& world,
                        std::uint64_t seed, const std::string& institution_id,
                        int year, int author_count) {
    auto percentiles = sample_percentiles(ep, n, seed);
    Corpus selection;
    selection.field_label = "synthetic";
    selection.years = {year, year};
    selection.papers.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        PaperRecord rec;
        rec.paper_id = institution_id + "-" + std::to_string(year) + "-" + std::to_string(i);
        rec.year = year;
        rec.citations = world.quantile(percentiles[i]);
        rec.author_count = author_count;
        rec.doc_type = DocType::article;
        rec.institution_ids = {institution_id};
        selection.papers.push_back(std::move(rec));
    }
    return selection;
}

namespace {

// Largest-remainder rounding via cumulative sums: exact total, deterministic.
std::vector<std::size_t> allocate(const std::vector<SynthComponent>& components, std::size_t n) {
    std::vector<std::size_t> sizes;
    double cumulative = 0.0;
    std::size_t assigned = 0;
    for (const auto& c : components) {
        cumulative += c.weight;
        auto upto = static_cast<std::size_t>(std::llround(cumulative * static_cast<double>(n)));
        sizes.push_back(upto - assigned);
        assigned = upto;
    }
    sizes.back() += n - assigned;
    return sizes;
}

}  // namespace

Corpus generate_corpus(const SynthSpec& spec) {
    spec.validate();
    Corpus corpus;
    corpus.field_label = spec.field_label;
    auto [min_it, max_it] = std::minmax_element(spec.years.begin(), spec.years.end());
    corpus.years = {*min_it, *max_it};

    for (int year : spec.years) {
        // World populations first; the index for ep-driven institutions is
        // built from the world records of the same year.
        std::vector<long long> world_cites;
        auto world_sizes = allocate(spec.world_components, spec.world_n_per_year);
        for (std::size_t ci = 0; ci < spec.world_components.size(); ++ci) {
            const auto& comp = spec.world_components[ci];
            auto seed = derive_seed(spec.seed, year, "world/" + std::to_string(ci));
            auto cites = world_citations(*comp.mu, *comp.sigma, world_sizes[ci], seed);
            for (std::size_t i = 0; i < cites.size(); ++i) {
                PaperRecord rec;
                rec.paper_id = "W" + std::to_string(ci) + "-" + std::to_string(year) + "-" +
                               std::to_string(i);
                rec.year = year;
                rec.citations = cites[i];
                rec.author_count = comp.author_count;
                rec.doc_type = DocType::article;
                corpus.papers.push_back(std::move(rec));
                world_cites.push_back(cites[i]);
            }
        }

        if (spec.inst_n_per_year == 0) continue;
        WorldIndex world(std::move(world_cites));
        auto inst_sizes = allocate(spec.inst_components, spec.inst_n_per_year);
        for (std::size_t ci = 0; ci < spec.inst_components.size(); ++ci) {
            const auto& comp = spec.inst_components[ci];
            auto stream = spec.institution_id + "/" + std::to_string(ci);
            auto seed = derive_seed(spec.seed, year, stream);
            if (comp.ep.has_value()) {
                Corpus part = make_institution(*comp.ep, inst_sizes[ci], world, seed,
                                               spec.institution_id, year, comp.author_count);
                for (auto& rec : part.papers) {
                    rec.paper_id = "I" + std::to_string(ci) + rec.paper_id.substr(
                                       spec.institution_id.size());
                    corpus.papers.push_back(std::move(rec));
                }
            } else {
                auto cites = world_citations(*comp.mu, *comp.sigma, inst_sizes[ci], seed);
                for (std::size_t i = 0; i < cites.size(); ++i) {
                    PaperRecord rec;
                    rec.paper_id = "I" + std::to_string(ci) + "-" + std::to_string(year) + "-" +
                                   std::to_string(i);
                    rec.year = year;
                    rec.citations = cites[i];
                    rec.author_count = comp.author_count;
                    rec.doc_type = DocType::article;
                    rec.institution_ids = {spec.institution_id};
                    corpus.papers.push_back(std::move(rec));
                }
            }
        }
    }
    return corpus;
}

}  // namespace epindex
