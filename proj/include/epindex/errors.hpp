#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace epindex {

// Every failure condition named by a module contract maps to exactly one code.
enum class Errc {
    malformed_row,
    duplicate_id,
    empty_corpus,
    empty_selection,
    empty_world,
    year_mismatch,
    empty_year,
    fit_rejected,
    insufficient_points,
    non_positive_share,
    low_n,
    domain_error,
    zero_denominator,
    negative_input,
    empty_table,
    no_bracket,
    insufficient_data,
    degenerate_data,
    io_error,
    bad_config,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

// Carries the best goodness-of-fit achieved so callers can report why the
// power-law gate fired.
class FitRejectedError : public Error {
public:
    FitRejectedError(const std::string& what, double best_r_squared,
                     std::vector<double> omitted)
        : Error(Errc::fit_rejected, what),
          best_r_squared_(best_r_squared),
          omitted_(std::move(omitted)) {}

    double best_r_squared() const { return best_r_squared_; }
    const std::vector<double>& omitted_percentiles() const { return omitted_; }

private:
    double best_r_squared_;
    std::vector<double> omitted_;
};

}  // namespace epindex
