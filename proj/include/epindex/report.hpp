#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "epindex/anomaly.hpp"
#include "epindex/calibration.hpp"
#include "epindex/powerlaw.hpp"

namespace epindex::report {

// Full precision: shortest round-trip decimal form. Display mode applies the
// table conventions (2 decimals for percents, 3 for ep, 4 for the 0.01%
// indicator) only at this layer.
std::string format_full(double value);
std::string format_fixed(double value, int decimals);

// EpFit JSON keys are part of the CLI contract:
// ep, slope, r2_log, chi2, p_value, n_points, omitted, flags.
nlohmann::json to_json(const EpFit& fit);
nlohmann::json to_json(const RatioTable& table);
nlohmann::json to_json(const MixtureDiagnostic& diagnostic,
                       const AuthorshipProfile& profile);

void write_ratio_table_csv(std::ostream& out, const RatioTable& table, bool display);
void write_profile_csv(std::ostream& out, const AuthorshipProfile& profile);
void write_histogram_csv(std::ostream& out, const AuthorshipProfile& profile);

}  // namespace epindex::report
