#include "epindex/errors.hpp"

namespace epindex {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::malformed_row: return "MalformedRow";
        case Errc::duplicate_id: return "DuplicateId";
        case Errc::empty_corpus: return "EmptyCorpus";
        case Errc::empty_selection: return "EmptySelection";
        case Errc::empty_world: return "EmptyWorld";
        case Errc::year_mismatch: return "YearMismatch";
        case Errc::empty_year: return "EmptyYear";
        case Errc::fit_rejected: return "FitRejected";
        case Errc::insufficient_points: return "InsufficientPoints";
        case Errc::non_positive_share: return "NonPositiveShare";
        case Errc::low_n: return "LowN";
        case Errc::domain_error: return "DomainError";
        case Errc::zero_denominator: return "ZeroDenominator";
        case Errc::negative_input: return "NegativeInput";
        case Errc::empty_table: return "EmptyTable";
        case Errc::no_bracket: return "NoBracket";
        case Errc::insufficient_data: return "InsufficientData";
        case Errc::degenerate_data: return "DegenerateData";
        case Errc::io_error: return "IoError";
        case Errc::bad_config: return "BadConfig";
    }
    return "Error";
}

}  // namespace epindex
