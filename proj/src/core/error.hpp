#pragma once

#include <stdexcept>
#include <string>

namespace divkit {

// Stable error identifiers, grouped by how callers should react:
// input errors (bad files, bad arguments), numeric failures, and the
// threshold-exhausted outcome of representativeness filtering which
// still carries a usable partial result.
enum class errc {
    // file and format
    io_error,
    malformed_header,
    non_finite_value,
    size_mismatch,
    malformed_line,
    empty_sample,
    empty_corpus,
    duplicate_dataset_id,
    unparsable_cell,
    missing_performance,

    // argument validation
    dim_mismatch,
    zero_norm_vector,
    k_too_large,
    invalid_k,
    too_few_samples,
    empty_dataset,
    empty_selection,
    no_usable_samples,
    budget_too_large,
    indivisible_budget,
    profile_mismatch,
    length_mismatch,
    too_few_rows,
    invalid_spec,
    unknown_name,
    bad_option,

    // numeric
    eigen_failure,
    negative_eigenvalue,
    degenerate_variance,
    non_finite_input,

    // selection stopped early; partial result available
    threshold_exhausted,
};

enum class error_class { input, numeric, threshold_exhausted };

constexpr error_class classify(errc c) {
    switch (c) {
    case errc::eigen_failure:
    case errc::negative_eigenvalue:
    case errc::degenerate_variance:
    case errc::non_finite_input:
        return error_class::numeric;
    case errc::threshold_exhausted:
        return error_class::threshold_exhausted;
    default:
        return error_class::input;
    }
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }
    error_class cls() const { return classify(code_); }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
    throw error(code, what);
}

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::io_error: return "io_error";
    case errc::malformed_header: return "malformed_header";
    case errc::non_finite_value: return "non_finite_value";
    case errc::size_mismatch: return "size_mismatch";
    case errc::malformed_line: return "malformed_line";
    case errc::empty_sample: return "empty_sample";
    case errc::empty_corpus: return "empty_corpus";
    case errc::duplicate_dataset_id: return "duplicate_dataset_id";
    case errc::unparsable_cell: return "unparsable_cell";
    case errc::missing_performance: return "missing_performance";
    case errc::dim_mismatch: return "dim_mismatch";
    case errc::zero_norm_vector: return "zero_norm_vector";
    case errc::k_too_large: return "k_too_large";
    case errc::invalid_k: return "invalid_k";
    case errc::too_few_samples: return "too_few_samples";
    case errc::empty_dataset: return "empty_dataset";
    case errc::empty_selection: return "empty_selection";
    case errc::no_usable_samples: return "no_usable_samples";
    case errc::budget_too_large: return "budget_too_large";
    case errc::indivisible_budget: return "indivisible_budget";
    case errc::profile_mismatch: return "profile_mismatch";
    case errc::length_mismatch: return "length_mismatch";
    case errc::too_few_rows: return "too_few_rows";
    case errc::invalid_spec: return "invalid_spec";
    case errc::unknown_name: return "unknown_name";
    case errc::bad_option: return "bad_option";
    case errc::eigen_failure: return "eigen_failure";
    case errc::negative_eigenvalue: return "negative_eigenvalue";
    case errc::degenerate_variance: return "degenerate_variance";
    case errc::non_finite_input: return "non_finite_input";
    case errc::threshold_exhausted: return "threshold_exhausted";
    }
    return "unknown";
}

} // namespace divkit
