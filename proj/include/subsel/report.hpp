#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "subsel/bounds.hpp"
#include "subsel/linalg.hpp"
#include "subsel/selector.hpp"

namespace subsel::report {

struct MatrixData {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  ///< row-major

    friend bool operator==(const MatrixData&, const MatrixData&) = default;
};

/// CSV (plain decimals, comma-separated, one row per line, no header) or a
/// JSON object {"rows", "cols", "data"}. Throws InputError on ragged rows,
/// bad numbers or shape mismatch.
MatrixData parse_matrix(std::string_view text);
MatrixData read_matrix_file(const std::string& path);
std::string to_csv(const MatrixData& m);
MatrixData from_target(const linalg::TargetMatrix& a);
linalg::TargetMatrix to_target(const MatrixData& m);

struct SelectReport {
    std::string method = "interlacing";
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t rank = 0;
    std::vector<std::size_t> subset;
    double sigma_min = 0.0;
    double sigma_min_sq = 0.0;
    double sigma_min_target = 0.0;
    double root_certificate = 0.0;
    double bound_factor = 0.0;
    double bound_certificate = 0.0;
    double alpha = 1.0;
    std::string alpha_branch;
    double epsilon = selector::kDefaultEpsilon;
    double wall_time_ms = 0.0;
    std::vector<selector::StepTrace> trace;
    std::optional<MatrixData> matrix;

    friend bool operator==(const SelectReport&, const SelectReport&) = default;
};

SelectReport make_select_report(const linalg::TargetMatrix& a, const selector::SelectionResult& r,
                                std::string method, double wall_time_ms, bool embed_matrix);

/// Rebuilds the SelectionResult fields a verifier needs (subset, k, epsilon,
/// claimed values). Throws InputError if the subset is not valid for m columns.
selector::SelectionResult to_result(const SelectReport& report, std::size_t m);

nlohmann::json to_json(const SelectReport& r);
SelectReport select_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const bounds::BoundReport& r);
bounds::BoundReport bound_report_from_json(const nlohmann::json& j);

/// Sweep / bound CSV layout; the header is fixed.
std::string bound_csv_header();
std::string bound_csv_row(const bounds::BoundReport& r);

/// 17 significant digits.
std::string format_double(double v);

} // namespace subsel::report
