#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "scordant/logistic.hpp"

namespace scordant::io {

using logistic::DesignProblem;

struct Csv {
    std::vector<std::string> columns;
    MatrixXd values;
};

/// Comma-separated numeric table with a header row, '.' decimal.
Csv read_csv(const std::string& path);
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const MatrixXd& values);

/// One observation per row; the column named "y" (if present) holds +-1
/// labels, every other column is a covariate.
DesignProblem read_design_problem(const std::string& path);

/// Square numeric matrix (kernel) from a headered CSV.
MatrixXd read_matrix(const std::string& path);

nlohmann::json problem_to_json(const DesignProblem& problem);
DesignProblem problem_from_json(const nlohmann::json& j);

}  // namespace scordant::io
