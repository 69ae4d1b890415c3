#include "scordant/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace scordant::io {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

Csv read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("read_csv: cannot open " + path);

    Csv csv;
    std::string line;
    if (!std::getline(in, line)) throw Error("read_csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    csv.columns = split(line);
    const auto width = csv.columns.size();

    std::vector<double> data;
    Eigen::Index rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != width) {
            throw Error("read_csv: ragged row in " + path);
        }
        for (const auto& cell : cells) {
            try {
                data.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw Error("read_csv: non-numeric cell '" + cell + "' in " + path);
            }
        }
        ++rows;
    }

    csv.values.resize(rows, static_cast<Eigen::Index>(width));
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < csv.values.cols(); ++j) {
            csv.values(i, j) = data[i * width + j];
        }
    }
    return csv;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const MatrixXd& values) {
    std::ofstream out(path);
    if (!out) throw Error("write_csv: cannot open " + path);
    out << std::setprecision(17);
    for (std::size_t j = 0; j < columns.size(); ++j) {
        out << (j ? "," : "") << columns[j];
    }
    out << '\n';
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            out << (j ? "," : "") << values(i, j);
        }
        out << '\n';
    }
}

DesignProblem read_design_problem(const std::string& path) {
    const Csv csv = read_csv(path);
    Eigen::Index y_col = -1;
    for (std::size_t j = 0; j < csv.columns.size(); ++j) {
        if (csv.columns[j] == "y") y_col = static_cast<Eigen::Index>(j);
    }

    DesignProblem problem;
    if (y_col < 0) {
        problem.X = csv.values;
    } else {
        problem.X.resize(csv.values.rows(), csv.values.cols() - 1);
        Eigen::Index dst = 0;
        for (Eigen::Index j = 0; j < csv.values.cols(); ++j) {
            if (j != y_col) problem.X.col(dst++) = csv.values.col(j);
        }
        problem.labels = csv.values.col(y_col);
    }
    problem.set_radius();
    problem.validate();
    return problem;
}

MatrixXd read_matrix(const std::string& path) { return read_csv(path).values; }

namespace {

nlohmann::json matrix_to_json(const MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

VectorXd vector_from_json(const nlohmann::json& j) {
    VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
    return v;
}

}  // namespace

nlohmann::json problem_to_json(const DesignProblem& problem) {
    nlohmann::json j;
    j["X"] = matrix_to_json(problem.X);
    if (problem.labels) j["y"] = std::vector<double>(problem.labels->begin(),
                                                     problem.labels->end());
    if (problem.label_prob) {
        j["prob"] = std::vector<double>(problem.label_prob->begin(),
                                        problem.label_prob->end());
    }
    if (problem.w0) {
        j["w0"] = std::vector<double>(problem.w0->begin(), problem.w0->end());
    }
    j["radius_R"] = problem.radius_R;
    j["well_specified"] = problem.well_specified;
    j["normalized"] = problem.normalized;
    return j;
}

DesignProblem problem_from_json(const nlohmann::json& j) {
    DesignProblem problem;
    const auto& x = j.at("X");
    const auto rows = static_cast<Eigen::Index>(x.size());
    const auto cols = rows > 0 ? static_cast<Eigen::Index>(x[0].size()) : 0;
    problem.X.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            problem.X(i, c) = x[i][c].get<double>();
        }
    }
    if (j.contains("y")) problem.labels = vector_from_json(j["y"]);
    if (j.contains("prob")) problem.label_prob = vector_from_json(j["prob"]);
    if (j.contains("w0")) problem.w0 = vector_from_json(j["w0"]);
    problem.well_specified = j.value("well_specified", false);
    problem.normalized = j.value("normalized", false);
    problem.radius_R = j.value("radius_R", -1.0);
    if (problem.radius_R < 0.0) problem.set_radius();
    problem.validate();
    return problem;
}

}  // namespace scordant::io
