#include "heavytail/dataset.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace heavytail {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no, std::size_t col) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || cell.find_first_not_of(" \t\r", used) != std::string::npos)
    throw std::runtime_error("csv line " + std::to_string(line_no) + ", column " + std::to_string(col + 1) +
                             ": not a number");
  return v;
}

std::vector<std::vector<double>> read_rows(std::istream& in, std::size_t first_line, std::size_t& width) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = first_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (width == 0) width = cells.size();
    if (cells.size() != width)
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                               " columns");
    std::vector<double> row;
    row.reserve(width);
    for (std::size_t c = 0; c < cells.size(); ++c) row.push_back(parse_cell(cells[c], line_no, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void Dataset::validate() const {
  if (X.cols() < 1) throw std::invalid_argument("dataset needs d >= 1");
  if (X.rows() != y.size()) throw std::invalid_argument("row count of X must equal length of y");
  if (!X.allFinite() || !y.allFinite()) throw std::invalid_argument("dataset has non-finite entries");
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.X.row(static_cast<Eigen::Index>(r)) = X.row(static_cast<Eigen::Index>(rows[r]));
    out.y(static_cast<Eigen::Index>(r)) = y(static_cast<Eigen::Index>(rows[r]));
  }
  out.truth = truth;
  return out;
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  for (Eigen::Index j = 0; j < data.X.cols(); ++j) out << 'x' << (j + 1) << ',';
  out << "y\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.X.cols(); ++j) out << data.X(i, j) << ',';
    out << data.y(i) << '\n';
  }
}

Dataset read_dataset_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("csv: missing header");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const auto names = split_csv(header);
  if (names.size() < 2 || names.back() != "y") throw std::runtime_error("csv line 1: header must be x1,...,xd,y");
  for (std::size_t j = 0; j + 1 < names.size(); ++j)
    if (names[j] != "x" + std::to_string(j + 1))
      throw std::runtime_error("csv line 1: expected column x" + std::to_string(j + 1));
  std::size_t width = names.size();
  const auto rows = read_rows(in, 1, width);
  Dataset data;
  const auto d = static_cast<Eigen::Index>(width - 1);
  data.X.resize(static_cast<Eigen::Index>(rows.size()), d);
  data.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) data.X(static_cast<Eigen::Index>(i), j) = rows[i][j];
    data.y(static_cast<Eigen::Index>(i)) = rows[i].back();
  }
  data.validate();
  return data;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::size_t width = 0;
  const auto rows = read_rows(in, 0, width);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

}  // namespace heavytail
