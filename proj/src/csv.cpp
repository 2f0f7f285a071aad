#include "qrmm/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qrmm {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  CsvTable table;
  for (const std::string& cell : split_row(line)) {
    table.header.push_back(strip(cell));
  }
  const std::size_t cols = table.header.size();
  if (cols == 0) throw ParseError(path + ": empty header row");

  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != cols) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(cols) + " cells, found " +
                       std::to_string(cells.size()));
    }
    std::vector<double> row(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string cell = strip(cells[c]);
      if (cell.empty()) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": column " +
                         std::to_string(c + 1) + " (" + table.header[c] +
                         ") is missing");
      }
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size()) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": column " +
                         std::to_string(c + 1) + " (" + table.header[c] +
                         "): non-numeric cell '" + cell + "'");
      }
      row[c] = value;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": no data rows");

  table.body.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      table.body(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
    }
  }
  return table;
}

Dataset dataset_from_table(const CsvTable& table,
                           const std::string& response_column) {
  Eigen::Index response = -1;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == response_column) {
      response = static_cast<Eigen::Index>(c);
      break;
    }
  }
  if (response < 0) {
    throw DomainError("response column '" + response_column + "' not found");
  }

  const Eigen::Index n = table.body.rows();
  const Eigen::Index p = table.body.cols();  // covariates + intercept
  Matrix X(n, p);
  X.col(0).setOnes();
  std::vector<std::string> names{"intercept"};
  Eigen::Index at = 1;
  for (Eigen::Index c = 0; c < p; ++c) {
    if (c == response) continue;
    X.col(at) = table.body.col(c);
    names.push_back(table.header[static_cast<std::size_t>(c)]);
    ++at;
  }
  try {
    return Dataset::create(table.body.col(response), std::move(X),
                           std::move(names));
  } catch (const RankError& e) {
    const std::size_t col = static_cast<std::size_t>(e.column());
    std::string name = col == 0 ? "intercept" : "column " + std::to_string(col);
    // Recover the original header name for the offending design column.
    std::size_t seen = 0;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (static_cast<Eigen::Index>(c) == response) continue;
      ++seen;
      if (seen == col) {
        name = table.header[c];
        break;
      }
    }
    throw RankError("design is rank deficient: '" + name +
                        "' is linearly dependent on earlier columns",
                    e.column());
  }
}

Dataset load_csv(const std::string& path, const std::string& response_column) {
  return dataset_from_table(read_csv(path), response_column);
}

std::string fmt15(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", value);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  write_csv(path, header, {}, rows);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::string>& row_labels,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out << ',';
    out << header[c];
  }
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!row_labels.empty()) out << row_labels[r] << ',';
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c) out << ',';
      out << fmt15(rows[r][c]);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace qrmm
