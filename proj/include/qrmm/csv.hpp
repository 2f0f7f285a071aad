#pragma once

#include <string>
#include <vector>

#include "qrmm/dataset.hpp"

namespace qrmm {

/// Strictly numeric table: header row plus an n x m body with no missing
/// cells.
struct CsvTable {
  std::vector<std::string> header;
  Matrix body;
};

CsvTable read_csv(const std::string& path);

/// Builds a Dataset from a table: the named column becomes the response,
/// the remaining columns the design behind a prepended intercept column.
Dataset dataset_from_table(const CsvTable& table,
                           const std::string& response_column);

Dataset load_csv(const std::string& path, const std::string& response_column);

/// Numbers are printed at 15 significant digits so repeated runs are
/// byte-identical and paper-table comparisons stay meaningful.
std::string fmt15(double value);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Variant with a leading text column (method names, covariate names, ...).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::string>& row_labels,
               const std::vector<std::vector<double>>& rows);

}  // namespace qrmm
