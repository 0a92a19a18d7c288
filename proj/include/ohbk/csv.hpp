#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "ohbk/sources.hpp"

namespace ohbk::sources {

struct CsvOptions {
  char delimiter = ',';
  bool skip_header = false;
  std::string missing_token = "?";
  // Columns to keep (0-based, in this order). Empty keeps every column not in drop_columns.
  std::vector<std::size_t> columns;
  std::vector<std::size_t> drop_columns;

  /// Breast-cancer Wisconsin layout: leading sample-ID column dropped,
  /// "?" marks a missing value.
  static CsvOptions wdbc();
};

/// Reads a delimited numeric table. Rows whose retained cells contain the
/// missing token are dropped and counted; blank lines are ignored.
/// Throws IoError if the file cannot be read and ParseError (with 1-based
/// line/column) on ragged rows or non-numeric retained cells.
DataMatrix load_csv_matrix(const std::filesystem::path& path, const CsvOptions& options = {});
DataMatrix parse_csv_matrix(std::istream& in, const CsvOptions& options = {});

}  // namespace ohbk::sources
