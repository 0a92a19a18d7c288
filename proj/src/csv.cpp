#include "ohbk/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "ohbk/errors.hpp"

namespace ohbk::sources {

namespace {

struct Record {
  std::vector<std::string> fields;
  std::size_t line;  // 1-based line where the record starts
};

// RFC-4180 style reader: quoted fields may hold delimiters, doubled quotes and newlines.
class RecordReader {
 public:
  RecordReader(std::istream& in, char delimiter) : in_(in), delimiter_(delimiter) {}

  bool next(Record& record) {
    record.fields.clear();
    if (in_.peek() == std::char_traits<char>::eof()) return false;
    record.line = line_;
    std::string field;
    bool quoted = false;
    bool field_was_quoted = false;
    for (;;) {
      const int c = in_.get();
      if (c == std::char_traits<char>::eof()) {
        if (quoted) throw ParseError("unterminated quoted field", record.line, record.fields.size() + 1);
        break;
      }
      const char ch = static_cast<char>(c);
      if (quoted) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            field.push_back('"');
            in_.get();
          } else {
            quoted = false;
          }
        } else {
          if (ch == '\n') ++line_;
          field.push_back(ch);
        }
        continue;
      }
      if (ch == '"' && !field_was_quoted && trim(field).empty()) {
        field.clear();
        quoted = true;
        field_was_quoted = true;
      } else if (ch == delimiter_) {
        record.fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
      } else if (ch == '\n') {
        ++line_;
        break;
      } else if (ch != '\r') {
        field.push_back(ch);
      }
    }
    record.fields.push_back(std::move(field));
    return true;
  }

  static std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
  }

 private:
  std::istream& in_;
  char delimiter_;
  std::size_t line_ = 1;
};

bool is_blank(const Record& r) {
  return r.fields.size() == 1 && RecordReader::trim(r.fields[0]).empty();
}

std::vector<std::size_t> resolve_columns(const CsvOptions& options, std::size_t width,
                                         std::size_t line) {
  std::vector<std::size_t> keep;
  if (!options.columns.empty()) {
    keep = options.columns;
  } else {
    for (std::size_t j = 0; j < width; ++j) keep.push_back(j);
  }
  std::erase_if(keep, [&](std::size_t j) {
    return std::find(options.drop_columns.begin(), options.drop_columns.end(), j) !=
           options.drop_columns.end();
  });
  for (std::size_t j : keep) {
    if (j >= width) throw ParseError("selected column does not exist", line, j + 1);
  }
  if (keep.empty()) throw ParseError("no columns selected", line, 1);
  return keep;
}

}  // namespace

CsvOptions CsvOptions::wdbc() {
  CsvOptions options;
  options.drop_columns = {0};
  return options;
}

DataMatrix parse_csv_matrix(std::istream& in, const CsvOptions& options) {
  RecordReader reader(in, options.delimiter);
  Record record;
  bool header_pending = options.skip_header;
  std::size_t width = 0;
  std::vector<std::size_t> keep;
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t dropped = 0;

  while (reader.next(record)) {
    if (is_blank(record)) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    if (width == 0) {
      width = record.fields.size();
      keep = resolve_columns(options, width, record.line);
    } else if (record.fields.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " fields, found " +
                           std::to_string(record.fields.size()),
                       record.line, std::min(width, record.fields.size()) + 1);
    }

    bool missing = false;
    for (std::size_t j : keep) {
      if (RecordReader::trim(record.fields[j]) == options.missing_token) {
        missing = true;
        break;
      }
    }
    if (missing) {
      ++dropped;
      continue;
    }

    for (std::size_t j : keep) {
      const std::string cell = RecordReader::trim(record.fields[j]);
      double value = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, value);
      if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw ParseError("non-numeric cell '" + cell + "'", record.line, j + 1);
      }
      values.push_back(value);
    }
    ++rows;
  }
  return DataMatrix(rows, keep.size(), std::move(values), dropped);
}

DataMatrix load_csv_matrix(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  DataMatrix m = parse_csv_matrix(in, options);
  if (in.bad()) throw IoError("read failure on " + path.string());
  return m;
}

}  // namespace ohbk::sources
