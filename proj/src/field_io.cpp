#include "budgetpath/field_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "budgetpath/detail/text.hpp"

namespace budgetpath {

void write_field(std::ostream& out, const FieldHeader& header, const std::vector<ScalarField>& slices) {
  if (static_cast<int>(slices.size()) != header.levels) {
    throw std::invalid_argument("slice count does not match the header");
  }
  out << header.n << ' ' << detail::format_number(header.h) << ' '
      << detail::format_number(header.max_budget) << ' ' << header.levels << '\n';
  for (const ScalarField& f : slices) {
    if (f.rows() != header.n || f.cols() != header.n) {
      throw std::invalid_argument("field shape does not match the header");
    }
    for (int i = 0; i < header.n; ++i) {
      for (int j = 0; j < header.n; ++j) {
        if (j) out << ' ';
        out << detail::format_number(f(i, j));
      }
      out << '\n';
    }
  }
}

void write_field(std::ostream& out, const ScalarField& field, double h, double max_budget) {
  write_field(out, {static_cast<int>(field.rows()), h, max_budget, 1}, {field});
}

void write_field_file(const std::string& path, const FieldHeader& header,
                      const std::vector<ScalarField>& slices) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_field(out, header, slices);
}

void write_field_file(const std::string& path, const ScalarField& field, double h,
                      double max_budget) {
  write_field_file(path, {static_cast<int>(field.rows()), h, max_budget, 1}, {field});
}

FieldFile read_field(std::istream& in) {
  FieldFile f;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("field file: missing header");
  std::istringstream header(line);
  std::string h, b;
  if (!(header >> f.header.n >> h >> b >> f.header.levels) || f.header.n < 1 ||
      f.header.levels < 1) {
    throw std::runtime_error("field file: malformed header");
  }
  std::string extra;
  if (header >> extra) throw std::runtime_error("field file: malformed header");
  f.header.h = detail::parse_number(h);
  f.header.max_budget = detail::parse_number(b);
  const int n = f.header.n;
  std::string token;
  for (int s = 0; s < f.header.levels; ++s) {
    ScalarField field(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!(in >> token)) throw std::runtime_error("field file: too few values");
        field(i, j) = detail::parse_number(token);
      }
    }
    f.slices.push_back(std::move(field));
  }
  if (in >> token) throw std::runtime_error("field file: too many values");
  return f;
}

FieldFile read_field_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_field(in);
}

}  // namespace budgetpath
