#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "budgetpath/grid.hpp"

namespace budgetpath {

/// Header line "N h B Nb" followed by Nb blocks of N rows; row i holds the
/// values at x index i for j = 0..N-1. Values use 17 significant digits and
/// "inf" for +inf, so reading back is bit-exact.
struct FieldHeader {
  int n = 0;
  double h = 0.0;
  double max_budget = 0.0;
  int levels = 1;
};

struct FieldFile {
  FieldHeader header;
  std::vector<ScalarField> slices;
};

void write_field(std::ostream& out, const FieldHeader& header, const std::vector<ScalarField>& slices);
void write_field(std::ostream& out, const ScalarField& field, double h, double max_budget = 0.0);
void write_field_file(const std::string& path, const FieldHeader& header,
                      const std::vector<ScalarField>& slices);
void write_field_file(const std::string& path, const ScalarField& field, double h,
                      double max_budget = 0.0);

/// Throws std::runtime_error on a malformed header or a value count mismatch.
FieldFile read_field(std::istream& in);
FieldFile read_field_file(const std::string& path);

}  // namespace budgetpath
