#pragma once

#include <iosfwd>
#include <vector>

#include "budgetpath/grid.hpp"

namespace budgetpath {

struct Polyline {
  std::vector<Vec2> points;
  bool closed = false;
};

/// Marching-squares level set with linear interpolation along cell edges.
/// Cells with a non-finite corner are skipped. Saddles are resolved by the
/// cell-centre average.
std::vector<Polyline> extract_contour(const ScalarField& field, double h, double level);

double polyline_length(const Polyline& line);

/// CSV rows "polyline_id,x,y" with a header line.
void write_contour_csv(std::ostream& out, const std::vector<Polyline>& lines);

}  // namespace budgetpath
