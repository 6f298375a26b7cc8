#pragma once

#include <string>
#include <vector>

namespace shapereg {

// Observations with the covariate affinely rescaled to [0, 1].
struct Dataset {
    std::vector<double> x;  // rescaled
    std::vector<double> y;
    double x_min = 0.0;  // original-scale extremes
    double x_max = 1.0;

    double to_original(double t) const { return x_min * (1.0 - t) + x_max * t; }
};

// Reads a CSV with a header naming exactly the columns x and y (either
// order).  Parsing is locale-independent; non-numeric or non-finite cells
// raise InputError naming the offending row.  Needs at least 3 rows and a
// non-constant covariate.
Dataset load_csv(const std::string& path);

}  // namespace shapereg
