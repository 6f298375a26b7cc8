#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "shapereg/gibbs.hpp"

namespace shapereg {

// Everything the `fit` command needs; the CLI is a thin parser over this.
struct RunOptions {
    std::string data_path;
    std::string out_dir = ".";
    Shape shape = Shape::monotone;
    int iters = 12000;
    int burnin = 2000;
    int knots = 0;  // 0 = ceil(n/2)
    double eta = 50.0;
    bool update_hypers = false;
    double nu_lo = 0.5, nu_hi = 1.0;
    double ell_lo = 0.1, ell_hi = 1.0;
    double nu_fixed = 0.75;
    double ell_fixed = 0.0;  // 0 = data-driven default
    int test_grid = 200;
    std::uint64_t seed = 1;
    int chains = 1;
    bool save_xi = false;
    double holdout_frac = 0.0;  // >0: random holdout, MSPE reported in summary
};

struct RunArtifacts {
    std::string samples_path;
    std::string summary_path;
    std::string predict_path;
    std::optional<double> holdout_mspe;
};

// Fits the model and writes samples.csv, summary.json and predict.csv into
// out_dir.  Throws InputError for unusable input and the numerical error
// types for breakdowns; the CLI maps those to exit codes.
RunArtifacts run_fit(const RunOptions& opt);

}  // namespace shapereg
