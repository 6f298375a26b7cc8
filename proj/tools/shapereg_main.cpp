#include <cstdio>
#include <exception>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "shapereg/errors.hpp"
#include "shapereg/runner.hpp"

namespace {

// Parses "a:b" into a pair of doubles.
std::pair<double, double> parse_range(const std::string& s, const std::string& flag) {
    const auto pos = s.find(':');
    if (pos == std::string::npos)
        throw shapereg::InputError(flag + ": expected lo:hi, got '" + s + "'");
    try {
        return {std::stod(s.substr(0, pos)), std::stod(s.substr(pos + 1))};
    } catch (const std::exception&) {
        throw shapereg::InputError(flag + ": expected lo:hi, got '" + s + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian shape-constrained regression (monotone / convex)"};
    app.require_subcommand(1);

    shapereg::RunOptions opt;
    std::string shape_str = "monotone";
    std::string nu_range = "0.5:1";
    std::string ell_range = "0.1:1";

    CLI::App* fit = app.add_subcommand("fit", "fit the model to a CSV of (x, y) pairs");
    fit->add_option("--data", opt.data_path, "input CSV with columns x,y")->required();
    fit->add_option("--shape", shape_str, "monotone | monotone-decreasing | convex")
        ->check(CLI::IsMember({"monotone", "monotone-decreasing", "convex"}));
    fit->add_option("--iters", opt.iters, "total MCMC iterations");
    fit->add_option("--burnin", opt.burnin, "iterations discarded as burn-in");
    fit->add_option("--knots", opt.knots, "interior spacings N (0 = ceil(n/2))");
    fit->add_option("--eta", opt.eta, "constraint relaxation sharpness");
    fit->add_flag("--update-hypers", opt.update_hypers, "sample (nu, ell) by Metropolis");
    fit->add_option("--nu-range", nu_range, "uniform prior support for nu, as lo:hi");
    fit->add_option("--ell-range", ell_range, "uniform prior support for ell, as lo:hi");
    fit->add_option("--nu-fixed", opt.nu_fixed, "nu when hyperparameters are fixed");
    fit->add_option("--ell-fixed", opt.ell_fixed, "ell when fixed (0 = data-driven default)");
    fit->add_option("--test-grid", opt.test_grid, "number of prediction points");
    fit->add_option("--seed", opt.seed, "RNG seed");
    fit->add_option("--out-dir", opt.out_dir, "output directory");
    fit->add_option("--chains", opt.chains, "independent chains (seeds seed, seed+1, ...)");
    fit->add_flag("--save-xi", opt.save_xi, "include coefficient draws in samples.csv");
    fit->add_option("--holdout-frac", opt.holdout_frac,
                    "fraction held out for MSPE (0 = use all data)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return 2;
    }

    try {
        static const std::map<std::string, shapereg::Shape> shapes = {
            {"monotone", shapereg::Shape::monotone},
            {"monotone-decreasing", shapereg::Shape::monotone_decreasing},
            {"convex", shapereg::Shape::convex},
        };
        opt.shape = shapes.at(shape_str);
        std::tie(opt.nu_lo, opt.nu_hi) = parse_range(nu_range, "--nu-range");
        std::tie(opt.ell_lo, opt.ell_hi) = parse_range(ell_range, "--ell-range");

        const shapereg::RunArtifacts art = shapereg::run_fit(opt);
        std::printf("wrote %s\nwrote %s\nwrote %s\n", art.samples_path.c_str(),
                    art.summary_path.c_str(), art.predict_path.c_str());
        if (art.holdout_mspe) std::printf("holdout MSPE: %.6g\n", *art.holdout_mspe);
        return 0;
    } catch (const shapereg::InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const shapereg::ConditioningError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const shapereg::EmbeddingError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
