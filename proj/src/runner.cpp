#include "shapereg/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "shapereg/dataset.hpp"
#include "shapereg/diagnostics.hpp"
#include "shapereg/errors.hpp"

namespace shapereg {
namespace {

// Shortest round-trip decimal form, locale-independent.
std::string fmt(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string shape_name(Shape s) {
    switch (s) {
        case Shape::monotone: return "monotone";
        case Shape::monotone_decreasing: return "monotone-decreasing";
        case Shape::convex: return "convex";
    }
    return "?";
}

struct ScalarSummary {
    double mean, q025, q975;
};

ScalarSummary summarize(std::vector<double> v) {
    ScalarSummary s{};
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    s.q025 = sample_quantile(v, 0.025);
    s.q975 = sample_quantile(std::move(v), 0.975);
    return s;
}

nlohmann::json to_json(const ScalarSummary& s) {
    return {{"mean", s.mean}, {"q025", s.q025}, {"q975", s.q975}};
}

void write_samples_csv(const std::string& path, const std::vector<Chain>& chains,
                       bool convex, bool save_xi) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << "chain,iter,xi0";
    if (convex) out << ",xi_star";
    out << ",sigma2,tau2,nu,ell";
    if (save_xi)
        for (int j = 1; j <= chains.front().grid.size(); ++j) out << ",xi_" << j;
    out << "\n";
    for (std::size_t c = 0; c < chains.size(); ++c) {
        const Chain& ch = chains[c];
        for (std::size_t k = 0; k < ch.draws.size(); ++k) {
            const IterationRecord& r = ch.draws[k];
            out << c << ',' << (ch.config.burn_in + static_cast<int>(k)) << ',' << fmt(r.xi0);
            if (convex) out << ',' << fmt(r.xi_star);
            out << ',' << fmt(r.sigma2) << ',' << fmt(r.tau2) << ',' << fmt(r.nu) << ','
                << fmt(r.ell);
            if (save_xi)
                for (double v : r.xi) out << ',' << fmt(v);
            out << "\n";
        }
    }
}

void write_predict_csv(const std::string& path, const Dataset& ds, const Prediction& p) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << "x,mean,lower,upper\n";
    for (std::size_t i = 0; i < p.x.size(); ++i)
        out << fmt(ds.to_original(p.x[i])) << ',' << fmt(p.mean[i]) << ',' << fmt(p.lower[i])
            << ',' << fmt(p.upper[i]) << "\n";
}

}  // namespace

RunArtifacts run_fit(const RunOptions& opt) {
    if (opt.test_grid < 2) throw InputError("fit: test-grid must be >= 2");
    if (opt.chains < 1) throw InputError("fit: chains must be >= 1");
    if (opt.holdout_frac < 0.0 || opt.holdout_frac > 0.5)
        throw InputError("fit: holdout-frac must be in [0, 0.5]");

    const Dataset ds = load_csv(opt.data_path);
    const std::size_t n = ds.x.size();

    // optional random holdout for out-of-sample MSPE
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t n_hold = 0;
    if (opt.holdout_frac > 0.0) {
        n_hold = static_cast<std::size_t>(std::lround(opt.holdout_frac * static_cast<double>(n)));
        n_hold = std::min(n_hold, n - 3);
        RngStream shuffle_rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
        for (std::size_t i = n - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(shuffle_rng.uniform() * static_cast<double>(i + 1));
            std::swap(order[i], order[std::min(j, i)]);
        }
    }
    std::vector<double> xt, yt, xh, yh;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = order[k];
        if (k < n_hold) {
            xh.push_back(ds.x[i]);
            yh.push_back(ds.y[i]);
        } else {
            xt.push_back(ds.x[i]);
            yt.push_back(ds.y[i]);
        }
    }

    FitConfig config;
    config.shape = opt.shape;
    config.n_iter = opt.iters;
    config.burn_in = opt.burnin;
    config.knots = opt.knots;
    config.eta = opt.eta;
    config.update_hypers = opt.update_hypers;
    config.prior = {opt.nu_lo, opt.nu_hi, opt.ell_lo, opt.ell_hi};
    config.nu_fixed = opt.nu_fixed;
    config.ell_fixed = opt.ell_fixed;

    std::vector<Chain> chains;
    chains.reserve(static_cast<std::size_t>(opt.chains));
    for (int c = 0; c < opt.chains; ++c) {
        FitConfig cc = config;
        cc.seed = opt.seed + static_cast<std::uint64_t>(c);
        chains.push_back(run_chain(xt, yt, cc));
    }

    std::filesystem::create_directories(opt.out_dir);
    RunArtifacts art;
    art.samples_path = opt.out_dir + "/samples.csv";
    art.summary_path = opt.out_dir + "/summary.json";
    art.predict_path = opt.out_dir + "/predict.csv";

    const bool convex = opt.shape == Shape::convex;
    write_samples_csv(art.samples_path, chains, convex, opt.save_xi);

    Chain merged = merge_chains(std::move(chains));
    const FitConfig& resolved = merged.config;  // knots/ell resolved by run_chain

    std::vector<double> t_grid(static_cast<std::size_t>(opt.test_grid));
    for (int k = 0; k < opt.test_grid; ++k)
        t_grid[static_cast<std::size_t>(k)] = static_cast<double>(k) / (opt.test_grid - 1);
    const Prediction pred = predict(merged, t_grid);
    write_predict_csv(art.predict_path, ds, pred);

    if (n_hold > 0) {
        const Prediction ph = predict(merged, xh);
        art.holdout_mspe = mspe(ph.mean, yh);
    }

    const std::size_t n_draws = merged.draws.size();
    std::vector<double> col(n_draws);
    const auto column = [&](auto&& get) {
        for (std::size_t k = 0; k < n_draws; ++k) col[k] = get(merged.draws[k]);
        return col;
    };

    nlohmann::json posterior;
    posterior["xi0"] = to_json(summarize(column([](const IterationRecord& r) { return r.xi0; })));
    if (convex)
        posterior["xi_star"] =
            to_json(summarize(column([](const IterationRecord& r) { return r.xi_star; })));
    posterior["sigma2"] =
        to_json(summarize(column([](const IterationRecord& r) { return r.sigma2; })));
    posterior["tau2"] = to_json(summarize(column([](const IterationRecord& r) { return r.tau2; })));
    posterior["nu"] = to_json(summarize(column([](const IterationRecord& r) { return r.nu; })));
    posterior["ell"] = to_json(summarize(column([](const IterationRecord& r) { return r.ell; })));

    std::vector<double> times = merged.iter_seconds;
    const double total_seconds = std::accumulate(times.begin(), times.end(), 0.0);
    const double median_iter = sample_quantile(std::move(times), 0.5);

    nlohmann::json summary = {
        {"command", "fit"},
        {"data",
         {{"path", opt.data_path},
          {"n", n},
          {"n_train", xt.size()},
          {"n_holdout", n_hold},
          {"x_min", ds.x_min},
          {"x_max", ds.x_max}}},
        {"config",
         {{"shape", shape_name(opt.shape)},
          {"iters", opt.iters},
          {"burnin", opt.burnin},
          {"knots", resolved.knots},
          {"eta", opt.eta},
          {"update_hypers", opt.update_hypers},
          {"nu_range", {opt.nu_lo, opt.nu_hi}},
          {"ell_range", {opt.ell_lo, opt.ell_hi}},
          {"nu_fixed", resolved.nu_fixed},
          {"ell_fixed", resolved.ell_fixed},
          {"mh_step_frac", resolved.mh_step_frac},
          {"test_grid", opt.test_grid},
          {"seed", opt.seed},
          {"chains", opt.chains},
          {"save_xi", opt.save_xi},
          {"holdout_frac", opt.holdout_frac},
          {"fitted_on_negated_response", merged.negated}}},
        {"posterior", posterior},
        {"hyper_acceptance_rate", merged.acceptance_rate()},
        {"constraint",
         {{"coord_count", merged.constraint_coord_count},
          {"violation_frac",
           merged.constraint_coord_count
               ? static_cast<double>(merged.constraint_violation_count) /
                     static_cast<double>(merged.constraint_coord_count)
               : 0.0}}},
        {"timing", {{"median_seconds_per_iter", median_iter}, {"total_seconds", total_seconds}}},
    };
    if (art.holdout_mspe) summary["holdout_mspe"] = *art.holdout_mspe;

    std::ofstream out(art.summary_path);
    if (!out) throw InputError("cannot write '" + art.summary_path + "'");
    out << summary.dump(2) << "\n";
    return art;
}

}  // namespace shapereg
