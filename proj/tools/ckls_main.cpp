// Command-line front end: simulation, estimation, stationary-law queries
// and the Monte Carlo table runners.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ckls/csv.hpp"
#include "ckls/diffusion.hpp"
#include "ckls/drift.hpp"
#include "ckls/mc.hpp"
#include "ckls/model.hpp"
#include "ckls/stationary.hpp"

namespace {

using namespace ckls;

void print_kv(const std::string& key, double value) {
    std::cout << key << "=" << format_double(value) << "\n";
}

void print_drift(const DriftEstimate& est) {
    std::cout << "kind=" << to_string(est.kind) << "\n";
    print_kv("a_hat", est.a_hat);
    print_kv("b_hat", est.b_hat);
    print_kv("T", est.horizon);
    print_kv("denominator", est.denominator);
}

std::vector<std::pair<double, double>> parse_pairs(const std::vector<std::string>& raw) {
    std::vector<std::pair<double, double>> out;
    for (const std::string& item : raw) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw InvalidParameter("pair '" + item + "' must look like s:t");
        }
        out.emplace_back(parse_double(item.substr(0, colon)),
                         parse_double(item.substr(colon + 1)));
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"CKLS diffusion toolkit: simulation, drift/diffusion "
                 "estimation and Monte Carlo tables"};
    app.require_subcommand(1);

    // --- simulate ---
    auto* sim = app.add_subcommand("simulate", "simulate one path to CSV");
    ModelParams params;
    double T = 10.0;
    std::uint64_t steps = 1000, seed = 0, replicate = 0;
    std::string out_file;
    sim->add_option("--a", params.a, "drift level a");
    sim->add_option("--b", params.b, "mean-reversion rate b");
    sim->add_option("--sigma", params.sigma, "diffusion scale");
    sim->add_option("--beta", params.beta, "diffusion exponent in [1/2,1)");
    sim->add_option("--r0", params.r0, "initial value");
    sim->add_option("--T", T, "horizon");
    sim->add_option("--steps", steps, "number of Euler steps");
    sim->add_option("--seed", seed, "master seed");
    sim->add_option("--replicate", replicate, "replicate index");
    sim->add_option("--out", out_file, "output CSV (t,r)")->required();

    // --- estimate drift / diffusion ---
    auto* est = app.add_subcommand("estimate", "estimate parameters from a path CSV");
    est->require_subcommand(1);

    auto* drift = est->add_subcommand("drift", "drift parameters (a, b)");
    std::string drift_input, method = "mle";
    double drift_beta = 0.0;
    std::optional<double> known_a, known_b, drift_sigma;
    drift->add_option("--input", drift_input, "path CSV")->required();
    drift->add_option("--beta", drift_beta, "known diffusion exponent")->required();
    drift->add_option("--known-a", known_a, "treat a as known, estimate b");
    drift->add_option("--known-b", known_b, "treat b as known, estimate a");
    drift->add_option("--method", method, "mle (default) or alt");
    drift->add_option("--sigma", drift_sigma, "diffusion scale (alt method only)");

    auto* diff = est->add_subcommand("diffusion", "diffusion parameters (beta, sigma^2)");
    diff->set_help_flag("--help", "print help"); // frees -h for the window option
    std::string diff_input;
    std::optional<double> diff_sigma, diff_beta;
    double probe_h = 0.015625;
    std::vector<double> probe_points;
    std::vector<std::string> probe_pairs;
    diff->add_option("--input", diff_input, "path CSV")->required();
    diff->add_option("--sigma", diff_sigma, "known sigma (enables beta1)");
    diff->add_option("--h", probe_h, "QV window length")->required();
    diff->add_option("--points", probe_points, "probe times t1,...,tm")
        ->delimiter(',');
    diff->add_option("--pairs", probe_pairs, "probe pairs s1:t1,... (enables beta2)")
        ->delimiter(',');
    diff->add_option("--beta", diff_beta, "known beta for the sigma^2 estimate");

    // --- moments / asymcov ---
    auto* mom = app.add_subcommand("moments", "stationary moment E[X^mu]");
    ModelParams mom_params;
    double mu = 1.0;
    mom->add_option("--a", mom_params.a)->required();
    mom->add_option("--b", mom_params.b)->required();
    mom->add_option("--sigma", mom_params.sigma)->required();
    mom->add_option("--beta", mom_params.beta)->required();
    mom->add_option("--mu", mu, "moment exponent")->required();

    auto* asym = app.add_subcommand("asymcov", "asymptotic covariance of the drift MLE");
    ModelParams asym_params;
    asym->add_option("--a", asym_params.a)->required();
    asym->add_option("--b", asym_params.b)->required();
    asym->add_option("--sigma", asym_params.sigma)->required();
    asym->add_option("--beta", asym_params.beta)->required();

    // --- mc ---
    auto* mc = app.add_subcommand("mc", "Monte Carlo table reproduction");
    mc->require_subcommand(1);
    auto* table1 = mc->add_subcommand("table1", "drift estimator table");
    auto* table2 = mc->add_subcommand("table2", "diffusion estimator table");
    std::string cfg1_path, cfg2_path;
    table1->add_option("--config", cfg1_path, "JSON config")->required();
    table2->add_option("--config", cfg2_path, "JSON config")->required();

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) {
        validate_params(params);
        if (params.r0 == 0.0) {
            std::cerr << "note: r0 = 0 starts on the boundary; the path leaves it "
                         "after one step but estimators using negative powers must "
                         "drop the first sample\n";
        }
        RngSpec rng;
        rng.master_seed = seed;
        const SamplePath path = simulate_path(params, T, steps, rng, replicate);
        write_path_csv(path, out_file);
        std::cout << "wrote " << path.values.size() << " points to " << out_file
                  << "\n";
        return 0;
    }

    if (drift->parsed()) {
        const SamplePath path = read_path_csv(drift_input);
        if (known_a && known_b) {
            throw InvalidParameter("--known-a and --known-b are mutually exclusive");
        }
        if (method == "alt") {
            if (!drift_sigma) {
                throw InvalidParameter("--method alt requires --sigma");
            }
            print_drift(alt_joint(path, *drift_sigma, drift_beta));
        } else if (method == "mle") {
            if (known_a) {
                print_drift(mle_b_given_a(path, *known_a, drift_beta));
            } else if (known_b) {
                print_drift(mle_a_given_b(path, *known_b, drift_beta));
            } else {
                print_drift(mle_joint(path, drift_beta));
            }
        } else {
            throw InvalidParameter("unknown --method '" + method + "'");
        }
        return 0;
    }

    if (diff->parsed()) {
        const SamplePath path = read_path_csv(diff_input);
        QvProbeConfig cfg;
        cfg.h = probe_h;
        cfg.points = probe_points;
        cfg.pairs = parse_pairs(probe_pairs);
        if (!diff_sigma && cfg.pairs.empty()) {
            throw InvalidParameter("need --sigma (beta1) or --pairs (beta2)");
        }
        std::optional<double> beta_estimate;
        if (diff_sigma) {
            const DiffusionEstimate b1 = beta_known_sigma(path, *diff_sigma, cfg);
            print_kv("beta1", b1.beta_hat);
            beta_estimate = b1.beta_hat;
        }
        if (!cfg.pairs.empty()) {
            const DiffusionEstimate b2 = beta_unknown_sigma(path, cfg);
            print_kv("beta2", b2.beta_hat);
            if (!beta_estimate) beta_estimate = b2.beta_hat;
        }
        // sigma^2 from the known beta if given, else from the estimate above.
        const std::optional<double> beta_for_sigma =
            diff_beta ? diff_beta : beta_estimate;
        if (beta_for_sigma && !cfg.points.empty()) {
            const DiffusionEstimate s2 = sigma2_known_beta(path, *beta_for_sigma, cfg);
            print_kv("sigma2", *s2.sigma2_hat);
            print_kv("sigma2_global", sigma2_global(path, *beta_for_sigma));
        }
        return 0;
    }

    if (mom->parsed()) {
        const StationaryModel model(mom_params);
        print_kv("moment", model.moment(mu));
        return 0;
    }

    if (asym->parsed()) {
        const StationaryModel model(asym_params);
        const AsymptoticCovariance cov = model.sigma_matrix();
        print_kv("sigma11", cov.sigma_matrix.m11);
        print_kv("sigma12", cov.sigma_matrix.m12);
        print_kv("sigma22", cov.sigma_matrix.m22);
        print_kv("cov_aa", cov.covariance.m11);
        print_kv("cov_ab", cov.covariance.m12);
        print_kv("cov_bb", cov.covariance.m22);
        print_kv("var_a_given_b", cov.var_a_given_b);
        print_kv("var_b_given_a", cov.var_b_given_a);
        return 0;
    }

    const bool run1 = table1->parsed();
    const McConfig cfg = load_mc_config(run1 ? cfg1_path : cfg2_path,
                                        /*diffusion_table=*/!run1);
    const McReport report = run1 ? run_drift_table(cfg) : run_diffusion_table(cfg);
    const ReportFormat format =
        cfg.format == "markdown" ? ReportFormat::markdown : ReportFormat::csv;
    write_report(report, format, cfg.out);
    std::cout << "wrote " << report.cells.size() << " cells to " << cfg.out << " ("
              << format_double(report.wall_seconds) << " s)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ckls::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
