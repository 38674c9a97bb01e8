#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ckls/diffusion.hpp"
#include "ckls/drift.hpp"
#include "ckls/model.hpp"

namespace ckls {

/// Monte Carlo experiment configuration. Defaults reproduce the reference
/// tables: baseline (a=3, b=2, sigma=1, r0=0), betas 0.5..0.9, horizons
/// 50..200 with 2^8 steps per unit time for the drift table, and the
/// reference probe layout at 2^14 steps per unit time for the diffusion
/// table.
struct McConfig {
    ModelParams baseline{3.0, 2.0, 1.0, 0.7, 0.0};
    std::vector<double> betas{0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> horizons{50.0, 100.0, 150.0, 200.0};
    int n_replicates = 100;
    double steps_per_unit = 256.0;
    QvProbeConfig probes = QvProbeConfig::reference_layout();
    RngSpec rng;
    int threads = 1;
    int retry_budget = 64;
    std::string out = "report.csv";
    std::string format = "csv";
    NoiseMode noise = NoiseMode::gaussian; // zero-noise hook, tests only
};

McConfig default_drift_config();
McConfig default_diffusion_config();

void validate_mc_config(const McConfig& cfg, bool diffusion_table);

/// Loads a flat key/value JSON config (see README for the schema);
/// missing keys fall back to the table's defaults, unknown keys are
/// rejected.
McConfig load_mc_config(const std::string& filename, bool diffusion_table);

/// Canonical JSON echo of a config (keys sorted; used as report metadata
/// and for determinism comparisons).
std::string mc_config_to_json(const McConfig& cfg);

/// One-pass mean/variance accumulator (Welford); insertion order is fixed
/// by the harness, so results do not depend on thread count.
struct RunningStat {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x);
    std::optional<double> sample_mean() const;
    std::optional<double> sample_variance() const; // n-1 normalization
    std::optional<double> sample_stddev() const;
};

/// Aggregated Monte Carlo statistics for one (estimator, beta, horizon)
/// cell. Accounting: stats.n + n_rejected equals the configured
/// replicates plus the retries consumed; nothing is dropped silently.
struct McCell {
    std::string estimator;
    double beta = 0.0;
    double horizon = 0.0;
    RunningStat stats;
    long n_rejected = 0;
    long n_retries = 0;
    bool retry_budget_exhausted = false;
};

struct McReport {
    std::vector<McCell> cells;
    std::string config_echo;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0; // metadata only; never written to CSV
};

/// Runs the drift-estimator table: for each (beta, horizon) cell and each
/// of the four estimators, n_replicates paths are simulated (one path per
/// replicate, shared across horizons as nested prefixes), estimates
/// aggregated, and rejected replicates (zero-valued or degenerate paths)
/// retried with fresh replicate indices up to retry_budget per cell.
McReport run_drift_table(const McConfig& cfg);

/// Runs the diffusion-estimator table (beta1, beta2, sigma2 per beta) on
/// paths covering just the probe horizon.
McReport run_diffusion_table(const McConfig& cfg);

enum class ReportFormat { csv, markdown };

/// CSV schema: `estimator,beta,T,mean,variance,stddev,n_effective,n_rejected`,
/// one row per cell, round-trip decimal formatting, no locale. Cells with
/// too few accepted replicates leave the undefined statistics empty.
/// Markdown mirrors the reference table layout and appends the metadata.
void write_report(const McReport& report, ReportFormat format, std::ostream& out);
void write_report(const McReport& report, ReportFormat format,
                  const std::string& filename);

/// Parses the CSV schema above back into cells (stats beyond mean,
/// variance and counts are not recoverable and are left summarized).
struct ParsedCell {
    std::string estimator;
    double beta = 0.0;
    double horizon = 0.0;
    std::optional<double> mean;
    std::optional<double> variance;
    std::optional<double> stddev;
    long n_effective = 0;
    long n_rejected = 0;
};
std::vector<ParsedCell> parse_report_csv(std::istream& in);

} // namespace ckls
