#include "ckls/mc.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ckls/csv.hpp"

namespace ckls {

namespace {

using json = nlohmann::json;

void parallel_for(std::size_t n_tasks, int threads,
                  const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || n_tasks <= 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_tasks) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min<int>(threads, static_cast<int>(n_tasks));
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

// Stream key layout: table tag | beta index | attempt counter. Every
// attempt anywhere in a run draws from its own derived stream.
std::uint64_t stream_key(std::uint64_t table, std::size_t beta_idx,
                         std::uint64_t attempt) {
    return (table << 56) | (static_cast<std::uint64_t>(beta_idx) << 40) | attempt;
}

struct Outcome {
    bool accepted = false;
    double value = 0.0;
};

Outcome rejected() { return Outcome{false, 0.0}; }
Outcome accepted(double v) { return Outcome{true, v}; }

bool has_nonpositive_value(const SamplePath& path) {
    for (double v : path.values) {
        if (!(v > 0.0)) return true;
    }
    return false;
}

// Drops the initial grid point when it is the r0 = 0 start; the SDE's
// drift leaves zero immediately, so the t = 0 sample is the only
// observation the positive-path estimators cannot digest.
SamplePath drift_ready_path(SamplePath path) {
    if (!path.values.empty() && path.values[0] == 0.0 && path.values.size() > 2) {
        return path.without_front(1);
    }
    return path;
}

std::size_t points_for_horizon(double horizon, double steps_per_unit,
                               std::size_t available) {
    const auto steps = static_cast<std::size_t>(std::llround(horizon * steps_per_unit));
    return std::min(steps + 1, available);
}

// A cell's per-replicate evaluator: returns the accepted value or a
// rejection for the path-level error conditions; anything else is a
// configuration bug and propagates.
template <typename Fn>
Outcome evaluate_guarded(const Fn& fn) {
    try {
        return accepted(fn());
    } catch (const ZeroValueNegativePower&) {
        return rejected();
    } catch (const DegenerateDenominator&) {
        return rejected();
    } catch (const ZeroQvIncrement&) {
        return rejected();
    } catch (const LogDenominatorNearZero&) {
        return rejected();
    }
}

// Pairs an estimator label with the function extracting its value from a
// path; the generic runner below handles simulation, retries and
// aggregation for both tables.
struct CellSpec {
    std::string label;
    double horizon;                // reported T
    double sim_horizon;            // simulated length for retries
    std::size_t prefix_points;     // prefix of the shared base path
    std::function<Outcome(const SamplePath&)> eval;
};

struct GroupResult {
    std::vector<McCell> cells;
};

// Runs one beta group: a base round of n_replicates shared paths, then
// per-cell retry rounds with freshly indexed paths. All aggregation
// happens sequentially in replicate order, so thread count cannot change
// any result.
GroupResult run_beta_group(const McConfig& cfg, std::uint64_t table_tag,
                           std::size_t beta_idx, double beta,
                           double base_sim_horizon, bool trim_leading_zero,
                           const std::vector<CellSpec>& specs) {
    ModelParams params = cfg.baseline;
    params.beta = beta;
    validate_params(params);

    const auto n = static_cast<std::size_t>(cfg.n_replicates);
    // One extra step when the initial sample will be trimmed, so every
    // evaluation window still spans its full nominal horizon.
    const std::size_t extra = trim_leading_zero ? 1 : 0;
    auto sim_steps = [&](double horizon) {
        return static_cast<std::size_t>(std::llround(horizon * cfg.steps_per_unit)) +
               extra;
    };
    auto sim_span = [&](double horizon) {
        return static_cast<double>(sim_steps(horizon)) / cfg.steps_per_unit;
    };

    // Base round: one path per replicate, every cell evaluated on it.
    std::vector<std::vector<Outcome>> base(n, std::vector<Outcome>(specs.size()));
    parallel_for(n, cfg.threads, [&](std::size_t slot) {
        const std::uint64_t key = stream_key(table_tag, beta_idx, slot);
        SamplePath path = simulate_path(params, sim_span(base_sim_horizon),
                                        sim_steps(base_sim_horizon), cfg.rng, key,
                                        cfg.noise);
        if (trim_leading_zero) path = drift_ready_path(std::move(path));
        for (std::size_t c = 0; c < specs.size(); ++c) {
            const SamplePath prefix =
                path.prefix(std::min(specs[c].prefix_points, path.values.size()));
            base[slot][c] = specs[c].eval(prefix);
        }
    });

    GroupResult out;
    out.cells.reserve(specs.size());
    std::vector<long> pending(specs.size(), 0);
    for (std::size_t c = 0; c < specs.size(); ++c) {
        McCell cell;
        cell.estimator = specs[c].label;
        cell.beta = beta;
        cell.horizon = specs[c].horizon;
        for (std::size_t slot = 0; slot < n; ++slot) {
            if (base[slot][c].accepted) {
                cell.stats.add(base[slot][c].value);
            } else {
                ++cell.n_rejected;
                ++pending[c];
            }
        }
        out.cells.push_back(std::move(cell));
    }

    // Retry rounds: fresh attempt indices, allocated cell-major so the
    // stream assignment is deterministic.
    std::uint64_t next_attempt = n;
    std::vector<long> budget_left(specs.size(), cfg.retry_budget);
    struct Task {
        std::size_t cell;
        std::uint64_t attempt;
        Outcome result;
    };
    while (true) {
        std::vector<Task> tasks;
        for (std::size_t c = 0; c < specs.size(); ++c) {
            const long k = std::min(pending[c], budget_left[c]);
            for (long j = 0; j < k; ++j) tasks.push_back({c, next_attempt++, {}});
            budget_left[c] -= k;
            pending[c] -= k;
            if (pending[c] > 0 && budget_left[c] == 0) {
                out.cells[c].retry_budget_exhausted = true;
                pending[c] = 0;
            }
        }
        if (tasks.empty()) break;

        parallel_for(tasks.size(), cfg.threads, [&](std::size_t i) {
            const CellSpec& spec = specs[tasks[i].cell];
            const std::uint64_t key = stream_key(table_tag, beta_idx, tasks[i].attempt);
            SamplePath path = simulate_path(params, sim_span(spec.sim_horizon),
                                            sim_steps(spec.sim_horizon), cfg.rng, key,
                                            cfg.noise);
            if (trim_leading_zero) path = drift_ready_path(std::move(path));
            tasks[i].result = spec.eval(path);
        });

        for (const Task& task : tasks) {
            McCell& cell = out.cells[task.cell];
            ++cell.n_retries;
            if (task.result.accepted) {
                cell.stats.add(task.result.value);
            } else {
                ++cell.n_rejected;
                ++pending[task.cell];
            }
        }
    }
    return out;
}

std::optional<double> json_opt_number(const json& j, const std::string& key) {
    if (!j.contains(key)) return std::nullopt;
    return j.at(key).get<double>();
}

} // namespace

void RunningStat::add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
}

std::optional<double> RunningStat::sample_mean() const {
    if (n < 1) return std::nullopt;
    return mean;
}

std::optional<double> RunningStat::sample_variance() const {
    if (n < 2) return std::nullopt;
    return m2 / static_cast<double>(n - 1);
}

std::optional<double> RunningStat::sample_stddev() const {
    const auto v = sample_variance();
    if (!v) return std::nullopt;
    return std::sqrt(*v);
}

McConfig default_drift_config() { return McConfig{}; }

McConfig default_diffusion_config() {
    McConfig cfg;
    cfg.steps_per_unit = 16384.0; // 2^14
    cfg.horizons.clear();
    return cfg;
}

void validate_mc_config(const McConfig& cfg, bool diffusion_table) {
    ModelParams p = cfg.baseline;
    for (double beta : cfg.betas) {
        p.beta = beta;
        validate_params(p);
    }
    if (cfg.betas.empty()) throw InvalidParameter("betas must be nonempty");
    if (cfg.n_replicates < 1) throw InvalidParameter("n_replicates must be >= 1");
    if (!(cfg.steps_per_unit >= 2.0)) {
        throw InvalidParameter("steps_per_unit must be >= 2");
    }
    if (cfg.threads < 1) throw InvalidParameter("threads must be >= 1");
    if (cfg.retry_budget < 0) throw InvalidParameter("retry_budget must be >= 0");
    validate_rng_spec(cfg.rng);
    if (diffusion_table) {
        if (!(cfg.probes.h > 0.0)) throw InvalidParameter("probe h must be > 0");
        if (cfg.probes.points.empty() && cfg.probes.pairs.empty()) {
            throw InvalidParameter("diffusion table needs probe points or pairs");
        }
    } else {
        if (cfg.horizons.empty()) throw InvalidParameter("horizons must be nonempty");
        for (double T : cfg.horizons) {
            if (!(T > 0.0)) throw InvalidParameter("horizons must be > 0");
        }
    }
}

// Farthest time any probe window reaches; the diffusion table simulates
// exactly this much path.
static double probe_horizon(const QvProbeConfig& probes) {
    double t_max = 0.0;
    for (double t : probes.points) t_max = std::max(t_max, t);
    for (const auto& [s, t] : probes.pairs) t_max = std::max({t_max, s, t});
    return t_max + probes.h;
}

McReport run_drift_table(const McConfig& cfg) {
    validate_mc_config(cfg, /*diffusion_table=*/false);
    const auto start = std::chrono::steady_clock::now();

    const double t_max = *std::max_element(cfg.horizons.begin(), cfg.horizons.end());

    McReport report;
    report.config_echo = mc_config_to_json(cfg);
    report.seed = cfg.rng.master_seed;

    for (std::size_t bi = 0; bi < cfg.betas.size(); ++bi) {
        const double beta = cfg.betas[bi];
        const double sigma = cfg.baseline.sigma;
        const double known_a = cfg.baseline.a;
        const double known_b = cfg.baseline.b;

        std::vector<CellSpec> specs;
        for (double T : cfg.horizons) {
            const std::size_t pts = 0; // fixed after the base path length is known
            auto guard_positive = [](const SamplePath& path) {
                if (has_nonpositive_value(path)) {
                    throw ZeroValueNegativePower("path contains a zero value");
                }
            };
            specs.push_back(
                {"mle_joint_a", T, T, pts, [beta, guard_positive](const SamplePath& pp) {
                     return evaluate_guarded([&] {
                         guard_positive(pp);
                         return mle_joint(pp, beta).a_hat;
                     });
                 }});
            specs.push_back(
                {"mle_joint_b", T, T, pts, [beta, guard_positive](const SamplePath& pp) {
                     return evaluate_guarded([&] {
                         guard_positive(pp);
                         return mle_joint(pp, beta).b_hat;
                     });
                 }});
            specs.push_back({"mle_a_given_b", T, T, pts,
                             [beta, known_b, guard_positive](const SamplePath& pp) {
                                 return evaluate_guarded([&] {
                                     guard_positive(pp);
                                     return mle_a_given_b(pp, known_b, beta).a_hat;
                                 });
                             }});
            specs.push_back({"mle_b_given_a", T, T, pts,
                             [beta, known_a, guard_positive](const SamplePath& pp) {
                                 return evaluate_guarded([&] {
                                     guard_positive(pp);
                                     return mle_b_given_a(pp, known_a, beta).b_hat;
                                 });
                             }});
            specs.push_back({"alt_joint_a", T, T, pts,
                             [beta, sigma, guard_positive](const SamplePath& pp) {
                                 return evaluate_guarded([&] {
                                     guard_positive(pp);
                                     return alt_joint(pp, sigma, beta).a_hat;
                                 });
                             }});
            specs.push_back({"alt_joint_b", T, T, pts,
                             [beta, sigma, guard_positive](const SamplePath& pp) {
                                 return evaluate_guarded([&] {
                                     guard_positive(pp);
                                     return alt_joint(pp, sigma, beta).b_hat;
                                 });
                             }});
        }
        // Fix prefix lengths now that the shared base path length is known.
        const auto base_steps =
            static_cast<std::size_t>(std::llround(t_max * cfg.steps_per_unit));
        for (auto& spec : specs) {
            spec.prefix_points =
                points_for_horizon(spec.horizon, cfg.steps_per_unit, base_steps + 1);
        }

        GroupResult group =
            run_beta_group(cfg, /*table_tag=*/1, bi, beta, t_max,
                           /*trim_leading_zero=*/cfg.baseline.r0 == 0.0, specs);
        for (auto& cell : group.cells) report.cells.push_back(std::move(cell));
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

McReport run_diffusion_table(const McConfig& cfg) {
    validate_mc_config(cfg, /*diffusion_table=*/true);
    const auto start = std::chrono::steady_clock::now();

    const double T = probe_horizon(cfg.probes);
    McReport report;
    report.config_echo = mc_config_to_json(cfg);
    report.seed = cfg.rng.master_seed;

    for (std::size_t bi = 0; bi < cfg.betas.size(); ++bi) {
        const double beta = cfg.betas[bi];
        const double sigma = cfg.baseline.sigma;
        const QvProbeConfig probes = cfg.probes;

        std::vector<CellSpec> specs;
        const auto all_points = static_cast<std::size_t>(-1);
        if (!probes.points.empty()) {
            specs.push_back({"beta1", T, T, all_points,
                             [sigma, probes](const SamplePath& path) {
                                 return evaluate_guarded([&] {
                                     return beta_known_sigma(path, sigma, probes).beta_hat;
                                 });
                             }});
        }
        if (!probes.pairs.empty()) {
            specs.push_back({"beta2", T, T, all_points,
                             [probes](const SamplePath& path) {
                                 return evaluate_guarded([&] {
                                     return beta_unknown_sigma(path, probes).beta_hat;
                                 });
                             }});
        }
        if (!probes.points.empty()) {
            specs.push_back({"sigma2", T, T, all_points,
                             [beta, probes](const SamplePath& path) {
                                 return evaluate_guarded([&] {
                                     return *sigma2_known_beta(path, beta, probes).sigma2_hat;
                                 });
                             }});
        }
        const auto base_steps =
            static_cast<std::size_t>(std::llround(T * cfg.steps_per_unit));
        for (auto& spec : specs) spec.prefix_points = base_steps + 1;

        GroupResult group = run_beta_group(cfg, /*table_tag=*/2, bi, beta, T,
                                           /*trim_leading_zero=*/false, specs);
        for (auto& cell : group.cells) report.cells.push_back(std::move(cell));
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

McConfig load_mc_config(const std::string& filename, bool diffusion_table) {
    std::ifstream in(filename);
    if (!in) throw Error("cannot open config '" + filename + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidParameter("config '" + filename + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw InvalidParameter("config must be a JSON object");

    McConfig cfg = diffusion_table ? default_diffusion_config() : default_drift_config();

    static const std::vector<std::string> known = {
        "a", "b", "sigma", "r0", "betas", "horizons", "n_replicates",
        "steps_per_unit", "seed", "threads", "retry_budget", "h", "points",
        "pairs", "out", "format"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw InvalidParameter("unknown config key '" + key + "'");
        }
    }

    if (auto v = json_opt_number(j, "a")) cfg.baseline.a = *v;
    if (auto v = json_opt_number(j, "b")) cfg.baseline.b = *v;
    if (auto v = json_opt_number(j, "sigma")) cfg.baseline.sigma = *v;
    if (auto v = json_opt_number(j, "r0")) cfg.baseline.r0 = *v;
    if (j.contains("betas")) cfg.betas = j.at("betas").get<std::vector<double>>();
    if (j.contains("horizons")) cfg.horizons = j.at("horizons").get<std::vector<double>>();
    if (j.contains("n_replicates")) cfg.n_replicates = j.at("n_replicates").get<int>();
    if (auto v = json_opt_number(j, "steps_per_unit")) cfg.steps_per_unit = *v;
    if (j.contains("seed")) cfg.rng.master_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("retry_budget")) cfg.retry_budget = j.at("retry_budget").get<int>();
    if (auto v = json_opt_number(j, "h")) cfg.probes.h = *v;
    if (j.contains("points")) {
        cfg.probes.points = j.at("points").get<std::vector<double>>();
    }
    if (j.contains("pairs")) {
        cfg.probes.pairs.clear();
        for (const auto& pr : j.at("pairs")) {
            if (!pr.is_array() || pr.size() != 2) {
                throw InvalidParameter("config 'pairs' entries must be [s, t] arrays");
            }
            cfg.probes.pairs.emplace_back(pr[0].get<double>(), pr[1].get<double>());
        }
    }
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("format")) {
        cfg.format = j.at("format").get<std::string>();
        if (cfg.format != "csv" && cfg.format != "markdown") {
            throw InvalidParameter("config 'format' must be 'csv' or 'markdown'");
        }
    }
    validate_mc_config(cfg, diffusion_table);
    return cfg;
}

std::string mc_config_to_json(const McConfig& cfg) {
    json j;
    j["a"] = cfg.baseline.a;
    j["b"] = cfg.baseline.b;
    j["sigma"] = cfg.baseline.sigma;
    j["r0"] = cfg.baseline.r0;
    j["betas"] = cfg.betas;
    j["horizons"] = cfg.horizons;
    j["n_replicates"] = cfg.n_replicates;
    j["steps_per_unit"] = cfg.steps_per_unit;
    j["seed"] = cfg.rng.master_seed;
    j["threads"] = cfg.threads;
    j["retry_budget"] = cfg.retry_budget;
    j["h"] = cfg.probes.h;
    j["points"] = cfg.probes.points;
    json pairs = json::array();
    for (const auto& [s, t] : cfg.probes.pairs) pairs.push_back(json::array({s, t}));
    j["pairs"] = pairs;
    j["out"] = cfg.out;
    j["format"] = cfg.format;
    return j.dump();
}

namespace {

std::string opt_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

} // namespace

void write_report(const McReport& report, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::csv) {
        out << "estimator,beta,T,mean,variance,stddev,n_effective,n_rejected\n";
        for (const McCell& cell : report.cells) {
            out << cell.estimator << ',' << format_double(cell.beta) << ','
                << format_double(cell.horizon) << ','
                << opt_field(cell.stats.sample_mean()) << ','
                << opt_field(cell.stats.sample_variance()) << ','
                << opt_field(cell.stats.sample_stddev()) << ',' << cell.stats.n << ','
                << cell.n_rejected << '\n';
        }
        return;
    }

    // Markdown: one block per beta, E/Var rows per estimator, horizons as
    // columns (the reference tables' layout).
    std::vector<double> betas, horizons;
    std::vector<std::string> estimators;
    for (const McCell& cell : report.cells) {
        if (std::find(betas.begin(), betas.end(), cell.beta) == betas.end()) {
            betas.push_back(cell.beta);
        }
        if (std::find(horizons.begin(), horizons.end(), cell.horizon) ==
            horizons.end()) {
            horizons.push_back(cell.horizon);
        }
        if (std::find(estimators.begin(), estimators.end(), cell.estimator) ==
            estimators.end()) {
            estimators.push_back(cell.estimator);
        }
    }
    std::sort(horizons.begin(), horizons.end());

    auto find_cell = [&](const std::string& est, double beta,
                         double horizon) -> const McCell* {
        for (const McCell& cell : report.cells) {
            if (cell.estimator == est && cell.beta == beta && cell.horizon == horizon) {
                return &cell;
            }
        }
        return nullptr;
    };

    std::vector<std::string> rejected_notes;
    for (double beta : betas) {
        out << "| beta = " << format_double(beta) << " |";
        for (double T : horizons) out << " T = " << format_double(T) << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < horizons.size(); ++i) out << "---|";
        out << "\n";
        for (const std::string& est : estimators) {
            out << "| E[" << est << "] |";
            for (double T : horizons) {
                const McCell* cell = find_cell(est, beta, T);
                out << ' ' << (cell ? opt_field(cell->stats.sample_mean()) : "") << " |";
            }
            out << "\n| Var[" << est << "] |";
            for (double T : horizons) {
                const McCell* cell = find_cell(est, beta, T);
                out << ' ' << (cell ? opt_field(cell->stats.sample_variance()) : "")
                    << " |";
                if (cell && cell->n_rejected > 0) {
                    rejected_notes.push_back(
                        est + " beta=" + format_double(beta) + " T=" + format_double(T) +
                        ": " + std::to_string(cell->stats.n) + " effective, " +
                        std::to_string(cell->n_rejected) + " rejected" +
                        (cell->retry_budget_exhausted ? " (retry budget exhausted)" : ""));
                }
            }
            out << "\n";
        }
        out << "\n";
    }
    for (const std::string& note : rejected_notes) out << "- " << note << "\n";
    out << "\nseed: " << report.seed << "\n";
    out << "wall seconds: " << format_double(report.wall_seconds) << "\n";
    out << "config: " << report.config_echo << "\n";
}

void write_report(const McReport& report, ReportFormat format,
                  const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw Error("cannot open '" + filename + "' for writing");
    write_report(report, format, out);
    if (!out) throw Error("write to '" + filename + "' failed");
}

std::vector<ParsedCell> parse_report_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) ||
        line != "estimator,beta,T,mean,variance,stddev,n_effective,n_rejected") {
        throw InvalidParameter("unexpected report CSV header");
    }
    std::vector<ParsedCell> cells;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            fields.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (fields.size() != 8) {
            throw InvalidParameter("report CSV row with " + std::to_string(fields.size()) +
                                   " fields: '" + line + "'");
        }
        ParsedCell cell;
        cell.estimator = fields[0];
        cell.beta = parse_double(fields[1]);
        cell.horizon = parse_double(fields[2]);
        if (!fields[3].empty()) cell.mean = parse_double(fields[3]);
        if (!fields[4].empty()) cell.variance = parse_double(fields[4]);
        if (!fields[5].empty()) cell.stddev = parse_double(fields[5]);
        cell.n_effective = std::stol(fields[6]);
        cell.n_rejected = std::stol(fields[7]);
        cells.push_back(std::move(cell));
    }
    return cells;
}

} // namespace ckls
