#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "hawkes/core.hpp"
#include "hawkes/ingest.hpp"
#include "hawkes/io.hpp"
#include "hawkes/resolve.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/solver.hpp"

namespace fs = std::filesystem;
using namespace hawkes;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Timer {
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start)
            .count();
    }
};

std::string out_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void finish_manifest(io::RunManifest& manifest, const Timer& timer,
                     const std::string& dir) {
    manifest.version = kVersion;
    manifest.duration_seconds = timer.elapsed();
    // Written last: its presence marks a completed run.
    io::write_text_file(out_path(dir, "manifest.json"), manifest.to_json());
}

ingest::PlatformTaxonomy load_taxonomy(const std::string& taxonomy_path,
                                       const std::string& mainstream_path) {
    if (taxonomy_path.empty() != mainstream_path.empty()) {
        throw std::runtime_error(
            "--taxonomy and --mainstream must be given together");
    }
    if (taxonomy_path.empty()) {
        return ingest::PlatformTaxonomy::builtin();
    }
    return ingest::PlatformTaxonomy::load(taxonomy_path, mainstream_path);
}

/// Expand record URLs through the cache (env HAWKES_CACHE_PATH), online only
/// when asked. Unresolvable shortened URLs are kept as-is and counted.
std::size_t resolve_record_urls(std::vector<ingest::EventRecord>& records,
                                bool online) {
    const char* cache_path = std::getenv("HAWKES_CACHE_PATH");
    resolve::ResolveCache cache(cache_path != nullptr ? cache_path : "");
    std::unique_ptr<resolve::HttpRedirectFetcher> fetcher;
    if (online) {
        fetcher = std::make_unique<resolve::HttpRedirectFetcher>();
    }
    std::size_t unresolved = 0;
    for (ingest::EventRecord& rec : records) {
        try {
            rec.url = resolve::resolve_url(rec.url, cache, fetcher.get());
        } catch (const resolve::ResolutionError&) {
            ++unresolved;
        }
    }
    return unresolved;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

void write_infectivity_table(const HawkesParams& params,
                             const std::string& path) {
    const auto& names = ingest::platform_names();
    std::ostringstream out;
    for (const auto& name : names) {
        out << ',' << name << " ->";
    }
    out << '\n';
    for (std::size_t u = 0; u < params.dims(); ++u) {
        out << "-> " << names[u];
        for (std::size_t v = 0; v < params.dims(); ++v) {
            out << ',' << io::format_number(params.A[u][v]);
        }
        out << '\n';
    }
    io::write_text_file(path, out.str());
}

int run_fit(const std::string& input, const std::string& group_name,
            double omega, double penalization, double ratio,
            std::size_t max_iter, double tol, std::uint64_t seed,
            std::size_t min_cascade, bool online, const std::string& taxonomy_path,
            const std::string& mainstream_path, const std::string& out_dir) {
    Timer timer;
    const auto group = ingest::parse_group(group_name);
    if (!group) {
        std::cerr << "fit: --group must be psm or normal\n";
        return 2;
    }
    fs::create_directories(out_dir);

    auto records = ingest::parse_event_log(input);
    const std::size_t unresolved = resolve_record_urls(records, online);
    const auto taxonomy = load_taxonomy(taxonomy_path, mainstream_path);
    std::vector<std::string> warnings;
    const auto pairs = ingest::derive_pairs(records, taxonomy, &warnings);
    for (const std::string& w : warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    auto sequences = ingest::build_sequences(pairs, *group);
    std::erase_if(sequences, [min_cascade](const EventSequence& s) {
        return s.size() < min_cascade;
    });

    FitConfig cfg;
    cfg.penalization = penalization;
    cfg.mixing_ratio = ratio;
    cfg.max_iterations = max_iter;
    cfg.tolerance = tol;
    cfg.omega = omega;
    cfg.init_seed = seed;
    cfg.num_dims = ingest::kNumPlatforms;
    const FitResult result = fit_adm4(sequences, cfg);

    io::save_params(result.params, out_path(out_dir, "params.json"));
    std::ostringstream trace;
    trace << "iteration,objective\n";
    for (std::size_t i = 0; i < result.objective_trace.size(); ++i) {
        trace << (i + 1) << ',' << io::format_number(result.objective_trace[i])
              << '\n';
    }
    io::write_text_file(out_path(out_dir, "objective_trace.csv"), trace.str());
    write_infectivity_table(result.params, out_path(out_dir, "infectivity.csv"));

    io::RunManifest manifest;
    manifest.command = "fit";
    manifest.config = {
        {"input", input},
        {"group", group_name},
        {"omega", io::format_number(omega)},
        {"C", io::format_number(penalization)},
        {"ratio", io::format_number(ratio)},
        {"max_iter", std::to_string(max_iter)},
        {"tol", io::format_number(tol)},
        {"seed", std::to_string(seed)},
        {"min_cascade_size", std::to_string(min_cascade)},
        {"dimensions", std::to_string(ingest::kNumPlatforms)},
        {"sequences", std::to_string(sequences.size())},
        {"unresolved_urls", std::to_string(unresolved)},
        {"converged", result.converged ? "true" : "false"},
        {"iterations_run", std::to_string(result.iterations_run)},
    };
    manifest.inputs = {{input, io::file_digest(input)}};
    manifest.outputs = {"params.json", "objective_trace.csv",
                        "infectivity.csv"};
    finish_manifest(manifest, timer, out_dir);
    return 0;
}

int run_simulate(const std::string& params_path, double horizon,
                 std::size_t count, std::uint64_t seed,
                 const std::string& group_name, const std::string& out_dir) {
    Timer timer;
    const auto group = ingest::parse_group(group_name);
    if (!group) {
        std::cerr << "simulate: --group must be psm or normal\n";
        return 2;
    }
    const HawkesParams params = io::load_params(params_path);
    const double rho = branching_spectral_radius(params.A);
    if (rho >= 1.0) {
        std::cerr << "simulate: unstable parameters, spectral radius "
                  << io::format_number(rho) << " >= 1\n";
        return 1;
    }
    fs::create_directories(out_dir);

    SimConfig cfg;
    cfg.horizon = horizon;
    cfg.seed = seed;
    const auto sequences = simulate_batch(params, cfg, count);
    io::write_text_file(out_path(out_dir, "events.csv"),
                        io::sequences_to_event_log(sequences, *group));

    io::RunManifest manifest;
    manifest.command = "simulate";
    manifest.config = {
        {"params", params_path},
        {"horizon", io::format_number(horizon)},
        {"count", std::to_string(count)},
        {"seed", std::to_string(seed)},
        {"group", group_name},
        {"spectral_radius", io::format_number(rho)},
    };
    manifest.inputs = {{params_path, io::file_digest(params_path)}};
    manifest.outputs = {"events.csv"};
    finish_manifest(manifest, timer, out_dir);
    return 0;
}

int run_stats(const std::string& input, const std::string& out_dir) {
    Timer timer;
    fs::create_directories(out_dir);
    const auto records = ingest::parse_event_log(input);
    const auto stats = ingest::cascade_stats(records);

    std::map<std::size_t, std::size_t> size_hist;
    for (const auto& c : stats.cascades) {
        ++size_hist[c.size];
    }
    std::ostringstream sizes;
    sizes << "size,count\n";
    for (const auto& [size, count] : size_hist) {
        sizes << size << ',' << count << '\n';
    }
    io::write_text_file(out_path(out_dir, "size_histogram.csv"), sizes.str());

    std::vector<std::int64_t> durations;
    for (const auto& c : stats.cascades) {
        durations.push_back(c.duration_seconds);
    }
    std::sort(durations.begin(), durations.end());
    std::ostringstream cdf;
    cdf << "duration_seconds,cum_fraction\n";
    for (std::size_t i = 0; i < durations.size(); ++i) {
        if (i + 1 < durations.size() && durations[i + 1] == durations[i]) {
            continue;  // emit each distinct duration once, at its top rank
        }
        cdf << durations[i] << ','
            << io::format_number(static_cast<double>(i + 1) /
                                 static_cast<double>(durations.size()))
            << '\n';
    }
    io::write_text_file(out_path(out_dir, "duration_cdf.csv"), cdf.str());

    std::ostringstream suspended;
    suspended << "cascade_id,suspended_users\n";
    for (const auto& c : stats.cascades) {
        suspended << csv_quote(c.cascade_id) << ',' << c.suspended_users
                  << '\n';
    }
    io::write_text_file(out_path(out_dir, "suspended_users.csv"),
                        suspended.str());

    std::map<std::int64_t, std::pair<std::size_t, std::size_t>> daily;
    for (const auto& [day, count] : stats.daily_pairs_psm) {
        daily[day].first = count;
    }
    for (const auto& [day, count] : stats.daily_pairs_normal) {
        daily[day].second = count;
    }
    std::ostringstream daily_out;
    daily_out << "day,psm_pairs,normal_pairs\n";
    for (const auto& [day, counts] : daily) {
        daily_out << day << ',' << counts.first << ',' << counts.second << '\n';
    }
    io::write_text_file(out_path(out_dir, "daily_pairs.csv"), daily_out.str());

    io::RunManifest manifest;
    manifest.command = "stats";
    manifest.config = {
        {"input", input},
        {"cascades", std::to_string(stats.cascades.size())},
        {"records", std::to_string(records.size())},
    };
    manifest.inputs = {{input, io::file_digest(input)}};
    manifest.outputs = {"size_histogram.csv", "duration_cdf.csv",
                        "suspended_users.csv", "daily_pairs.csv"};
    finish_manifest(manifest, timer, out_dir);
    return 0;
}

int run_report(const std::vector<std::string>& params_paths,
               const std::string& out_dir) {
    Timer timer;
    std::vector<HawkesParams> groups;
    for (const std::string& path : params_paths) {
        groups.push_back(io::load_params(path));
    }
    for (const HawkesParams& p : groups) {
        if (p.dims() != groups.front().dims()) {
            std::cerr << "report: dimension mismatch between param files\n";
            return 1;
        }
    }
    fs::create_directories(out_dir);
    const std::size_t dims = groups.front().dims();
    const auto& names = ingest::platform_names();
    const auto name_of = [&](std::size_t d) {
        return d < names.size() ? names[d] : "dim" + std::to_string(d);
    };

    io::RunManifest manifest;
    manifest.command = "report";
    for (std::size_t k = 0; k < groups.size(); ++k) {
        std::ostringstream heat;
        heat << "source,destination,weight\n";
        for (std::size_t v = 0; v < dims; ++v) {
            for (std::size_t u = 0; u < dims; ++u) {
                heat << name_of(v) << ',' << name_of(u) << ','
                     << io::format_number(groups[k].A[u][v]) << '\n';
            }
        }
        const std::string heat_name = "heatmap_" + std::to_string(k + 1) + ".csv";
        io::write_text_file(out_path(out_dir, heat_name), heat.str());
        manifest.outputs.push_back(heat_name);

        std::ostringstream asym;
        asym << "source,destination,weight,reverse_weight\n";
        for (std::size_t v = 0; v < dims; ++v) {
            for (std::size_t u = 0; u < dims; ++u) {
                if (u == v) {
                    continue;
                }
                const double forward = groups[k].A[u][v];
                const double reverse = groups[k].A[v][u];
                if (forward > reverse) {
                    asym << name_of(v) << ',' << name_of(u) << ','
                         << io::format_number(forward) << ','
                         << io::format_number(reverse) << '\n';
                }
            }
        }
        const std::string asym_name =
            "asymmetry_" + std::to_string(k + 1) + ".csv";
        io::write_text_file(out_path(out_dir, asym_name), asym.str());
        manifest.outputs.push_back(asym_name);
    }

    if (groups.size() >= 2) {
        // Largest-weight source per destination, side by side per group.
        std::ostringstream cmp;
        cmp << "destination";
        for (std::size_t k = 0; k < groups.size(); ++k) {
            cmp << ",top_source_" << (k + 1) << ",weight_" << (k + 1);
        }
        cmp << '\n';
        for (std::size_t u = 0; u < dims; ++u) {
            cmp << name_of(u);
            for (const HawkesParams& p : groups) {
                std::size_t best = 0;
                for (std::size_t v = 1; v < dims; ++v) {
                    if (p.A[u][v] > p.A[u][best]) {
                        best = v;
                    }
                }
                cmp << ',' << name_of(best) << ','
                    << io::format_number(p.A[u][best]);
            }
            cmp << '\n';
        }
        io::write_text_file(out_path(out_dir, "comparison.csv"), cmp.str());
        manifest.outputs.push_back("comparison.csv");
    }

    for (const std::string& path : params_paths) {
        manifest.inputs.emplace_back(path, io::file_digest(path));
        manifest.config.emplace_back("params", path);
    }
    finish_manifest(manifest, timer, out_dir);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multivariate Hawkes toolkit for URL-sharing influence"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // fit
    auto* fit = app.add_subcommand("fit", "Fit an infectivity matrix from an event log");
    std::string fit_input, fit_group, fit_out = ".";
    std::string fit_taxonomy, fit_mainstream;
    double fit_omega = 1.0, fit_c = 1000.0, fit_ratio = 0.5, fit_tol = 1e-5;
    std::size_t fit_max_iter = 50, fit_min_cascade = 1;
    std::uint64_t fit_seed = 0;
    bool fit_online = false;
    fit->add_option("--input", fit_input, "Event-log CSV")->required();
    fit->add_option("--group", fit_group, "psm or normal")->required();
    fit->add_option("--omega", fit_omega, "Kernel decay rate (1/s)")->required();
    fit->add_option("--C", fit_c, "Penalization level");
    fit->add_option("--ratio", fit_ratio, "Nuclear/L1 mixing ratio");
    fit->add_option("--max-iter", fit_max_iter, "Iteration budget");
    fit->add_option("--tol", fit_tol, "Relative objective tolerance");
    fit->add_option("--seed", fit_seed, "Initialization seed");
    fit->add_option("--min-cascade-size", fit_min_cascade,
                    "Drop sequences with fewer events");
    fit->add_option("--taxonomy", fit_taxonomy, "domain<TAB>dimension file");
    fit->add_option("--mainstream", fit_mainstream, "Mainstream allow-list file");
    fit->add_flag("--online", fit_online, "Resolve shortened URLs over HTTP");
    fit->add_option("--out", fit_out, "Output directory")->required();

    // simulate
    auto* sim = app.add_subcommand("simulate", "Sample sequences from saved parameters");
    std::string sim_params, sim_out = ".", sim_group = "normal";
    double sim_horizon = 100.0;
    std::size_t sim_count = 1;
    std::uint64_t sim_seed = 0;
    sim->add_option("--params", sim_params, "Params JSON")->required();
    sim->add_option("--horizon", sim_horizon, "Time horizon (s)");
    sim->add_option("--count", sim_count, "Number of sequences");
    sim->add_option("--seed", sim_seed, "Base seed");
    sim->add_option("--group", sim_group, "Label for the synthetic records");
    sim->add_option("--out", sim_out, "Output directory")->required();

    // stats
    auto* stats = app.add_subcommand("stats", "Cascade statistics tables");
    std::string stats_input, stats_out = ".";
    stats->add_option("--input", stats_input, "Event-log CSV")->required();
    stats->add_option("--out", stats_out, "Output directory")->required();

    // report
    auto* report = app.add_subcommand("report", "Heatmap and comparison tables");
    std::vector<std::string> report_params;
    std::string report_out = ".";
    report->add_option("--params", report_params, "Params JSON, repeatable")
        ->required();
    report->add_option("--out", report_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fit->parsed()) {
            return run_fit(fit_input, fit_group, fit_omega, fit_c, fit_ratio,
                           fit_max_iter, fit_tol, fit_seed, fit_min_cascade,
                           fit_online, fit_taxonomy, fit_mainstream, fit_out);
        }
        if (sim->parsed()) {
            return run_simulate(sim_params, sim_horizon, sim_count, sim_seed,
                                sim_group, sim_out);
        }
        if (stats->parsed()) {
            return run_stats(stats_input, stats_out);
        }
        if (report->parsed()) {
            return run_report(report_params, report_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
