#include "lgsim/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lgsim/crosstalk.hpp"
#include "lgsim/errors.hpp"
#include "lgsim/io.hpp"
#include "lgsim/optimizer.hpp"
#include "lgsim/qkd.hpp"
#include "lgsim/tomography.hpp"
#include "lgsim/version.hpp"

namespace lgsim {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Collects resolved key-value sections and emits the manifest in the same
/// flat format the config uses, so runs can be diffed against their inputs.
class Manifest {
public:
    void set(const std::string& section, const std::string& key, const std::string& value) {
        sections_[section].emplace_back(key, value);
    }
    void set(const std::string& section, const std::string& key, double value) {
        set(section, key, format_double(value));
    }
    void set(const std::string& section, const std::string& key, int value) {
        set(section, key, std::to_string(value));
    }
    void set(const std::string& section, const std::string& key, std::uint64_t value) {
        set(section, key, std::to_string(value));
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream f(path);
        if (!f) throw Error("cannot write manifest " + path.string());
        bool first = true;
        for (const auto& [section, entries] : sections_) {
            if (!first) f << '\n';
            first = false;
            f << '[' << section << "]\n";
            for (const auto& [k, v] : entries) f << k << " = " << v << '\n';
        }
    }

private:
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections_;
};

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void prepare_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + cfg.out_dir.string());
}

Manifest base_manifest(const RunConfig& cfg, const std::string& subcommand) {
    Manifest m;
    m.set("run", "subcommand", subcommand);
    m.set("run", "version", std::string(kVersion));
    m.set("run", "config", cfg.file.origin());
    m.set("run", "rng_seed", cfg.seed);
    m.set("run", "workers", cfg.workers);
    m.set("run", "started", timestamp_utc());
    return m;
}

void echo_grid(Manifest& m, const GridSpec& g, double waist) {
    m.set("grid", "n_radial", g.n_radial);
    m.set("grid", "n_azimuthal", g.n_azimuthal);
    m.set("grid", "r_max", g.r_max);
    m.set("grid", "waist", waist);
}

void echo_detection(Manifest& m, const DetectionModel& model) {
    m.set("detection", "method", method_name(model.method));
    m.set("detection", "beta", model.beta);
}

int max_ell_of(const std::vector<SpatialState>& states) {
    int m = 0;
    for (const auto& s : states)
        for (const auto& mi : s.modes) m = std::max(m, std::abs(mi.ell));
    return m;
}

/// Mode family from a config section: radial p range, azimuthal ell range,
/// or full-field order cap.
std::vector<SpatialState> family_states(const RunConfig& cfg, const std::string& section,
                                        Manifest& manifest) {
    const auto& file = cfg.file;
    const auto family = file.get_str(section, "family");
    manifest.set(section, "family", family);
    if (family == "radial") {
        const int p_min = file.get_int(section, "p_min", 0);
        const int p_max = file.get_int(section, "p_max");
        if (p_min < 0 || p_max < p_min)
            throw ConfigError(file.origin() + ": bad radial range", file.line_of(section, "p_max"));
        manifest.set(section, "p_min", p_min);
        manifest.set(section, "p_max", p_max);
        return radial_states(p_min, p_max, cfg.waist);
    }
    if (family == "azimuthal") {
        const int ell_max = file.get_int(section, "ell_max");
        if (ell_max < 0)
            throw ConfigError(file.origin() + ": ell_max must be >= 0",
                              file.line_of(section, "ell_max"));
        manifest.set(section, "ell_max", ell_max);
        return azimuthal_states(ell_max, cfg.waist);
    }
    if (family == "fullfield") {
        const int n_max = file.get_int(section, "n_max");
        if (n_max < 1)
            throw ConfigError(file.origin() + ": n_max must be >= 1",
                              file.line_of(section, "n_max"));
        manifest.set(section, "n_max", n_max);
        return fullfield_states(n_max, cfg.waist);
    }
    throw ConfigError(file.origin() + ": unknown family '" + family +
                          "' (expected radial, azimuthal, or fullfield)",
                      file.line_of(section, "family"));
}

DetectionModel model_for_states(const RunConfig& cfg, const std::vector<SpatialState>& states) {
    DetectionModel model = cfg.model;
    if (!cfg.grid_azimuthal_explicit)
        model.grid.n_azimuthal = default_azimuthal_samples(max_ell_of(states));
    validate(model);
    return model;
}

double floor_rate(double rate) { return rate < 0.0 ? 0.0 : rate; }

} // namespace

int cmd_crosstalk(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    cfg.file.require_known_keys("crosstalk",
                                {"family", "p_min", "p_max", "ell_max", "n_max"});
    prepare_out_dir(cfg);
    auto manifest = base_manifest(cfg, "crosstalk");
    const auto states = family_states(cfg, "crosstalk", manifest);
    const auto model = model_for_states(cfg, states);
    echo_grid(manifest, model.grid, cfg.waist);
    echo_detection(manifest, model);

    const auto t1 = Clock::now();
    const auto matrix = crosstalk_matrix(states, model, cfg.workers);
    manifest.set("timings", "compute_s", seconds_since(t1));

    write_crosstalk_csv(cfg.out_dir / "crosstalk.csv", matrix);
    write_crosstalk_sidecar(cfg.out_dir / "crosstalk.json", matrix);
    manifest.set("result", "dimension", matrix.dimension());
    manifest.set("result", "visibility", visibility(matrix));
    manifest.set("result", "mean_efficiency", mean_efficiency(matrix));
    manifest.set("timings", "total_s", seconds_since(t0));
    manifest.write(cfg.out_dir / "manifest.txt");
    std::cout << "crosstalk: d=" << matrix.dimension() << " V=" << format_double(visibility(matrix))
              << " mean_eff=" << format_double(mean_efficiency(matrix)) << '\n';
    return kExitOk;
}

int cmd_tradeoff(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    cfg.file.require_known_keys("tradeoff", {"d_max", "targets", "beta_lo", "beta_hi"});
    const int d_max = cfg.file.get_int("tradeoff", "d_max", 10);
    const auto targets = cfg.file.get_double_list("tradeoff", "targets");
    if (targets.empty())
        throw ConfigError(cfg.file.origin() + ": [tradeoff] targets must not be empty",
                          cfg.file.line_of("tradeoff", "targets"));
    for (const double t : targets)
        if (!(t > 0.0 && t < 1.0))
            throw ConfigError(cfg.file.origin() + ": targets must lie in (0, 1)",
                              cfg.file.line_of("tradeoff", "targets"));
    const double beta_lo = cfg.file.get_double("tradeoff", "beta_lo", 1.0);
    const double beta_hi = cfg.file.get_double("tradeoff", "beta_hi", 32.0);

    prepare_out_dir(cfg);
    auto manifest = base_manifest(cfg, "tradeoff");
    manifest.set("tradeoff", "d_max", d_max);
    {
        std::string ts;
        for (const double t : targets) ts += (ts.empty() ? "" : " ") + format_double(t);
        manifest.set("tradeoff", "targets", ts);
    }
    manifest.set("tradeoff", "beta_lo", beta_lo);
    manifest.set("tradeoff", "beta_hi", beta_hi);
    echo_grid(manifest, cfg.grid, cfg.waist);

    const auto t1 = Clock::now();
    const auto points = efficiency_vs_dimension_scan(d_max, targets, cfg.waist,
                                                     cfg.grid.n_radial, {beta_lo, beta_hi},
                                                     cfg.workers);
    manifest.set("timings", "compute_s", seconds_since(t1));

    std::ofstream csv(cfg.out_dir / "tradeoff.csv");
    if (!csv) throw Error("cannot write tradeoff.csv");
    csv << "d,target_visibility,beta_min,mean_efficiency,achieved_visibility\n";
    for (const auto& pt : points)
        csv << pt.dimension << ',' << format_double(pt.target_visibility) << ','
            << format_double(pt.beta_min) << ',' << format_double(pt.mean_efficiency) << ','
            << format_double(pt.achieved_visibility) << '\n';

    manifest.set("result", "rows", static_cast<int>(points.size()));
    manifest.set("timings", "total_s", seconds_since(t0));
    manifest.write(cfg.out_dir / "manifest.txt");
    std::cout << "tradeoff: " << points.size() << " rows\n";
    return kExitOk;
}

int cmd_subspace(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    cfg.file.require_known_keys(
        "subspace", {"matrix_csv", "family", "p_min", "p_max", "ell_max", "n_max", "d_min",
                     "d_max", "d_step", "n_samples", "distinct", "population", "generations",
                     "mutation_rate", "elite_count"});
    prepare_out_dir(cfg);
    auto manifest = base_manifest(cfg, "subspace");

    CrosstalkMatrix matrix;
    if (cfg.file.has("subspace", "matrix_csv")) {
        const auto path = cfg.file.get_str("subspace", "matrix_csv");
        matrix = read_crosstalk_csv(path);
        manifest.set("subspace", "matrix_csv", path);
    } else {
        const auto states = family_states(cfg, "subspace", manifest);
        const auto model = model_for_states(cfg, states);
        echo_grid(manifest, model.grid, cfg.waist);
        echo_detection(manifest, model);
        matrix = crosstalk_matrix(states, model, cfg.workers);
        write_crosstalk_csv(cfg.out_dir / "crosstalk.csv", matrix);
    }

    const int n = matrix.dimension();
    const int d_min = cfg.file.get_int("subspace", "d_min", 2);
    const int d_max = cfg.file.get_int("subspace", "d_max", n);
    const int d_step = cfg.file.get_int("subspace", "d_step", 1);
    if (d_min < 2 || d_max > n || d_max < d_min || d_step < 1)
        throw ConfigError(cfg.file.origin() + ": bad subspace d range (matrix has " +
                          std::to_string(n) + " modes)");
    const int n_samples = cfg.file.get_int("subspace", "n_samples", 1000);
    const bool distinct = cfg.file.get_bool("subspace", "distinct", false);

    GAParams params;
    params.population = cfg.file.get_int("subspace", "population", 50);
    params.generations = cfg.file.get_int("subspace", "generations", 200);
    params.mutation_rate = cfg.file.get_double("subspace", "mutation_rate", 0.3);
    params.elite_count = cfg.file.get_int("subspace", "elite_count", 2);
    validate(params);

    manifest.set("subspace", "d_min", d_min);
    manifest.set("subspace", "d_max", d_max);
    manifest.set("subspace", "d_step", d_step);
    manifest.set("subspace", "n_samples", n_samples);
    manifest.set("subspace", "distinct", distinct ? "true" : "false");
    manifest.set("subspace", "population", params.population);
    manifest.set("subspace", "generations", params.generations);
    manifest.set("subspace", "mutation_rate", params.mutation_rate);
    manifest.set("subspace", "elite_count", params.elite_count);

    std::ofstream summary(cfg.out_dir / "subspace.csv");
    if (!summary) throw Error("cannot write subspace.csv");
    summary << "d,rate_mean,rate_std,rate_random_max,rate_ga_best,rate_ceiling\n";
    std::ofstream best_csv(cfg.out_dir / "subspace_best.csv");
    if (!best_csv) throw Error("cannot write subspace_best.csv");
    best_csv << "d,subset,qber,rate_bits\n";

    const auto t1 = Clock::now();
    for (int d = d_min; d <= d_max; d += d_step) {
        const auto stats = random_subset_stats(matrix, d, n_samples,
                                               derive_seed(cfg.seed, static_cast<std::uint64_t>(d)),
                                               distinct);
        GAParams p = params;
        p.rng_seed = derive_seed(cfg.seed, 0x47000000ULL + static_cast<std::uint64_t>(d));
        const auto ga = ga_optimize(matrix, d, p, cfg.workers);

        // rates are clamped at zero in the report files only
        summary << d << ',' << format_double(floor_rate(stats.mean)) << ','
                << format_double(stats.stddev) << ',' << format_double(floor_rate(stats.max))
                << ',' << format_double(floor_rate(ga.rate_bits)) << ','
                << format_double(std::log2(static_cast<double>(d))) << '\n';

        const auto key = key_rate_for_subset(matrix, ga.best);
        std::string subset_tokens;
        for (const int idx : ga.best)
            subset_tokens += (subset_tokens.empty() ? "" : " ") + matrix.labels[idx];
        best_csv << d << ',' << subset_tokens << ',' << format_double(key.qber) << ','
                 << format_double(floor_rate(key.rate_bits)) << '\n';

        std::ofstream trace(cfg.out_dir / ("ga_trace_d" + std::to_string(d) + ".csv"));
        trace << "generation,best,mean\n";
        for (const auto& pt : ga.trace)
            trace << pt.generation << ',' << format_double(pt.best) << ','
                  << format_double(pt.mean) << '\n';

        nlohmann::json j;
        j["d"] = d;
        j["rate_bits"] = ga.rate_bits;
        j["qber"] = key.qber;
        j["subset_indices"] = ga.best;
        nlohmann::json modes = nlohmann::json::array();
        for (const int idx : ga.best) modes.push_back(matrix.labels[idx]);
        j["modes"] = modes;
        std::ofstream bj(cfg.out_dir / ("best_subset_d" + std::to_string(d) + ".json"));
        bj << j.dump(2) << '\n';
    }
    manifest.set("timings", "compute_s", seconds_since(t1));
    manifest.set("timings", "total_s", seconds_since(t0));
    manifest.write(cfg.out_dir / "manifest.txt");
    std::cout << "subspace: d=" << d_min << ".." << d_max << " done\n";
    return kExitOk;
}

int cmd_qst(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    cfg.file.require_known_keys("qst", {"state_file", "projector", "compensate"});
    const auto state_path = cfg.file.get_str("qst", "state_file");
    const auto projector = cfg.file.get_str("qst", "projector", "simulated");
    if (projector != "simulated" && projector != "exact")
        throw ConfigError(cfg.file.origin() + ": projector must be 'simulated' or 'exact'",
                          cfg.file.line_of("qst", "projector"));
    const bool compensate = cfg.file.get_bool("qst", "compensate", true);

    const auto truth = load_state_json(state_path);
    const int d = truth.dimension();
    if (!is_prime(d))
        throw ConfigError(cfg.file.origin() + ": state dimension " + std::to_string(d) +
                          " is not prime; MUB tomography needs a prime dimension");

    prepare_out_dir(cfg);
    auto manifest = base_manifest(cfg, "qst");
    manifest.set("qst", "state_file", state_path);
    manifest.set("qst", "projector", projector);
    manifest.set("qst", "compensate", compensate ? "true" : "false");
    manifest.set("qst", "dimension", d);

    const auto mubs = mub_bases(d, truth.modes, truth.waist);
    DetectionModel model = cfg.model;
    model.grid.r_max = cfg.grid.r_max / cfg.waist * truth.waist;
    if (!cfg.grid_azimuthal_explicit) {
        int ell_max = 0;
        for (const auto& m : truth.modes) ell_max = std::max(ell_max, std::abs(m.ell));
        model.grid.n_azimuthal = default_azimuthal_samples(ell_max);
    }

    const auto t1 = Clock::now();
    TomographyRecord rec;
    if (projector == "exact") {
        rec = projector_probabilities(truth, mubs);
    } else {
        validate(model);
        echo_detection(manifest, model);
        echo_grid(manifest, model.grid, truth.waist);
        rec = simulate_tomography(truth, mubs, model, compensate, cfg.workers);
    }
    const auto rho = direct_inversion(rec);
    const double fid = fidelity(rho, truth, mubs.support);
    manifest.set("timings", "compute_s", seconds_since(t1));

    std::ofstream probs(cfg.out_dir / "qst_probs.csv");
    probs << "basis";
    for (int m = 0; m < d; ++m) probs << ",m" << m;
    probs << '\n';
    for (int alpha = 0; alpha <= d; ++alpha) {
        probs << alpha;
        for (int m = 0; m < d; ++m) probs << ',' << format_double(rec.prob(alpha, m));
        probs << '\n';
    }
    write_density_json(cfg.out_dir / "density.json", rho, mubs.support);
    write_density_abs_csv(cfg.out_dir / "density_abs.csv", rho);

    nlohmann::json report;
    report["dimension"] = d;
    report["projector"] = projector;
    report["compensated"] = rec.compensated;
    if (projector == "simulated") {
        report["method"] = method_name(model.method);
        report["beta"] = model.beta;
    }
    report["fidelity"] = fid;
    report["trace"] = rho.trace_real();
    std::ofstream rj(cfg.out_dir / "qst_report.json");
    rj << report.dump(2) << '\n';

    manifest.set("result", "fidelity", fid);
    manifest.set("result", "trace", rho.trace_real());
    manifest.set("timings", "total_s", seconds_since(t0));
    manifest.write(cfg.out_dir / "manifest.txt");
    std::cout << "qst: d=" << d << " fidelity=" << format_double(fid) << '\n';
    return kExitOk;
}

int cmd_mub_check(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    cfg.file.require_known_keys("mub-check", {"d"});
    const int d = cfg.file.get_int("mub-check", "d");
    if (!is_prime(d))
        throw ConfigError(cfg.file.origin() + ": d = " + std::to_string(d) + " is not prime",
                          cfg.file.line_of("mub-check", "d"));

    prepare_out_dir(cfg);
    auto manifest = base_manifest(cfg, "mub-check");
    manifest.set("mub-check", "d", d);

    int order = 1;
    while (order * (order + 1) / 2 < d) ++order;
    auto modes = enumerate_modes(order);
    modes.resize(d);
    const auto mubs = mub_bases(d, modes, cfg.waist);

    double orth_err = 0.0, unbias_err = 0.0, complete_err = 0.0;
    for (int a = 0; a <= d; ++a)
        for (int b = a; b <= d; ++b)
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n) {
                    if (a == b && n < m) continue;
                    std::complex<double> ip{0.0, 0.0};
                    for (int k = 0; k < d; ++k)
                        ip += std::conj(mubs.coeff(a, m, k)) * mubs.coeff(b, n, k);
                    const double p = std::norm(ip);
                    if (a == b)
                        orth_err = std::max(orth_err, std::abs(p - (m == n ? 1.0 : 0.0)));
                    else
                        unbias_err = std::max(unbias_err, std::abs(p - 1.0 / d));
                }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            std::complex<double> acc{0.0, 0.0};
            for (int a = 0; a <= d; ++a)
                for (int m = 0; m < d; ++m)
                    acc += mubs.coeff(a, m, i) * std::conj(mubs.coeff(a, m, j));
            const std::complex<double> expect = i == j ? std::complex<double>{d + 1.0, 0.0}
                                                       : std::complex<double>{0.0, 0.0};
            complete_err = std::max(complete_err, std::abs(acc - expect));
        }

    nlohmann::json report;
    report["d"] = d;
    report["max_orthonormality_error"] = orth_err;
    report["max_unbiasedness_error"] = unbias_err;
    report["max_completeness_error"] = complete_err;
    report["pass"] = orth_err <= 1e-12 && unbias_err <= 1e-12 && complete_err <= 1e-10;
    std::ofstream rj(cfg.out_dir / "mub_report.json");
    rj << report.dump(2) << '\n';

    manifest.set("result", "max_orthonormality_error", orth_err);
    manifest.set("result", "max_unbiasedness_error", unbias_err);
    manifest.set("result", "max_completeness_error", complete_err);
    manifest.set("timings", "total_s", seconds_since(t0));
    manifest.write(cfg.out_dir / "manifest.txt");
    std::cout << "mub-check: d=" << d << " orth=" << format_double(orth_err)
              << " unbias=" << format_double(unbias_err)
              << " complete=" << format_double(complete_err) << '\n';
    return kExitOk;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Laguerre-Gauss projective-measurement simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = "out";
    app.add_option("--config", config_path, "config file")->required();
    app.add_option("--seed", seed, "RNG seed (overridden by [run] rng_seed)");
    app.add_option("--workers", workers, "worker pool size")->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "output directory");

    auto* c_crosstalk = app.add_subcommand("crosstalk", "crosstalk matrix of a mode family");
    auto* c_tradeoff = app.add_subcommand("tradeoff", "efficiency vs dimension scan");
    auto* c_subspace = app.add_subcommand("subspace", "random + GA subspace key-rate search");
    auto* c_qst = app.add_subcommand("qst", "MUB state tomography");
    auto* c_mub = app.add_subcommand("mub-check", "verify MUB properties for prime d");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const auto file = ConfigFile::parse_file(config_path);
        const auto cfg = resolve_common(file, seed, workers, out_dir);
        if (c_crosstalk->parsed()) return cmd_crosstalk(cfg);
        if (c_tradeoff->parsed()) return cmd_tradeoff(cfg);
        if (c_subspace->parsed()) return cmd_subspace(cfg);
        if (c_qst->parsed()) return cmd_qst(cfg);
        if (c_mub->parsed()) return cmd_mub_check(cfg);
        std::cerr << "no subcommand\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NonConvergedError& e) {
        std::cerr << "non-convergence: " << e.what() << '\n';
        return kExitNonConverged;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace lgsim
