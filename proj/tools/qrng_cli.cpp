// qrng: command-line front end for phase-diffusion QRNG simulation, device
// calibration, delay optimization, and bitstream analysis.
//
// Exit codes: 0 success, 1 analysis FAIL verdicts present, 2 usage or
// configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrng/calibration.hpp"
#include "qrng/config.hpp"
#include "qrng/entropy.hpp"
#include "qrng/pipeline.hpp"
#include "qrng/report.hpp"
#include "qrng/whitening.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
};

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw qrng::ParseError("cannot create output directory '" + dir + "'");
}

std::ofstream open_output(const std::string& dir, const std::string& name, bool binary = false) {
    ensure_out_dir(dir);
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw qrng::ParseError("cannot write '" + path.string() + "'");
    return out;
}

qrng::Config resolve_config(const GlobalOpts& global) {
    qrng::Config config;
    if (!global.config_path.empty()) config = qrng::load_config_file(global.config_path);
    if (global.seed) config.sim.seed = *global.seed;
    return config;
}

// Values series for `analyze --series`: one value per line or CSV rows, in
// which case the last field of each row is used. A leading non-numeric line
// is treated as a header.
std::vector<double> load_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qrng::ParseError("cannot open series file '" + path + "'");
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = qrng::detail::trim(line);
        if (line.empty()) continue;
        const auto comma = line.rfind(',');
        const std::string field =
            comma == std::string::npos ? line : qrng::detail::trim(line.substr(comma + 1));
        char* end = nullptr;
        const double v = std::strtod(field.c_str(), &end);
        if (end == field.c_str() || *end != '\0') {
            if (values.empty() && line_no <= 2) continue;  // header row
            throw qrng::ParseError("line " + std::to_string(line_no) + ": non-numeric value '" +
                                   field + "'");
        }
        values.push_back(v);
    }
    if (values.empty()) throw qrng::ParseError("no values in series file '" + path + "'");
    return values;
}

int cmd_simulate(const GlobalOpts& global, const qrng::Config& config, bool sine,
                 const std::string& trace_csv, const std::string& voltage_csv) {
    const qrng::VoltageMode mode = sine ? qrng::VoltageMode::sine : qrng::VoltageMode::linear;
    const qrng::SimulationResult result = qrng::run_simulation(config, mode);

    auto bitstream = open_output(global.out_dir, "bitstream.bin", true);
    bitstream.write(reinterpret_cast<const char*>(result.bitstream.bytes.data()),
                    static_cast<std::streamsize>(result.bitstream.bytes.size()));
    bitstream.close();

    auto report = open_output(global.out_dir, "simulate_report.txt");
    qrng::write_simulation_report(report, result);
    qrng::write_simulation_report(std::cout, result);

    if (!trace_csv.empty() || !voltage_csv.empty()) {
        // Regenerate trajectory 0 for the dumps; simulation is pure per index.
        const qrng::PhaseTrace trace =
            qrng::simulate_phase_trajectory(result.config.laser, result.config.sim, 0);
        if (!trace_csv.empty()) {
            auto out = open_output(global.out_dir, trace_csv);
            qrng::write_phase_trace_csv(out, trace);
        }
        if (!voltage_csv.empty()) {
            qrng::GaussianRng noise = qrng::classical_noise_rng(result.config.sim, 0);
            const bool classical = result.config.laser.classical_phase_variance > 0;
            const qrng::DeltaPhiSeries dphi =
                qrng::sample_phase_differences(trace, result.config.chain, result.config.laser,
                                               classical ? &noise : nullptr);
            const qrng::VoltageSeries volts =
                qrng::phase_to_voltage(dphi, result.config.laser, result.config.chain, mode);
            auto out = open_output(global.out_dir, voltage_csv);
            qrng::write_voltage_csv(out, volts);
        }
    }
    return 0;
}

int cmd_calibrate(const GlobalOpts& global, const std::string& csv_path, int curve_points) {
    const std::vector<qrng::CalibrationSample> samples = qrng::load_calibration_csv(csv_path);
    const qrng::CalibrationFit fit = qrng::fit_noise_model(samples);

    std::ostringstream text;
    qrng::ReportWriter w(text);
    w.section("calibrate");
    w.kv("input", csv_path);
    w.kv("samples", static_cast<std::uint64_t>(samples.size()));
    w.kv("fit.aq", fit.fit.aq);
    w.kv("fit.ac", fit.fit.ac);
    w.kv("fit.background", fit.fit.background);
    w.kv("fit.residual_rms", fit.residual_rms);
    w.kv("fit.clamped", fit.clamped ? "yes" : "no");
    if (fit.fit.ac > 0 && fit.fit.background > 0) {
        const double p_star = qrng::optimal_power(fit.fit);
        w.kv("optimal_power", p_star);
        w.kv("gamma_at_optimal_power", qrng::snr_gamma(fit.fit, p_star));
    } else {
        w.kv("optimal_power", "none (gamma is monotone in power)");
    }

    double p_min = samples.front().power, p_max = samples.front().power;
    for (const auto& s : samples) {
        p_min = std::min(p_min, s.power);
        p_max = std::max(p_max, s.power);
    }
    auto curve = open_output(global.out_dir, "gamma_curve.csv");
    curve << "power,gamma\n";
    for (int i = 0; i < curve_points; ++i) {
        const double p = p_min + (p_max - p_min) * static_cast<double>(i) / (curve_points - 1);
        char buf[80];
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", p, qrng::snr_gamma(fit.fit, p));
        curve << buf;
    }
    w.kv("gamma_curve", "gamma_curve.csv");

    auto report = open_output(global.out_dir, "calibration_report.txt");
    report << text.str();
    std::cout << text.str();
    return 0;
}

int cmd_optimize(const GlobalOpts& global, double lambda, double cap_bits, double tau_lo,
                 double tau_hi, int sweep_points) {
    const qrng::EntropyReport report =
        qrng::make_entropy_report(lambda, tau_lo, cap_bits, tau_lo, tau_hi);

    std::ostringstream text;
    qrng::ReportWriter w(text);
    w.section("optimize");
    w.kv("lambda", report.lambda);
    w.kv("cap_bits", report.cap_bits);
    w.kv("bracket_lo", tau_lo);
    w.kv("bracket_hi", tau_hi);
    w.kv("tau_opt", report.tau_opt);
    w.kv("rs_max", report.rs_max);
    w.kv("r0_at_tau_opt",
         qrng::per_sample_randomness(report.lambda, report.tau_opt, report.cap_bits));

    auto sweep = open_output(global.out_dir, "rs_sweep.csv");
    qrng::write_rs_sweep_csv(sweep, lambda, cap_bits, tau_lo, tau_hi, sweep_points);
    w.kv("rs_sweep", "rs_sweep.csv");

    auto file = open_output(global.out_dir, "optimize_report.txt");
    file << text.str();
    std::cout << text.str();
    return 0;
}

int cmd_analyze(const GlobalOpts& global, const std::string& series_path,
                const std::string& bitstream_path, int bits) {
    std::vector<qrng::TestLine> lines;
    if (!series_path.empty()) {
        lines = qrng::analyze_series(load_series(series_path));
    } else {
        std::ifstream in(bitstream_path, std::ios::binary);
        if (!in) throw qrng::ParseError("cannot open bitstream file '" + bitstream_path + "'");
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
        if (bytes.empty()) throw qrng::ParseError("empty bitstream file");
        const auto words = qrng::unpack_bins(bytes, bits, bytes.size() * 8);
        lines = qrng::analyze_words(words, 1u << bits);
    }

    const std::string text = qrng::format_battery(lines);
    std::cout << text;
    auto report = open_output(global.out_dir, "analyze_report.txt");
    report << text;
    return qrng::battery_passed(lines) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-diffusion QRNG simulator and entropy analyzer"};
    app.require_subcommand(1);

    GlobalOpts global;
    app.add_option("--config", global.config_path, "Configuration file (key = value lines)")
        ->expected(1);
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "Override sim.seed");
    app.add_option("--out", global.out_dir, "Output directory (default '.')");
    app.fallthrough();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run the full pipeline and emit a bitstream");
    struct {
        std::optional<double> power, coherence_time, classical_variance;
        std::optional<double> delay, sampling_interval, gain, response_time;
        std::optional<int> bits;
        std::optional<double> v_min, v_max, adc_offset;
        std::optional<double> step_dt, duration;
        std::optional<int> trajectories;
        bool sine = false;
        std::string trace_csv, voltage_csv;
    } sim_opts;
    simulate->add_option("--power", sim_opts.power, "Laser power P");
    simulate->add_option("--coherence-time", sim_opts.coherence_time, "Coherence time tau_c [s]");
    simulate->add_option("--classical-variance", sim_opts.classical_variance,
                         "Classical phase variance C [rad^2]");
    simulate->add_option("--delay", sim_opts.delay, "Interferometer delay tau_l [s]");
    simulate->add_option("--sampling-interval", sim_opts.sampling_interval,
                         "Sampling interval tau_s [s]");
    simulate->add_option("--gain", sim_opts.gain, "Detector gain constant A");
    simulate->add_option("--response-time", sim_opts.response_time,
                         "Detector response time tau_r [s]");
    simulate->add_option("--bits", sim_opts.bits, "ADC bit depth");
    simulate->add_option("--v-min", sim_opts.v_min, "ADC range lower edge [V]");
    simulate->add_option("--v-max", sim_opts.v_max, "ADC range upper edge [V]");
    simulate->add_option("--adc-offset", sim_opts.adc_offset, "ADC partition offset [V]");
    simulate->add_option("--step-dt", sim_opts.step_dt, "Trajectory grid step [s]");
    simulate->add_option("--duration", sim_opts.duration, "Trajectory duration [s]");
    simulate->add_option("--trajectories", sim_opts.trajectories, "Number of trajectories");
    simulate->add_flag("--sine", sim_opts.sine, "Use the sine interferometer response");
    simulate->add_option("--trace-csv", sim_opts.trace_csv,
                         "Dump trajectory 0 as CSV (t,phi) under --out");
    simulate->add_option("--voltage-csv", sim_opts.voltage_csv,
                         "Dump voltages of trajectory 0 as CSV (t,v) under --out");

    // calibrate
    auto* calibrate =
        app.add_subcommand("calibrate", "Fit the voltage-variance model to a power sweep");
    std::string calib_csv;
    int curve_points = 50;
    calibrate->add_option("csv", calib_csv, "Input CSV with header power,variance")->required();
    calibrate->add_option("--curve-points", curve_points, "Points in the gamma(P) curve")
        ->check(CLI::Range(2, 100000));

    // optimize
    auto* optimize =
        app.add_subcommand("optimize", "Find the delay maximizing the generation speed");
    std::optional<double> opt_lambda;
    std::optional<double> opt_bin_width, opt_power, opt_gain, opt_tau_c;
    double cap_bits = 8.0;
    double tau_lo = 1e-3, tau_hi = 1e3;
    int sweep_points = 200;
    optimize->add_option("--lambda", opt_lambda, "Device constant lambda [sqrt(s)]");
    optimize->add_option("--bin-width", opt_bin_width, "ADC bin width a [V]");
    optimize->add_option("--power", opt_power, "Laser power P");
    optimize->add_option("--gain", opt_gain, "Detector gain constant A");
    optimize->add_option("--coherence-time", opt_tau_c, "Coherence time tau_c [s]");
    optimize->add_option("--cap", cap_bits, "Per-sample entropy cap in bits (ADC depth)");
    optimize->add_option("--tau-lo", tau_lo, "Bracket lower end [s]");
    optimize->add_option("--tau-hi", tau_hi, "Bracket upper end [s]");
    optimize->add_option("--sweep-points", sweep_points, "Points in the R_s sweep CSV")
        ->check(CLI::Range(2, 1000000));

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Run the statistical battery on a file");
    std::string series_path, bitstream_path;
    int analyze_bits = 8;
    analyze->add_option("--series", series_path, "Real-valued series (CSV; last field per row)");
    analyze->add_option("--bitstream", bitstream_path, "Packed bitstream file");
    analyze->add_option("--bits", analyze_bits, "Word size of the bitstream")
        ->check(CLI::Range(1, 24));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (seed_opt->count() > 0) global.seed = seed_value;

    try {
        if (simulate->parsed()) {
            qrng::Config config = resolve_config(global);
            auto apply = [](auto& field, const auto& opt) {
                if (opt) field = *opt;
            };
            apply(config.laser.power, sim_opts.power);
            apply(config.laser.coherence_time, sim_opts.coherence_time);
            apply(config.laser.classical_phase_variance, sim_opts.classical_variance);
            apply(config.chain.delay, sim_opts.delay);
            apply(config.chain.sampling_interval, sim_opts.sampling_interval);
            apply(config.chain.gain, sim_opts.gain);
            apply(config.chain.response_time, sim_opts.response_time);
            apply(config.adc.bits, sim_opts.bits);
            apply(config.adc.v_min, sim_opts.v_min);
            apply(config.adc.v_max, sim_opts.v_max);
            apply(config.adc.offset, sim_opts.adc_offset);
            apply(config.sim.step_dt, sim_opts.step_dt);
            apply(config.sim.duration, sim_opts.duration);
            apply(config.sim.trajectories, sim_opts.trajectories);
            return cmd_simulate(global, config, sim_opts.sine, sim_opts.trace_csv,
                                sim_opts.voltage_csv);
        }
        if (calibrate->parsed()) return cmd_calibrate(global, calib_csv, curve_points);
        if (optimize->parsed()) {
            double lambda = 0.0;
            if (opt_lambda) {
                lambda = *opt_lambda;
            } else if (opt_bin_width && opt_power && opt_gain && opt_tau_c) {
                lambda = qrng::lambda_param(*opt_bin_width, *opt_power, *opt_tau_c, *opt_gain);
            } else {
                std::cerr << "optimize: give --lambda or all of --bin-width --power --gain "
                             "--coherence-time\n";
                return 2;
            }
            return cmd_optimize(global, lambda, cap_bits, tau_lo, tau_hi, sweep_points);
        }
        if (analyze->parsed()) {
            if (series_path.empty() == bitstream_path.empty()) {
                std::cerr << "analyze: give exactly one of --series or --bitstream\n";
                return 2;
            }
            return cmd_analyze(global, series_path, bitstream_path, analyze_bits);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
