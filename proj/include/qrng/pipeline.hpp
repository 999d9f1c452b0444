#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "qrng/config.hpp"
#include "qrng/interferometer.hpp"
#include "qrng/params.hpp"
#include "qrng/phase_sim.hpp"
#include "qrng/quantizer.hpp"
#include "qrng/report.hpp"

namespace qrng {

// Output of one end-to-end run: trajectory -> phase differences -> voltage ->
// ADC bins -> packed bitstream, plus the empirical-vs-predicted variance
// bookkeeping for the run report.
struct SimulationResult {
    Config config;  // resolved configuration actually used
    VoltageMode mode = VoltageMode::linear;
    std::vector<std::uint32_t> bins;  // all trajectories, in order
    Bitstream bitstream;
    std::size_t samples = 0;
    double empirical_dphi_variance = 0.0;
    double predicted_dphi_variance = 0.0;
    double empirical_voltage_variance = 0.0;
    double predicted_voltage_variance = 0.0;
};

// Deterministic given the config: trajectories use substreams of sim.seed and
// are concatenated in index order.
inline SimulationResult run_simulation(const Config& raw_config,
                                       VoltageMode mode = VoltageMode::linear) {
    const Config config = validate(raw_config);
    SimulationResult result;
    result.config = config;
    result.mode = mode;

    const bool classical = config.laser.classical_phase_variance > 0;
    double sum = 0.0, sum_sq = 0.0;
    double v_sum = 0.0, v_sum_sq = 0.0;
    std::size_t count = 0;

    for (int t = 0; t < config.sim.trajectories; ++t) {
        const PhaseTrace trace =
            simulate_phase_trajectory(config.laser, config.sim, static_cast<std::uint64_t>(t));
        GaussianRng noise = classical_noise_rng(config.sim, static_cast<std::uint64_t>(t));
        const DeltaPhiSeries dphi = sample_phase_differences(
            trace, config.chain, config.laser, classical ? &noise : nullptr);
        const VoltageSeries volts = phase_to_voltage(dphi, config.laser, config.chain, mode);
        const std::vector<std::uint32_t> bins = quantize(volts, config.adc);
        result.bins.insert(result.bins.end(), bins.begin(), bins.end());
        for (double x : dphi.values) {
            sum += x;
            sum_sq += x * x;
        }
        for (double v : volts.values) {
            v_sum += v;
            v_sum_sq += v * v;
        }
        count += dphi.values.size();
    }

    result.samples = count;
    if (count > 1) {
        const double n = static_cast<double>(count);
        result.empirical_dphi_variance = (sum_sq - sum * sum / n) / (n - 1);
        result.empirical_voltage_variance = (v_sum_sq - v_sum * v_sum / n) / (n - 1);
    }
    result.predicted_dphi_variance =
        theoretical_delta_phi_variance(config.laser, config.chain.effective_delay());
    result.predicted_voltage_variance = config.chain.gain * config.laser.power *
                                        config.laser.power * result.predicted_dphi_variance;
    result.bitstream = pack_bins(result.bins, config.adc.bits);
    return result;
}

inline void write_simulation_report(std::ostream& out, const SimulationResult& r) {
    ReportWriter w(out);
    w.section("simulate");
    write_config_section(w, r.config);
    w.section("results");
    w.kv("voltage_mode", r.mode == VoltageMode::linear ? "linear" : "sine");
    w.kv("samples", static_cast<std::uint64_t>(r.samples));
    w.kv("dphi_variance_empirical", r.empirical_dphi_variance);
    w.kv("dphi_variance_predicted", r.predicted_dphi_variance);
    w.kv("voltage_variance_empirical", r.empirical_voltage_variance);
    w.kv("voltage_variance_predicted", r.predicted_voltage_variance);
    w.kv("bitstream_bytes", static_cast<std::uint64_t>(r.bitstream.bytes.size()));
    w.kv("bitstream_valid_bits", static_cast<std::uint64_t>(r.bitstream.valid_bits));
}

}  // namespace qrng
