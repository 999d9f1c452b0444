#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "qrng/config.hpp"
#include "qrng/entropy.hpp"
#include "qrng/interferometer.hpp"
#include "qrng/phase_sim.hpp"

namespace qrng {

// Plain-text `key: value` report grammar; append-only and diffable.
class ReportWriter {
public:
    explicit ReportWriter(std::ostream& out) : out_(out) {}

    void kv(const std::string& key, const std::string& value) {
        out_ << key << ": " << value << "\n";
    }
    void kv(const std::string& key, double value) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        kv(key, std::string(buf));
    }
    void kv(const std::string& key, std::uint64_t value) { out_ << key << ": " << value << "\n"; }
    void kv(const std::string& key, int value) { out_ << key << ": " << value << "\n"; }
    void section(const std::string& title) { out_ << "# " << title << "\n"; }
    void raw(const std::string& text) { out_ << text; }

private:
    std::ostream& out_;
};

// Embed the full resolved configuration, one `config.key: value` line each,
// so a report alone reproduces the run.
inline void write_config_section(ReportWriter& w, const Config& c) {
    w.section("configuration");
    w.kv("config.laser.power", c.laser.power);
    w.kv("config.laser.coherence_time", c.laser.coherence_time);
    w.kv("config.laser.classical_phase_variance", c.laser.classical_phase_variance);
    w.kv("config.chain.delay", c.chain.delay);
    w.kv("config.chain.sampling_interval", c.chain.sampling_interval);
    w.kv("config.chain.gain", c.chain.gain);
    w.kv("config.chain.response_time", c.chain.response_time);
    w.kv("config.adc.bits", c.adc.bits);
    w.kv("config.adc.v_min", c.adc.v_min);
    w.kv("config.adc.v_max", c.adc.v_max);
    w.kv("config.adc.offset", c.adc.offset);
    w.kv("config.sim.seed", c.sim.seed);
    w.kv("config.sim.step_dt", c.sim.step_dt);
    w.kv("config.sim.duration", c.sim.duration);
    w.kv("config.sim.trajectories", c.sim.trajectories);
}

inline void write_phase_trace_csv(std::ostream& out, const PhaseTrace& trace) {
    out << "t,phi\n";
    char buf[80];
    for (std::size_t k = 0; k < trace.values.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n",
                      trace.t0 + static_cast<double>(k) * trace.dt, trace.values[k]);
        out << buf;
    }
}

inline void write_voltage_csv(std::ostream& out, const VoltageSeries& series) {
    out << "t,v\n";
    char buf[80];
    for (std::size_t k = 0; k < series.values.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n",
                      static_cast<double>(k) * series.tau_s, series.values[k]);
        out << buf;
    }
}

// Generation-speed sweep on a log grid, for plotting R_s against tau_l.
inline void write_rs_sweep_csv(std::ostream& out, double lambda, double cap_bits, double tau_lo,
                               double tau_hi, int points) {
    if (points < 2) throw ValidationError("sweep needs at least 2 points");
    out << "tau_l,R0,Rs\n";
    char buf[120];
    const double log_lo = std::log(tau_lo);
    const double log_hi = std::log(tau_hi);
    for (int i = 0; i < points; ++i) {
        const double tau =
            std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) / (points - 1));
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", tau,
                      per_sample_randomness(lambda, tau, cap_bits),
                      generation_speed(lambda, tau, cap_bits));
        out << buf;
    }
}

}  // namespace qrng
