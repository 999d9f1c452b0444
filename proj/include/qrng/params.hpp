#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qrng {

// Thrown when a parameter violates an invariant. The message names the field
// and the constraint.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown on malformed input files (config, CSV). Messages carry line numbers.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Physical source parameters. Units are SI (watts, seconds, radians^2), but
// only ratios enter the physics, so any consistent unit system works.
struct LaserParams {
    double power = 1.0;                     // P, laser output power
    double coherence_time = 1e-6;           // tau_c: delay over which the quantum
                                            // phase variance reaches (2*pi)^2
    double classical_phase_variance = 0.0;  // C, per-sample classical contribution
};

// Interferometer delay, detector gain and response, ADC sampling interval.
struct MeasurementChain {
    double delay = 5e-10;             // tau_l, arm delay difference
    double sampling_interval = 1e-9;  // tau_s, time between ADC samples
    double gain = 1.0;                // A: V = sqrt(A)*P*dphi in the linear model
    double response_time = 0.0;       // tau_r, detector response time

    // Finite detector bandwidth integrates over tau_r, so the delay that
    // enters the variance law is tau_l + tau_r.
    double effective_delay() const { return delay + response_time; }
};

// Coefficients of the voltage-variance model <V^2> = AQ*P + AC*P^2 + F.
struct NoiseFit {
    double aq = 0.0;          // AQ, quantum term coefficient
    double ac = 0.0;          // AC, classical term coefficient
    double background = 0.0;  // F, power-independent background noise
};

struct AdcParams {
    int bits = 8;         // bit depth b, 2^b bins
    double v_min = -0.6;  // full-scale range [v_min, v_max)
    double v_max = 0.6;
    double offset = 0.0;  // partition shift applied to all bin edges

    int bin_count() const { return 1 << bits; }
    double bin_width() const { return (v_max - v_min) / bin_count(); }
};

struct SimulationConfig {
    std::uint64_t seed = 1;
    double step_dt = 5e-11;  // trajectory grid spacing
    double duration = 1e-5;  // trajectory length in seconds
    int trajectories = 1;
};

struct Config {
    LaserParams laser;
    MeasurementChain chain;
    AdcParams adc;
    SimulationConfig sim;
};

namespace detail {

inline void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

inline void require_finite(double v, const std::string& field) {
    require(std::isfinite(v), field + " must be finite");
}

}  // namespace detail

inline void check(const LaserParams& laser) {
    detail::require_finite(laser.power, "laser.power");
    detail::require_finite(laser.coherence_time, "laser.coherence_time");
    detail::require_finite(laser.classical_phase_variance, "laser.classical_phase_variance");
    detail::require(laser.power > 0, "laser.power must be > 0");
    detail::require(laser.coherence_time > 0, "laser.coherence_time must be > 0");
    detail::require(laser.classical_phase_variance >= 0,
                    "laser.classical_phase_variance must be >= 0");
}

inline void check(const MeasurementChain& chain) {
    detail::require_finite(chain.delay, "chain.delay");
    detail::require_finite(chain.sampling_interval, "chain.sampling_interval");
    detail::require_finite(chain.gain, "chain.gain");
    detail::require_finite(chain.response_time, "chain.response_time");
    detail::require(chain.delay > 0, "chain.delay must be > 0");
    detail::require(chain.sampling_interval > 0, "chain.sampling_interval must be > 0");
    detail::require(chain.gain > 0, "chain.gain must be > 0");
    detail::require(chain.response_time >= 0, "chain.response_time must be >= 0");
    detail::require(chain.sampling_interval > chain.response_time,
                    "chain.sampling_interval must exceed response_time");
}

inline void check(const NoiseFit& fit) {
    detail::require_finite(fit.aq, "fit.aq");
    detail::require_finite(fit.ac, "fit.ac");
    detail::require_finite(fit.background, "fit.background");
    detail::require(fit.aq >= 0, "fit.aq must be >= 0");
    detail::require(fit.ac >= 0, "fit.ac must be >= 0");
    detail::require(fit.background >= 0, "fit.background must be >= 0");
}

inline void check(const AdcParams& adc) {
    detail::require(adc.bits >= 1, "adc.bits must be >= 1");
    detail::require(adc.bits <= 24, "adc.bits must be <= 24");
    detail::require_finite(adc.v_min, "adc.v_min");
    detail::require_finite(adc.v_max, "adc.v_max");
    detail::require_finite(adc.offset, "adc.offset");
    detail::require(adc.v_min < adc.v_max, "adc.v_min must be < adc.v_max");
    detail::require(adc.bin_width() > 0, "adc bin width must be > 0");
}

inline void check(const SimulationConfig& sim) {
    detail::require_finite(sim.step_dt, "sim.step_dt");
    detail::require_finite(sim.duration, "sim.duration");
    detail::require(sim.step_dt > 0, "sim.step_dt must be > 0");
    detail::require(sim.duration > 0, "sim.duration must be > 0");
    detail::require(sim.trajectories >= 1, "sim.trajectories must be >= 1");
}

// Full cross-field validation. Idempotent; returns its argument unchanged.
inline Config validate(const Config& config) {
    check(config.laser);
    check(config.chain);
    check(config.adc);
    check(config.sim);
    detail::require(config.laser.coherence_time > config.chain.response_time,
                    "laser.coherence_time must exceed chain.response_time");
    // Resolution rule: at least 10 grid steps per delay and per sampling interval.
    const double finest = std::min(config.chain.delay, config.chain.sampling_interval);
    detail::require(config.sim.step_dt <= finest / 10.0,
                    "sim.step_dt must be <= min(chain.delay, chain.sampling_interval)/10");
    detail::require(config.sim.duration >= config.chain.effective_delay() +
                                               config.chain.sampling_interval,
                    "sim.duration: trajectory shorter than delay");
    return config;
}

}  // namespace qrng
