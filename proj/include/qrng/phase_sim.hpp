#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qrng/params.hpp"
#include "qrng/rng.hpp"

namespace qrng {

// Quantum phase trajectory phi_sp(t) on a uniform grid. The spontaneous-
// emission field acts as white noise on the phase, so phi_sp is a Wiener
// process: increments over disjoint intervals are independent Gaussians with
// Var = D * dt, D = 4*pi^2 / tau_c. Increments are drawn exactly; dt only
// limits where samples can be taken, it introduces no discretization error.
struct PhaseTrace {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;  // radians, values[0] == 0

    double duration() const {
        return values.empty() ? 0.0 : dt * static_cast<double>(values.size() - 1);
    }
};

// Sampled phase differences dphi[k] = phi(k*tau_s + tau_l + tau_r) - phi(k*tau_s),
// optionally plus a per-sample classical noise draw.
struct DeltaPhiSeries {
    double tau_l = 0.0;
    double tau_s = 0.0;
    bool includes_classical = false;
    std::vector<double> values;  // radians
};

// Phase diffusion coefficient D = 4*pi^2 / tau_c  [rad^2/s].
inline double diffusion_coefficient(const LaserParams& laser) {
    return 4.0 * M_PI * M_PI / laser.coherence_time;
}

// Var[dphi] = 4*pi^2 * tau_l / tau_c + C. At tau_l = tau_c and C = 0 this is
// (2*pi)^2, which is what defines the coherence time.
inline double theoretical_delta_phi_variance(const LaserParams& laser, double tau_l) {
    if (!(tau_l >= 0)) throw ValidationError("tau_l must be >= 0");
    return diffusion_coefficient(laser) * tau_l + laser.classical_phase_variance;
}

namespace detail {

// Intervals must land exactly on the grid; we reject rather than interpolate
// so the variance contracts stay exact.
inline std::size_t grid_steps(double interval, double dt, const char* name) {
    const double ratio = interval / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio)))
        throw ValidationError(std::string(name) + " is not an integer multiple of step_dt");
    return static_cast<std::size_t>(rounded);
}

}  // namespace detail

// Generate one trajectory. Pure given (laser, sim, trajectory_index): the
// master seed is split into per-trajectory substreams, so trajectories may be
// generated concurrently or in any order with identical results.
inline PhaseTrace simulate_phase_trajectory(const LaserParams& laser, const SimulationConfig& sim,
                                            std::uint64_t trajectory_index = 0) {
    check(laser);
    check(sim);
    // Snap to the grid when duration is an (FP-noisy) integer multiple of dt.
    const double ratio = sim.duration / sim.step_dt;
    const double snapped = std::round(ratio);
    const std::size_t steps = static_cast<std::size_t>(
        std::abs(ratio - snapped) <= 1e-9 * snapped ? snapped : std::floor(ratio));
    const double sigma_step = std::sqrt(diffusion_coefficient(laser) * sim.step_dt);

    // Stream 2k drives trajectory k; stream 2k+1 is reserved for its
    // classical noise draws.
    GaussianRng rng = GaussianRng::substream(sim.seed, 2 * trajectory_index);

    PhaseTrace trace;
    trace.t0 = 0.0;
    trace.dt = sim.step_dt;
    trace.values.resize(steps + 1);
    trace.values[0] = 0.0;
    double phi = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        phi += sigma_step * rng.gaussian();
        trace.values[k + 1] = phi;
    }
    return trace;
}

// Classical noise RNG matching the trajectory substream layout above.
inline GaussianRng classical_noise_rng(const SimulationConfig& sim,
                                       std::uint64_t trajectory_index = 0) {
    return GaussianRng::substream(sim.seed, 2 * trajectory_index + 1);
}

// Sample phase differences from a trace. The delay entering the difference is
// tau_l + tau_r (finite detector bandwidth). When `classical_rng` is given,
// each sample gets an independent N(0, C) classical draw added.
//
// Sample count is floor((duration - tau_l - tau_r)/tau_s); consecutive samples
// share Wiener increments when tau_l > tau_s, which is the overlap regime.
inline DeltaPhiSeries sample_phase_differences(const PhaseTrace& trace,
                                               const MeasurementChain& chain,
                                               const LaserParams& laser,
                                               GaussianRng* classical_rng = nullptr) {
    check(chain);
    check(laser);
    const double tau_eff = chain.effective_delay();
    if (trace.duration() < tau_eff + chain.sampling_interval)
        throw ValidationError("trajectory shorter than delay");

    const std::size_t lag_steps = detail::grid_steps(tau_eff, trace.dt, "delay+response_time");
    const std::size_t stride = detail::grid_steps(chain.sampling_interval, trace.dt,
                                                  "sampling_interval");
    if (stride == 0) throw ValidationError("sampling_interval smaller than step_dt");

    // floor((duration - tau_eff)/tau_s), snapping FP-noisy integer ratios
    const double span_ratio = (trace.duration() - tau_eff) / chain.sampling_interval;
    const double span_snapped = std::round(span_ratio);
    const std::size_t count = static_cast<std::size_t>(
        std::abs(span_ratio - span_snapped) <= 1e-9 * span_snapped ? span_snapped
                                                                   : std::floor(span_ratio));

    DeltaPhiSeries series;
    series.tau_l = chain.delay;
    series.tau_s = chain.sampling_interval;
    series.includes_classical = classical_rng != nullptr;
    series.values.resize(count);
    const double classical_sigma = std::sqrt(laser.classical_phase_variance);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t base = k * stride;
        double dphi = trace.values[base + lag_steps] - trace.values[base];
        if (classical_rng) dphi += classical_sigma * classical_rng->gaussian();
        series.values[k] = dphi;
    }
    return series;
}

}  // namespace qrng
