#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "qrng/params.hpp"
#include "qrng/phase_sim.hpp"

namespace qrng {

struct VoltageSeries {
    double tau_s = 0.0;
    std::vector<double> values;  // volts
};

// The interferometer output is V ∝ sin(dphi), linearized to V ∝ dphi for
// small phase differences. Both mappings are kept so the small-angle validity
// can itself be tested; `linear` is the default model.
enum class VoltageMode { linear, sine };

// V = sqrt(A) * P * dphi (linear) or sqrt(A) * P * sin(dphi). sqrt(A)*P is the
// single volts-per-radian gain; the absolute interference scale is absorbed
// into A.
inline VoltageSeries phase_to_voltage(const DeltaPhiSeries& series, const LaserParams& laser,
                                      const MeasurementChain& chain,
                                      VoltageMode mode = VoltageMode::linear) {
    check(laser);
    check(chain);
    const double scale = std::sqrt(chain.gain) * laser.power;
    VoltageSeries out;
    out.tau_s = series.tau_s;
    out.values.resize(series.values.size());
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const double dphi = series.values[i];
        out.values[i] = scale * (mode == VoltageMode::linear ? dphi : std::sin(dphi));
    }
    return out;
}

// <V^2> = AQ*P + AC*P^2 + F.
inline double voltage_variance(const NoiseFit& fit, double power) {
    check(fit);
    if (!(power > 0)) throw ValidationError("power must be > 0");
    return fit.aq * power + fit.ac * power * power + fit.background;
}

// Quantum-signal-to-classical-noise ratio gamma = AQ*P / (AC*P^2 + F).
// A zero classical floor is an error rather than +inf: callers that model no
// classical noise must use the explicit quantum-only path.
inline double snr_gamma(const NoiseFit& fit, double power) {
    check(fit);
    if (!(power > 0)) throw ValidationError("power must be > 0");
    const double floor = fit.ac * power * power + fit.background;
    if (floor <= 0) throw ValidationError("classical noise floor is zero; gamma undefined");
    return fit.aq * power / floor;
}

// The unique maximizer of gamma over P: P* = sqrt(F/AC), where
// gamma(P*) = AQ / (2*sqrt(AC*F)). With AC = 0 or F = 0 gamma is monotone in
// P and has no interior optimum.
inline double optimal_power(const NoiseFit& fit) {
    check(fit);
    if (fit.ac <= 0 || fit.background <= 0)
        throw ValidationError("gamma is monotone in power; no interior optimum");
    return std::sqrt(fit.background / fit.ac);
}

// Quantum share of the voltage variance: <V_Q^2> = gamma/(gamma+1) * <V^2>.
inline double quantum_voltage_variance(double total_variance, double gamma) {
    if (!(total_variance >= 0)) throw ValidationError("total_variance must be >= 0");
    if (!(gamma >= 0)) throw ValidationError("gamma must be >= 0");
    if (std::isinf(gamma)) return total_variance;  // noiseless limit
    return gamma / (gamma + 1.0) * total_variance;
}

// sigma_Q = 2*pi*P*sqrt(A*(tau_l+tau_r)/tau_c): the standard deviation of the
// quantum voltage in the linear model, from Var V = A*P^2*4*pi^2*tau/tau_c.
inline double quantum_voltage_sigma(const LaserParams& laser, const MeasurementChain& chain) {
    check(laser);
    check(chain);
    return 2.0 * M_PI * laser.power *
           std::sqrt(chain.gain * chain.effective_delay() / laser.coherence_time);
}

}  // namespace qrng
