#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qrng/params.hpp"
#include "qrng/quantizer.hpp"

namespace qrng {

// Min-entropy H_inf = -log2(max_k p_k), the conservative randomness measure.
inline double min_entropy(const BinDistribution& dist) {
    if (dist.probabilities.empty()) throw ValidationError("empty distribution");
    const double p_max = *std::max_element(dist.probabilities.begin(), dist.probabilities.end());
    return -std::log2(p_max);
}

// lambda = (a / (4*pi*P)) * sqrt(tau_c / A)  [sqrt(seconds)].
// Collapses the device parameters into the single constant that, with tau_l,
// fixes the worst-case per-sample randomness.
inline double lambda_param(double bin_width, double power, double tau_c, double gain) {
    if (!(bin_width > 0)) throw ValidationError("bin_width must be > 0");
    if (!(power > 0)) throw ValidationError("power must be > 0");
    if (!(tau_c > 0)) throw ValidationError("tau_c must be > 0");
    if (!(gain > 0)) throw ValidationError("gain must be > 0");
    return bin_width / (4.0 * M_PI * power) * std::sqrt(tau_c / gain);
}

// Worst-case bits per sample:
//   R0 = min(-log2(2*Phi(lambda/sqrt(tau_l)) - 1), cap_bits).
// The closed form is the probability of the bin centered on the Gaussian peak
// under the worst-case partition. It diverges as tau_l grows, but a b-bit ADC
// emits at most b bits per sample, hence the cap.
inline double per_sample_randomness(double lambda, double tau_l, double cap_bits) {
    if (!(lambda > 0)) throw ValidationError("lambda must be > 0");
    if (!(tau_l > 0)) throw ValidationError("tau_l must be > 0");
    if (!(cap_bits > 0)) throw ValidationError("cap_bits must be > 0");
    const double z = lambda / std::sqrt(tau_l);
    // 2*Phi(z) - 1 = erf(z/sqrt(2)); near p = 1 use log1p(-erfc) for accuracy.
    const double tail = std::erfc(z * M_SQRT1_2);
    if (tail <= 0) return 0.0;  // all mass in one bin
    const double r0 = -std::log1p(-tail) / M_LN2;
    return std::min(r0, cap_bits);
}

// Generation speed R_s = R0 / tau_l  [bits/s] at the tau_s = tau_l operating
// point (sampling faster only overlaps samples; the overlap is equivalent to
// sampling with the shorter delay).
inline double generation_speed(double lambda, double tau_l, double cap_bits) {
    return per_sample_randomness(lambda, tau_l, cap_bits) / tau_l;
}

// Total randomness emitted over a measurement window of T seconds.
inline double total_randomness(double lambda, double tau_l, double cap_bits, double window) {
    if (!(window >= 0)) throw ValidationError("window must be >= 0");
    return window * generation_speed(lambda, tau_l, cap_bits);
}

struct DelayOptimum {
    double tau_opt = 0.0;  // seconds
    double rs_max = 0.0;   // bits per second
};

// Maximize generation_speed over tau_l in [tau_lo, tau_hi] by golden-section
// search on log(tau). The bracket must contain an interior maximum, verified
// by comparing the endpoints against the geometric midpoint. Deterministic;
// converges to 1e-6 relative tolerance on tau.
inline DelayOptimum optimize_delay(double lambda, double cap_bits, double tau_lo, double tau_hi) {
    if (!(lambda > 0)) throw ValidationError("lambda must be > 0");
    if (!(cap_bits > 0)) throw ValidationError("cap_bits must be > 0");
    if (!(tau_lo > 0) || !(tau_hi > tau_lo))
        throw ValidationError("bracket must satisfy 0 < tau_lo < tau_hi");

    const auto f = [&](double log_tau) {
        return generation_speed(lambda, std::exp(log_tau), cap_bits);
    };
    double lo = std::log(tau_lo);
    double hi = std::log(tau_hi);
    if (f(0.5 * (lo + hi)) <= std::max(f(lo), f(hi)))
        throw ValidationError("expand bracket: no interior maximum between tau_lo and tau_hi");

    constexpr double inv_phi = 0.6180339887498949;  // 1/golden ratio
    constexpr double rel_tol = 1e-6;                // log-width ~ relative width
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > rel_tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    DelayOptimum result;
    result.tau_opt = std::exp(0.5 * (lo + hi));
    result.rs_max = generation_speed(lambda, result.tau_opt, cap_bits);
    return result;
}

// With a photon-number-resolving detector seeing at most N photons per sample,
// the sample has at most N+1 outcomes, so the entropy is capped at log2(N+1)
// regardless of ADC resolution.
inline double photon_number_entropy_cap(std::uint64_t photons_per_sample) {
    return std::log2(static_cast<double>(photons_per_sample) + 1.0);
}

struct EntropyReport {
    double lambda = 0.0;    // sqrt(seconds)
    double tau_l = 0.0;     // seconds
    double r0 = 0.0;        // bits per sample at tau_l
    double rs = 0.0;        // bits per second at tau_l
    double tau_opt = 0.0;   // seconds
    double rs_max = 0.0;    // bits per second at tau_opt
    double cap_bits = 0.0;  // bits
};

inline EntropyReport make_entropy_report(double lambda, double tau_l, double cap_bits,
                                         double tau_lo, double tau_hi) {
    EntropyReport report;
    report.lambda = lambda;
    report.tau_l = tau_l;
    report.cap_bits = cap_bits;
    report.r0 = per_sample_randomness(lambda, tau_l, cap_bits);
    report.rs = generation_speed(lambda, tau_l, cap_bits);
    const DelayOptimum opt = optimize_delay(lambda, cap_bits, tau_lo, tau_hi);
    report.tau_opt = opt.tau_opt;
    report.rs_max = opt.rs_max;
    return report;
}

}  // namespace qrng
