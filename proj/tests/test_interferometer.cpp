#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "helpers.hpp"
#include "qrng/calibration.hpp"
#include "qrng/interferometer.hpp"
#include "qrng/phase_sim.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;
using namespace qrng;
using testutil::rel_err;
using testutil::second_moment;

namespace {

DeltaPhiSeries make_series(std::vector<double> values) {
    DeltaPhiSeries s;
    s.tau_l = 1e-9;
    s.tau_s = 1e-9;
    s.values = std::move(values);
    return s;
}

NoiseFit make_fit(double aq, double ac, double f) {
    NoiseFit fit;
    fit.aq = aq;
    fit.ac = ac;
    fit.background = f;
    return fit;
}

}  // namespace

TEST_CASE("voltage map: zero phase gives zero volts in both modes") {
    const DeltaPhiSeries zero = make_series({0.0, 0.0, 0.0});
    LaserParams laser;
    MeasurementChain chain;
    for (auto mode : {VoltageMode::linear, VoltageMode::sine}) {
        const VoltageSeries v = phase_to_voltage(zero, laser, chain, mode);
        for (double x : v.values) CHECK(x == 0.0);
    }
}

TEST_CASE("linear mode scales by sqrt(A)*P") {
    LaserParams laser;
    laser.power = 1.0;
    MeasurementChain chain;
    chain.gain = 4.0;  // sqrt(A)*P = 2 V/rad
    const VoltageSeries v =
        phase_to_voltage(make_series({0.1}), laser, chain, VoltageMode::linear);
    CHECK_THAT(v.values[0], WithinRel(0.2, 1e-15));
    CHECK(v.tau_s == 1e-9);
}

TEST_CASE("sine and linear modes agree to 0.17% below 0.1 rad") {
    LaserParams laser;
    MeasurementChain chain;
    std::vector<double> phases;
    for (int k = 1; k <= 100; ++k) phases.push_back(0.001 * k);
    phases.push_back(-0.1);
    const DeltaPhiSeries series = make_series(phases);
    const VoltageSeries lin = phase_to_voltage(series, laser, chain, VoltageMode::linear);
    const VoltageSeries sin_v = phase_to_voltage(series, laser, chain, VoltageMode::sine);
    double worst = 0.0;
    for (std::size_t i = 0; i < phases.size(); ++i)
        worst = std::max(worst, rel_err(sin_v.values[i], lin.values[i]));
    CHECK(worst < 0.0017);
    CHECK(worst > 0.0);  // the modes genuinely differ
}

TEST_CASE("phase_to_voltage is odd") {
    LaserParams laser;
    laser.power = 1.7;
    MeasurementChain chain;
    chain.gain = 2.3;
    const std::vector<double> phases{0.05, -0.2, 1.4, -2.9};
    std::vector<double> negated;
    for (double p : phases) negated.push_back(-p);
    for (auto mode : {VoltageMode::linear, VoltageMode::sine}) {
        const VoltageSeries v = phase_to_voltage(make_series(phases), laser, chain, mode);
        const VoltageSeries w = phase_to_voltage(make_series(negated), laser, chain, mode);
        for (std::size_t i = 0; i < phases.size(); ++i) CHECK(w.values[i] == -v.values[i]);
    }
}

TEST_CASE("voltage variance model") {
    const NoiseFit fit = make_fit(2.0, 0.5, 0.1);
    CHECK_THAT(voltage_variance(fit, 1.0), WithinRel(2.6, 1e-15));
    CHECK_THAT(voltage_variance(fit, 1e-12), WithinRel(0.1, 1e-9));  // background only
}

TEST_CASE("planted-fit round trip preserves the variance curve") {
    const NoiseFit truth = make_fit(2.0, 0.5, 0.1);
    std::vector<CalibrationSample> sweep;
    for (double p : {0.5, 1.0, 1.5, 2.0, 2.5})
        sweep.push_back({p, voltage_variance(truth, p)});
    const CalibrationFit recovered = fit_noise_model(sweep);
    for (double p : {0.25, 0.7, 1.3, 3.0})
        CHECK(rel_err(voltage_variance(recovered.fit, p), voltage_variance(truth, p)) < 1e-6);
}

TEST_CASE("quantum signal to classical noise ratio") {
    const NoiseFit fit = make_fit(2.0, 0.5, 0.1);
    CHECK_THAT(snr_gamma(fit, 1.0), WithinRel(10.0 / 3.0, 1e-15));
    CHECK(snr_gamma(make_fit(0.0, 0.5, 0.1), 1.0) == 0.0);
    CHECK(snr_gamma(make_fit(0.0, 0.5, 0.1), 7.0) == 0.0);
    REQUIRE_THROWS_MATCHES(
        snr_gamma(make_fit(2.0, 0.0, 0.0), 1.0), ValidationError,
        Catch::Matchers::MessageMatches(ContainsSubstring("classical noise floor is zero")));
}

TEST_CASE("optimal power maximizes gamma") {
    const NoiseFit fit = make_fit(2.0, 0.5, 0.1);
    const double p_star = optimal_power(fit);
    CHECK_THAT(p_star, WithinRel(0.4472135954999579, 1e-12));
    CHECK_THAT(snr_gamma(fit, p_star), WithinRel(4.47213595499958, 1e-12));
    CHECK(optimal_power(make_fit(1.0, 1.0, 1.0)) == 1.0);

    // dense log grid oracle: no grid point beats the stationary point
    const double gamma_star = snr_gamma(fit, p_star);
    for (int i = 0; i <= 1000; ++i) {
        const double p = p_star * std::pow(10.0, -2.0 + 4.0 * i / 1000.0);
        CHECK(snr_gamma(fit, p) <= gamma_star * (1.0 + 1e-12));
    }

    REQUIRE_THROWS_MATCHES(optimal_power(make_fit(2.0, 0.0, 0.1)), ValidationError,
                           Catch::Matchers::MessageMatches(ContainsSubstring("monotone")));
    REQUIRE_THROWS_AS(optimal_power(make_fit(2.0, 0.5, 0.0)), ValidationError);
}

TEST_CASE("quantum share of the voltage variance") {
    CHECK(quantum_voltage_variance(2.6, std::numeric_limits<double>::infinity()) == 2.6);
    CHECK_THAT(quantum_voltage_variance(2.6, 1e300), WithinRel(2.6, 1e-12));
    CHECK_THAT(quantum_voltage_variance(3.0, 1.0), WithinRel(1.5, 1e-15));
    CHECK_THAT(quantum_voltage_variance(2.6, 10.0 / 3.0), WithinRel(2.0, 1e-14));
}

TEST_CASE("decomposition identity recovers the quantum term exactly") {
    for (double aq : {0.3, 2.0, 11.0}) {
        for (double p : {0.05, 1.0, 17.0}) {
            const NoiseFit fit = make_fit(aq, 0.37, 0.041);
            const double total = voltage_variance(fit, p);
            const double gamma = snr_gamma(fit, p);
            CHECK_THAT(quantum_voltage_variance(total, gamma), WithinRel(aq * p, 1e-12));
        }
    }
}

TEST_CASE("empirical voltage variance matches the diffusion prediction") {
    LaserParams laser;
    laser.power = 0.8;
    laser.coherence_time = 1e-6;
    MeasurementChain chain;
    chain.delay = 1e-9;
    chain.sampling_interval = 1e-9;
    chain.gain = 2.5;
    SimulationConfig sim;
    sim.seed = 13;
    sim.step_dt = 1e-10;
    sim.duration = 1.001e-4;
    const PhaseTrace trace = simulate_phase_trajectory(laser, sim);
    const DeltaPhiSeries dphi = sample_phase_differences(trace, chain, laser);
    const VoltageSeries v = phase_to_voltage(dphi, laser, chain, VoltageMode::linear);
    REQUIRE(v.values.size() >= 100000);
    const double predicted = chain.gain * laser.power * laser.power *
                             theoretical_delta_phi_variance(laser, chain.delay);
    CHECK(rel_err(second_moment(v.values), predicted) < 0.02);
}

TEST_CASE("quantum voltage sigma follows the effective delay") {
    LaserParams laser;
    laser.power = 2.0;
    laser.coherence_time = 1e-6;
    MeasurementChain chain;
    chain.delay = 4e-10;
    chain.response_time = 1e-10;
    chain.sampling_interval = 1e-9;
    chain.gain = 9.0;
    // 2*pi*P*sqrt(A*(tau_l+tau_r)/tau_c) with the numbers above
    const double expected = 2.0 * M_PI * 2.0 * std::sqrt(9.0 * 5e-10 / 1e-6);
    CHECK_THAT(quantum_voltage_sigma(laser, chain), WithinRel(expected, 1e-14));
}
