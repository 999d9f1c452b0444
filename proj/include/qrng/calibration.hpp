#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <set>
#include <string>
#include <vector>

#include "qrng/config.hpp"
#include "qrng/params.hpp"

namespace qrng {

// One point of a (power, voltage-variance) calibration sweep.
struct CalibrationSample {
    double power = 0.0;     // watts
    double variance = 0.0;  // volts^2
};

namespace detail {

inline double parse_csv_field(const std::string& field, int line_no, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0' || !std::isfinite(v))
        throw ParseError("line " + std::to_string(line_no) + ": non-numeric " + what);
    return v;
}

}  // namespace detail

// Reads a `power,variance` CSV. Header required; rows validated in order.
inline std::vector<CalibrationSample> load_calibration_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file: missing 'power,variance' header");
    if (detail::trim(line) != "power,variance")
        throw ParseError("line 1: expected header 'power,variance'");

    std::vector<CalibrationSample> samples;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = detail::trim(line);
        if (trimmed.empty()) continue;
        const auto comma = trimmed.find(',');
        if (comma == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected 'power,variance'");
        CalibrationSample s;
        s.power = detail::parse_csv_field(detail::trim(trimmed.substr(0, comma)), line_no, "power");
        s.variance =
            detail::parse_csv_field(detail::trim(trimmed.substr(comma + 1)), line_no, "variance");
        if (s.power <= 0)
            throw ParseError("line " + std::to_string(line_no) + ": non-positive power");
        if (s.variance < 0)
            throw ParseError("line " + std::to_string(line_no) + ": negative variance");
        samples.push_back(s);
    }
    if (samples.empty()) throw ParseError("no samples");
    return samples;
}

inline std::vector<CalibrationSample> load_calibration_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open calibration file '" + path + "'");
    return load_calibration_csv(in);
}

struct CalibrationFit {
    NoiseFit fit;
    double residual_rms = 0.0;  // of the returned (possibly clamped) coefficients
    bool clamped = false;       // true if any least-squares coefficient was negative
};

namespace detail {

// Least squares for the n x 3 system [P, P^2, 1] * x = y via Householder QR.
// The monomial basis is ill-conditioned over wide power ranges, so an
// orthogonal decomposition is used instead of normal equations.
inline void householder_solve_3(std::vector<double>& p, std::vector<double>& p2,
                                std::vector<double>& ones, std::vector<double>& y,
                                double coeffs[3]) {
    const std::size_t n = p.size();
    std::vector<double>* cols[3] = {&p, &p2, &ones};

    double max_diag = 0.0;
    double diag[3];
    for (int j = 0; j < 3; ++j) {
        std::vector<double>& col = *cols[j];
        // Householder vector for column j, rows j..n-1
        double norm = 0.0;
        for (std::size_t i = j; i < n; ++i) norm += col[i] * col[i];
        norm = std::sqrt(norm);
        const double alpha = (col[j] >= 0) ? -norm : norm;
        diag[j] = alpha;
        max_diag = std::max(max_diag, std::abs(alpha));
        if (norm == 0.0) continue;

        std::vector<double> v(n - j);
        v[0] = col[j] - alpha;
        for (std::size_t i = j + 1; i < n; ++i) v[i - j] = col[i];
        double vtv = 0.0;
        for (double x : v) vtv += x * x;
        if (vtv == 0.0) continue;

        const auto reflect = [&](std::vector<double>& target) {
            double dot = 0.0;
            for (std::size_t i = j; i < n; ++i) dot += v[i - j] * target[i];
            const double scale = 2.0 * dot / vtv;
            for (std::size_t i = j; i < n; ++i) target[i] -= scale * v[i - j];
        };
        for (int jj = j; jj < 3; ++jj) reflect(*cols[jj]);
        reflect(y);
    }

    for (int j = 0; j < 3; ++j)
        if (std::abs(diag[j]) <= 1e-12 * max_diag)
            throw ValidationError("ill-conditioned sweep: design matrix is rank-deficient");

    // Back-substitute R x = Q^T y using the triangular factor now stored in
    // the transformed columns.
    const double r00 = diag[0], r01 = p2[0], r02 = ones[0];
    const double r11 = diag[1], r12 = ones[1];
    const double r22 = diag[2];
    coeffs[2] = y[2] / r22;
    coeffs[1] = (y[1] - r12 * coeffs[2]) / r11;
    coeffs[0] = (y[0] - r01 * coeffs[1] - r02 * coeffs[2]) / r00;
}

}  // namespace detail

// Fit <V^2> = AQ*P + AC*P^2 + F to a calibration sweep. Requires at least 3
// distinct powers. Negative fitted coefficients are clamped to zero with the
// `clamped` flag raised; the reported residual is that of the returned fit.
inline CalibrationFit fit_noise_model(const std::vector<CalibrationSample>& samples) {
    std::set<double> distinct;
    for (const CalibrationSample& s : samples) {
        if (!(s.power > 0) || !std::isfinite(s.power))
            throw ValidationError("calibration power must be positive and finite");
        if (!(s.variance >= 0) || !std::isfinite(s.variance))
            throw ValidationError("calibration variance must be non-negative and finite");
        distinct.insert(s.power);
    }
    if (distinct.size() < 3)
        throw ValidationError("underdetermined: need at least 3 distinct power values");

    const std::size_t n = samples.size();
    std::vector<double> p(n), p2(n), ones(n, 1.0), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = samples[i].power;
        p2[i] = samples[i].power * samples[i].power;
        y[i] = samples[i].variance;
    }

    double coeffs[3];
    detail::householder_solve_3(p, p2, ones, y, coeffs);

    CalibrationFit result;
    for (double& c : coeffs) {
        if (c < 0) {
            c = 0.0;
            result.clamped = true;
        }
    }
    result.fit.aq = coeffs[0];
    result.fit.ac = coeffs[1];
    result.fit.background = coeffs[2];

    double ss = 0.0;
    for (const CalibrationSample& s : samples) {
        const double predicted =
            result.fit.aq * s.power + result.fit.ac * s.power * s.power + result.fit.background;
        const double r = predicted - s.variance;
        ss += r * r;
    }
    result.residual_rms = std::sqrt(ss / static_cast<double>(n));
    return result;
}

}  // namespace qrng
