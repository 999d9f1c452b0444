#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "qrng/params.hpp"

namespace qrng {

// Adjacent differences d'[k] = raw[k+1] - raw[k]. For overlapped sampling with
// tau_l = n*tau_s the differenced series reduces to b[k+n] - b[k] with
// independent single-step increments b, which removes the lag-1..n-1
// correlation (a lag-n correlation of -1/2 remains).
inline std::vector<double> difference_series(const std::vector<double>& raw) {
    if (raw.size() < 2) throw ValidationError("difference_series needs at least 2 values");
    std::vector<double> out(raw.size() - 1);
    for (std::size_t i = 0; i + 1 < raw.size(); ++i) out[i] = raw[i + 1] - raw[i];
    return out;
}

// Bitwise XOR of two equal-length packed bit buffers.
inline std::vector<std::uint8_t> xor_whiten(const std::vector<std::uint8_t>& bits_a,
                                            const std::vector<std::uint8_t>& bits_b) {
    if (bits_a.size() != bits_b.size())
        throw ValidationError("xor_whiten: length mismatch");
    std::vector<std::uint8_t> out(bits_a.size());
    for (std::size_t i = 0; i < bits_a.size(); ++i) out[i] = bits_a[i] ^ bits_b[i];
    return out;
}

// XOR of every two adjacent digitized words; the whitening actually applied to
// an overlapped sample stream. Output length shrinks by 1.
inline std::vector<std::uint32_t> xor_adjacent(const std::vector<std::uint32_t>& words) {
    if (words.size() < 2) throw ValidationError("xor_adjacent needs at least 2 words");
    std::vector<std::uint32_t> out(words.size() - 1);
    for (std::size_t i = 0; i + 1 < words.size(); ++i) out[i] = words[i + 1] ^ words[i];
    return out;
}

// Biased normalized autocorrelation estimator
//   r(m) = sum (x_k - xbar)(x_{k+m} - xbar) / sum (x_k - xbar)^2,
// guaranteed r(m) in [-1, 1], r(0) = 1.
inline std::vector<double> autocorrelation(const std::vector<double>& series, int max_lag) {
    if (max_lag < 0) throw ValidationError("max_lag must be >= 0");
    if (series.size() <= static_cast<std::size_t>(max_lag) + 1)
        throw ValidationError("series length must exceed max_lag + 1");
    const std::size_t n = series.size();
    double mean = 0.0;
    for (double x : series) mean += x;
    mean /= static_cast<double>(n);
    double denom = 0.0;
    for (double x : series) denom += (x - mean) * (x - mean);
    if (denom == 0.0) throw ValidationError("degenerate series: zero variance");

    std::vector<double> r(max_lag + 1);
    for (int m = 0; m <= max_lag; ++m) {
        double acc = 0.0;
        for (std::size_t k = 0; k + m < n; ++k)
            acc += (series[k] - mean) * (series[k + m] - mean);
        r[m] = acc / denom;
    }
    return r;
}

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
};

// Pearson statistic of observed bin indices against the uniform null.
// Requires every index < bin_count and at least 5 samples per bin on average.
inline ChiSquareResult chi_square_uniformity(const std::vector<std::uint32_t>& bins,
                                             std::uint32_t bin_count) {
    if (bin_count < 2) throw ValidationError("bin_count must be >= 2");
    if (bins.size() < 5ull * bin_count)
        throw ValidationError("need at least 5 samples per bin");
    std::vector<std::size_t> counts(bin_count, 0);
    for (std::uint32_t b : bins) {
        if (b >= bin_count) throw ValidationError("bin index out of range");
        ++counts[b];
    }
    const double expected = static_cast<double>(bins.size()) / bin_count;
    double stat = 0.0;
    for (std::size_t c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return {stat, static_cast<int>(bin_count) - 1};
}

// Pearson statistic against an arbitrary expected distribution.
inline ChiSquareResult chi_square_gof(const std::vector<std::size_t>& counts,
                                      const std::vector<double>& expected_probs) {
    if (counts.size() != expected_probs.size() || counts.empty())
        throw ValidationError("counts and expected_probs must have equal nonzero length");
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    if (total == 0) throw ValidationError("no observations");
    double stat = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const double expected = expected_probs[k] * static_cast<double>(total);
        if (expected <= 0) {
            if (counts[k] > 0)
                throw ValidationError("observation in a zero-probability bin");
            continue;
        }
        const double d = static_cast<double>(counts[k]) - expected;
        stat += d * d / expected;
    }
    return {stat, static_cast<int>(counts.size()) - 1};
}

// Upper 5% critical value of chi-square via the Wilson-Hilferty cube
// approximation; within ~0.1% for dof >= 3.
inline double chi_square_critical_95(int dof) {
    if (dof < 1) throw ValidationError("dof must be >= 1");
    if (dof == 1) return 3.841458820694124;
    if (dof == 2) return 5.991464547107979;
    const double z95 = 1.6448536269514722;
    const double d = static_cast<double>(dof);
    const double t = 1.0 - 2.0 / (9.0 * d) + z95 * std::sqrt(2.0 / (9.0 * d));
    return d * t * t * t;
}

struct NormalityResult {
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    bool pass = false;
};

// Moment-based normality check: pass when |skewness| < 4*sqrt(6/N) and
// |excess kurtosis| < 4*sqrt(24/N), four standard errors of the normal null.
inline NormalityResult normality_check(const std::vector<double>& series) {
    if (series.size() < 100) throw ValidationError("normality_check needs at least 100 values");
    const double n = static_cast<double>(series.size());
    double mean = 0.0;
    for (double x : series) mean += x;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : series) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 == 0.0) throw ValidationError("degenerate series: zero variance");

    NormalityResult result;
    result.skewness = m3 / std::pow(m2, 1.5);
    result.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    result.pass = std::abs(result.skewness) < 4.0 * std::sqrt(6.0 / n) &&
                  std::abs(result.excess_kurtosis) < 4.0 * std::sqrt(24.0 / n);
    return result;
}

// One line of the statistical battery report.
struct TestLine {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

// Battery for a real-valued sample series: independence at lag 1 plus the two
// moment-based distribution checks.
inline std::vector<TestLine> analyze_series(const std::vector<double>& series) {
    std::vector<TestLine> lines;
    const double n = static_cast<double>(series.size());
    const double r1 = autocorrelation(series, 1)[1];
    lines.push_back({"autocorr_lag1", std::abs(r1), 3.0 / std::sqrt(n), std::abs(r1) < 3.0 / std::sqrt(n)});
    const NormalityResult norm = normality_check(series);
    const double skew_bound = 4.0 * std::sqrt(6.0 / n);
    const double kurt_bound = 4.0 * std::sqrt(24.0 / n);
    lines.push_back({"skewness", std::abs(norm.skewness), skew_bound,
                     std::abs(norm.skewness) < skew_bound});
    lines.push_back({"excess_kurtosis", std::abs(norm.excess_kurtosis), kurt_bound,
                     std::abs(norm.excess_kurtosis) < kurt_bound});
    return lines;
}

// Battery for a digitized word stream: uniformity over the 2^b symbols and
// independence of consecutive words.
inline std::vector<TestLine> analyze_words(const std::vector<std::uint32_t>& words,
                                           std::uint32_t bin_count) {
    std::vector<TestLine> lines;
    const ChiSquareResult chi = chi_square_uniformity(words, bin_count);
    const double crit = chi_square_critical_95(chi.dof);
    lines.push_back({"chi_square_uniform", chi.statistic, crit, chi.statistic < crit});
    std::vector<double> as_real(words.begin(), words.end());
    const double n = static_cast<double>(words.size());
    const double r1 = autocorrelation(as_real, 1)[1];
    lines.push_back({"word_autocorr_lag1", std::abs(r1), 3.0 / std::sqrt(n),
                     std::abs(r1) < 3.0 / std::sqrt(n)});
    return lines;
}

inline std::string format_battery(const std::vector<TestLine>& lines) {
    std::ostringstream out;
    for (const TestLine& line : lines) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s: statistic=%.6g threshold=%.6g verdict=%s\n",
                      line.name.c_str(), line.statistic, line.threshold,
                      line.pass ? "PASS" : "FAIL");
        out << buf;
    }
    return out.str();
}

inline bool battery_passed(const std::vector<TestLine>& lines) {
    for (const TestLine& line : lines)
        if (!line.pass) return false;
    return true;
}

}  // namespace qrng
