#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "qrng/interferometer.hpp"
#include "qrng/params.hpp"

namespace qrng {

// Probabilities of landing in each of the 2^b ADC bins. Sums to 1: the two
// edge bins absorb the Gaussian tails, matching quantizer saturation.
struct BinDistribution {
    std::vector<double> probabilities;
};

// Standard normal CDF via the complementary error function; good to machine
// precision, which matters because min-entropy is a log of a near-1 quantity.
inline double standard_normal_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

// Bin index for one voltage. Bins are half-open [left, right) with left edges
// at v_min + offset + k*a; out-of-range voltages saturate to bin 0 or 2^b - 1.
inline std::uint32_t quantize_value(double v, const AdcParams& adc) {
    const double a = adc.bin_width();
    const double idx = std::floor((v - adc.v_min - adc.offset) / a);
    if (idx < 0) return 0;
    const double last = static_cast<double>(adc.bin_count() - 1);
    if (idx > last) return static_cast<std::uint32_t>(last);
    return static_cast<std::uint32_t>(idx);
}

inline std::vector<std::uint32_t> quantize(const VoltageSeries& series, const AdcParams& adc) {
    check(adc);
    std::vector<std::uint32_t> bins(series.values.size());
    for (std::size_t i = 0; i < series.values.size(); ++i)
        bins[i] = quantize_value(series.values[i], adc);
    return bins;
}

// Exact bin distribution of a zero-mean Gaussian voltage with std dev sigma_q.
// Interior bins get Phi differences across their edges; the edge bins take the
// tails. sigma_q == 0 degenerates to a point mass on the bin containing 0.
inline BinDistribution gaussian_bin_probabilities(double sigma_q, const AdcParams& adc) {
    check(adc);
    if (!(sigma_q >= 0)) throw ValidationError("sigma_q must be >= 0");
    const int n = adc.bin_count();
    BinDistribution dist;
    dist.probabilities.assign(n, 0.0);
    if (sigma_q == 0) {
        dist.probabilities[quantize_value(0.0, adc)] = 1.0;
        return dist;
    }
    const double a = adc.bin_width();
    const double left_origin = adc.v_min + adc.offset;
    double cdf_left = 0.0;  // bin 0 extends to -inf
    for (int k = 0; k < n; ++k) {
        const double cdf_right =
            (k == n - 1) ? 1.0
                         : standard_normal_cdf((left_origin + (k + 1) * a) / sigma_q);
        dist.probabilities[k] = cdf_right - cdf_left;
        cdf_left = cdf_right;
    }
    return dist;
}

// The partition shift that centers one bin on the Gaussian mean (edges at
// +/- a/2 around 0). Centering maximizes the maximum bin probability and so
// minimizes min-entropy; this is the worst case against partition drift.
// Returned as the canonical representative in [0, a); probabilities are
// periodic in the offset with period a for interior bins.
inline double worst_case_offset(double sigma_q, const AdcParams& adc) {
    check(adc);
    if (!(sigma_q > 0)) throw ValidationError("sigma_q must be > 0");
    const double a = adc.bin_width();
    double offset = std::fmod(-(adc.v_min + a / 2.0), a);
    if (offset < 0) offset += a;
    return offset;
}

// Bitstream packing: each bin index is written as a b-bit big-endian word,
// MSB-first, packed into bytes. A partial trailing byte is zero-padded;
// valid_bits records how many leading bits carry data.
struct Bitstream {
    std::vector<std::uint8_t> bytes;
    std::size_t valid_bits = 0;
};

inline Bitstream pack_bins(const std::vector<std::uint32_t>& bins, int bits) {
    if (bits < 1 || bits > 24) throw ValidationError("bits must be in [1, 24]");
    Bitstream out;
    out.valid_bits = bins.size() * static_cast<std::size_t>(bits);
    out.bytes.reserve((out.valid_bits + 7) / 8);
    std::uint32_t buffer = 0;
    int buffered = 0;
    for (std::uint32_t word : bins) {
        buffer = (buffer << bits) | (word & ((1u << bits) - 1u));
        buffered += bits;
        while (buffered >= 8) {
            buffered -= 8;
            out.bytes.push_back(static_cast<std::uint8_t>((buffer >> buffered) & 0xFFu));
        }
    }
    if (buffered > 0)
        out.bytes.push_back(static_cast<std::uint8_t>((buffer << (8 - buffered)) & 0xFFu));
    return out;
}

// Recover the complete b-bit words of a byte stream (MSB-first). Trailing bits
// that do not fill a word are dropped.
inline std::vector<std::uint32_t> unpack_bins(const std::vector<std::uint8_t>& bytes, int bits,
                                              std::size_t valid_bits) {
    if (bits < 1 || bits > 24) throw ValidationError("bits must be in [1, 24]");
    const std::size_t total_bits = std::min(valid_bits, bytes.size() * 8);
    const std::size_t count = total_bits / static_cast<std::size_t>(bits);
    std::vector<std::uint32_t> words(count);
    std::size_t bit_pos = 0;
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t w = 0;
        for (int b = 0; b < bits; ++b, ++bit_pos) {
            const std::uint8_t byte = bytes[bit_pos / 8];
            const int shift = 7 - static_cast<int>(bit_pos % 8);
            w = (w << 1) | ((byte >> shift) & 1u);
        }
        words[i] = w;
    }
    return words;
}

// Expand a bitstream into individual 0/1 bits.
inline std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& bytes,
                                             std::size_t valid_bits) {
    const std::size_t total = std::min(valid_bits, bytes.size() * 8);
    std::vector<std::uint8_t> bits(total);
    for (std::size_t i = 0; i < total; ++i)
        bits[i] = (bytes[i / 8] >> (7 - static_cast<int>(i % 8))) & 1u;
    return bits;
}

}  // namespace qrng
