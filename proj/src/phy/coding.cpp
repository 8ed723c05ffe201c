#include "covertwifi/phy/coding.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <limits>

namespace cwifi::phy {

uint32_t crc32(std::span<const uint8_t> data) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    return static_cast<uint32_t>(::crc32(crc, data.data(), static_cast<uInt>(data.size())));
}

std::array<uint8_t, 4> compute_fcs(std::span<const uint8_t> data) {
    const uint32_t c = crc32(data);
    return {static_cast<uint8_t>(c), static_cast<uint8_t>(c >> 8), static_cast<uint8_t>(c >> 16),
            static_cast<uint8_t>(c >> 24)};
}

bool check_fcs(std::span<const uint8_t> psdu) {
    if (psdu.size() < 4) return false;
    const auto fcs = compute_fcs(psdu.first(psdu.size() - 4));
    return std::equal(fcs.begin(), fcs.end(), psdu.end() - 4);
}

// ---------------------------------------------------------------------------
// Scrambler

Bits scrambler_sequence(std::size_t n, unsigned seed7) {
    seed7 &= 0x7F;
    if (seed7 == 0) throw InvalidArgument("scrambler seed must be nonzero");
    Bits seq(n);
    unsigned state = seed7;
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned fb = ((state >> 6) ^ (state >> 3)) & 1u;
        seq[i] = static_cast<uint8_t>(fb);
        state = ((state << 1) | fb) & 0x7F;
    }
    return seq;
}

Bits scramble(const Bits& bits, unsigned seed7) {
    Bits seq = scrambler_sequence(bits.size(), seed7);
    for (std::size_t i = 0; i < bits.size(); ++i) seq[i] ^= bits[i];
    return seq;
}

unsigned recover_scrambler_seed(std::span<const uint8_t> first7) {
    if (first7.size() < 7) throw InvalidArgument("need 7 bits to recover scrambler state");
    for (unsigned seed = 1; seed < 128; ++seed) {
        const Bits seq = scrambler_sequence(7, seed);
        if (std::equal(seq.begin(), seq.end(), first7.begin())) return seed;
    }
    // All-zero prefix cannot come from a nonzero register; fall back to all-ones.
    return 0x7F;
}

// ---------------------------------------------------------------------------
// Convolutional code

namespace {

constexpr unsigned kG0 = 0133;
constexpr unsigned kG1 = 0171;
constexpr int kStates = 64;

inline unsigned parity(unsigned v) { return std::popcount(v) & 1u; }

// Keep-masks over the mother-code output stream A0 B0 A1 B1 ...
std::span<const uint8_t> puncture_pattern(CodingRate rate) {
    static constexpr std::array<uint8_t, 2> r12 = {1, 1};
    static constexpr std::array<uint8_t, 4> r23 = {1, 1, 1, 0};
    static constexpr std::array<uint8_t, 6> r34 = {1, 1, 1, 0, 0, 1};
    if (rate == CodingRate{1, 2}) return r12;
    if (rate == CodingRate{2, 3}) return r23;
    if (rate == CodingRate{3, 4}) return r34;
    throw InvalidArgument("unsupported coding rate");
}

}  // namespace

std::size_t coded_length(std::size_t n, CodingRate rate) {
    const auto pattern = puncture_pattern(rate);
    std::size_t count = 0;
    for (std::size_t i = 0; i < 2 * n; ++i) count += pattern[i % pattern.size()];
    return count;
}

Bits fec_encode(const Bits& bits, CodingRate rate) {
    const auto pattern = puncture_pattern(rate);
    Bits out;
    out.reserve(coded_length(bits.size(), rate));
    unsigned state = 0;
    std::size_t pos = 0;
    for (uint8_t b : bits) {
        const unsigned reg = (static_cast<unsigned>(b & 1u) << 6) | state;
        const uint8_t a = static_cast<uint8_t>(parity(reg & kG0));
        const uint8_t c = static_cast<uint8_t>(parity(reg & kG1));
        if (pattern[pos++ % pattern.size()]) out.push_back(a);
        if (pattern[pos++ % pattern.size()]) out.push_back(c);
        state = reg >> 1;
    }
    return out;
}

Bits fec_decode(std::span<const double> soft, CodingRate rate) {
    const auto pattern = puncture_pattern(rate);
    std::size_t kept_per_period = 0;
    for (auto p : pattern) kept_per_period += p;
    if (soft.size() % kept_per_period != 0)
        throw InvalidArgument("fec_decode: length inconsistent with puncturing pattern");
    const std::size_t n = soft.size() / kept_per_period * pattern.size() / 2;

    // Depuncture into pairs; erased positions stay at zero.
    std::vector<double> mother(2 * n, 0.0);
    std::size_t src = 0;
    for (std::size_t i = 0; i < 2 * n; ++i)
        if (pattern[i % pattern.size()]) mother[i] = soft[src++];

    // Branch outputs for (state, input).
    std::array<std::array<uint8_t, 2>, kStates * 2> outputs{};
    for (unsigned s = 0; s < kStates; ++s)
        for (unsigned b = 0; b < 2; ++b) {
            const unsigned reg = (b << 6) | s;
            outputs[s * 2 + b] = {static_cast<uint8_t>(parity(reg & kG0)),
                                  static_cast<uint8_t>(parity(reg & kG1))};
        }

    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    std::array<double, kStates> metric;
    metric.fill(kNegInf);
    metric[0] = 0.0;
    std::vector<std::array<uint8_t, kStates>> survivors(n);

    for (std::size_t t = 0; t < n; ++t) {
        const double sa = mother[2 * t];
        const double sb = mother[2 * t + 1];
        std::array<double, kStates> next;
        for (unsigned ns = 0; ns < kStates; ++ns) {
            const unsigned b = ns >> 5;
            double best = kNegInf;
            uint8_t choice = 0;
            for (unsigned x = 0; x < 2; ++x) {
                const unsigned s = ((ns & 31u) << 1) | x;
                if (metric[s] == kNegInf) continue;
                const auto& o = outputs[s * 2 + b];
                const double m = metric[s] + (o[0] ? sa : -sa) + (o[1] ? sb : -sb);
                if (m > best) {
                    best = m;
                    choice = static_cast<uint8_t>(x);
                }
            }
            next[ns] = best;
            survivors[t][ns] = choice;
        }
        metric = next;
    }

    unsigned state = static_cast<unsigned>(std::max_element(metric.begin(), metric.end()) - metric.begin());
    Bits decoded(n);
    for (std::size_t t = n; t-- > 0;) {
        decoded[t] = static_cast<uint8_t>(state >> 5);
        state = ((state & 31u) << 1) | survivors[t][state];
    }
    return decoded;
}

Bits fec_decode_hard(const Bits& coded, CodingRate rate) {
    std::vector<double> soft(coded.size());
    for (std::size_t i = 0; i < coded.size(); ++i) soft[i] = coded[i] ? 1.0 : -1.0;
    return fec_decode(soft, rate);
}

// ---------------------------------------------------------------------------
// Interleaver

std::vector<int> interleaver_permutation(int n_cbps, int n_bpsc) {
    const int s = std::max(n_bpsc / 2, 1);
    std::vector<int> perm(n_cbps);
    for (int k = 0; k < n_cbps; ++k) {
        const int i = (n_cbps / 16) * (k % 16) + k / 16;
        const int j = s * (i / s) + (i + n_cbps - (16 * i / n_cbps)) % s;
        perm[k] = j;
    }
    return perm;
}

namespace {

template <typename T>
std::vector<T> permute_blocks(std::span<const T> in, int n_cbps, int n_bpsc, bool inverse) {
    if (n_cbps <= 0 || in.size() % static_cast<std::size_t>(n_cbps) != 0)
        throw InvalidArgument("interleaver: length is not a multiple of n_cbps");
    const auto perm = interleaver_permutation(n_cbps, n_bpsc);
    std::vector<T> out(in.size());
    for (std::size_t base = 0; base < in.size(); base += n_cbps)
        for (int k = 0; k < n_cbps; ++k) {
            if (inverse)
                out[base + k] = in[base + perm[k]];
            else
                out[base + perm[k]] = in[base + k];
        }
    return out;
}

}  // namespace

Bits interleave(const Bits& bits, int n_cbps, int n_bpsc) {
    return permute_blocks<uint8_t>(bits, n_cbps, n_bpsc, false);
}

Bits deinterleave(const Bits& bits, int n_cbps, int n_bpsc) {
    return permute_blocks<uint8_t>(bits, n_cbps, n_bpsc, true);
}

std::vector<double> deinterleave_soft(std::span<const double> values, int n_cbps, int n_bpsc) {
    return permute_blocks<double>(values, n_cbps, n_bpsc, true);
}

}  // namespace cwifi::phy
