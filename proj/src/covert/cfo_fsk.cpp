#include <cmath>
#include <numbers>

#include "covertwifi/covert/covert.hpp"
#include "covertwifi/phy/coding.hpp"

namespace cwifi::covert {
namespace {

constexpr unsigned kWhiteningSeed = 0x5B;

}  // namespace

Bits fsk_whiten(const Bits& bits, std::size_t offset) {
    const Bits seq = phy::scrambler_sequence(offset + bits.size(), kWhiteningSeed);
    Bits out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) out[i] = bits[i] ^ seq[offset + i];
    return out;
}

void cfo_fsk_embed(std::vector<Complex>& frame, const Bits& bits, double delta_hz, bool positive_is_one) {
    const std::size_t end = kDataOffset + bits.size() * kSymbolLength;
    if (frame.size() < end) throw InvalidArgument("CFO FSK: one bit per data symbol required");
    const double w = 2.0 * std::numbers::pi * delta_hz / kSampleRateHz;
    double phase = 0.0;
    for (std::size_t n = 0; n < bits.size(); ++n) {
        const double step = ((bits[n] != 0) == positive_is_one) ? w : -w;
        for (int i = 0; i < kSymbolLength; ++i) {
            frame[kDataOffset + n * kSymbolLength + i] *= std::polar(1.0, phase);
            phase += step;
        }
    }
}

std::vector<double> moving_average(const std::vector<double>& x, int taps) {
    if (taps < 1) throw InvalidArgument("moving average needs at least one tap");
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    const std::ptrdiff_t before = taps / 2;
    const std::ptrdiff_t after = taps - before;   // exclusive
    std::vector<double> out(x.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - before);
        const std::ptrdiff_t hi = std::min(n, i + after);
        double s = 0.0;
        for (std::ptrdiff_t j = lo; j < hi; ++j) s += x[j];
        out[i] = s / static_cast<double>(hi - lo);
    }
    return out;
}

Bits cfo_fsk_extract(const std::vector<double>& trace, const CfoFsk& spec, std::vector<double>* confidence) {
    if (trace.size() < kMinFskSymbols)
        throw InvalidArgument("CFO FSK needs at least 60 symbols, got " + std::to_string(trace.size()));
    const auto threshold = moving_average(trace, spec.fir_taps);
    const auto d = static_cast<std::size_t>(spec.discard);
    Bits out;
    if (confidence) confidence->clear();
    for (std::size_t n = d; n + d < trace.size(); ++n) {
        const bool above = trace[n] > threshold[n];
        out.push_back(above == spec.positive_is_one ? 1 : 0);
        if (confidence) confidence->push_back(std::abs(trace[n] - threshold[n]));
    }
    return out;
}

}  // namespace cwifi::covert
