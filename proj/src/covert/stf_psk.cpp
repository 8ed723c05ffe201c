#include <bit>
#include <cmath>
#include <numbers>

#include "covertwifi/covert/covert.hpp"
#include "covertwifi/phy/ofdm.hpp"

namespace cwifi::covert {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int order_bits(int order) {
    if (order < 2 || order > 256 || (order & (order - 1)) != 0)
        throw InvalidArgument("PSK order must be a power of two in [2, 256]");
    return std::countr_zero(static_cast<unsigned>(order));
}

}  // namespace

unsigned gray_encode(unsigned i) { return i ^ (i >> 1); }

unsigned gray_decode(unsigned g) {
    unsigned i = 0;
    for (; g; g >>= 1) i ^= g;
    return i;
}

double stf_psk_phase(const Bits& bits, int order) {
    const int nb = order_bits(order);
    if (bits.size() != static_cast<std::size_t>(nb))
        throw InvalidArgument("STF PSK expects " + std::to_string(nb) + " bits per frame");
    unsigned g = 0;
    for (uint8_t b : bits) g = (g << 1) | (b & 1u);
    return kTwoPi * gray_decode(g) / order;
}

void stf_psk_embed(std::vector<Complex>& preamble, const Bits& bits, int order) {
    if (preamble.size() < static_cast<std::size_t>(kStfLength)) throw InvalidArgument("preamble too short");
    const Complex rot = std::polar(1.0, stf_psk_phase(bits, order));
    for (int n = 0; n < kStfLength; ++n) preamble[n] *= rot;
}

double stf_phase_estimate(std::span<const Complex> aligned, const phy::SymbolBins& channel, double sig_phase) {
    // Two full 64-sample periods of the STF, clear of the detection edge.
    Complex acc{0.0, 0.0};
    for (std::size_t offset : {std::size_t{32}, std::size_t{96}}) {
        const auto y = phy::demodulate_window(aligned, offset);
        for (int k = -26; k <= 26; ++k) {
            const Complex s = phy::stf_bins().at(k);
            if (s == Complex{}) continue;
            acc += y.at(k) * std::conj(channel.at(k) * s);
        }
    }
    // Window centres: STF 95.5, LTF 255.5, SIG 367.5.
    constexpr double kStfToLtf = 160.0;
    constexpr double kLtfToSig = 112.0;
    return std::arg(acc) + sig_phase * kStfToLtf / kLtfToSig;
}

Bits stf_psk_extract(std::span<const Complex> aligned, const phy::SymbolBins& channel, double sig_phase, int order,
                     std::vector<double>* confidence) {
    const int nb = order_bits(order);
    const double step = kTwoPi / order;
    double phi = std::remainder(stf_phase_estimate(aligned, channel, sig_phase), kTwoPi);
    if (phi < 0) phi += kTwoPi;
    const double pos = phi / step;
    const auto idx = static_cast<unsigned>(std::lround(pos)) % static_cast<unsigned>(order);
    const unsigned g = gray_encode(idx);
    Bits out(nb);
    for (int i = 0; i < nb; ++i) out[i] = (g >> (nb - 1 - i)) & 1u;
    if (confidence) confidence->assign(nb, 1.0 - 2.0 * std::abs(pos - std::round(pos)));
    return out;
}

}  // namespace cwifi::covert
