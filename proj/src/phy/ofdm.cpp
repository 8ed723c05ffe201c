#include "covertwifi/phy/ofdm.hpp"

#include <algorithm>
#include <cmath>

#include "covertwifi/fft.hpp"
#include "covertwifi/phy/coding.hpp"

namespace cwifi::phy {

const std::array<int, 48>& data_subcarriers() {
    static const std::array<int, 48> table = [] {
        std::array<int, 48> t{};
        int i = 0;
        for (int k = -26; k <= 26; ++k) {
            if (k == 0 || k == -21 || k == -7 || k == 7 || k == 21) continue;
            t[i++] = k;
        }
        return t;
    }();
    return table;
}

std::vector<int> active_subcarriers(bool camouflage) {
    std::vector<int> out;
    const int edge = camouflage ? 28 : 26;
    for (int k = -edge; k <= edge; ++k)
        if (k != 0) out.push_back(k);
    return out;
}

double pilot_polarity(int n) {
    static const Bits seq = scrambler_sequence(127, 0x7F);
    return seq[static_cast<std::size_t>(n % 127)] ? -1.0 : 1.0;
}

const SymbolBins& stf_bins() {
    static const SymbolBins s = [] {
        SymbolBins b;
        const double a = std::sqrt(13.0 / 6.0);
        const Complex p(a, a), m(-a, -a);
        const std::array<std::pair<int, Complex>, 12> nz = {{{-24, p}, {-20, m}, {-16, p}, {-12, m},
                                                              {-8, m}, {-4, p}, {4, m}, {8, m},
                                                              {12, p}, {16, p}, {20, p}, {24, p}}};
        for (const auto& [k, v] : nz) b.at(k) = v;
        return b;
    }();
    return s;
}

const SymbolBins& ltf_bins() {
    static const SymbolBins s = [] {
        static constexpr std::array<int, 53> seq = {1,  1, -1, -1, 1,  1,  -1, 1,  -1, 1,  1,  1,  1, 1,
                                                    1,  -1, -1, 1, 1,  -1, 1,  -1, 1,  1,  1,  1,  0, 1,
                                                    -1, -1, 1, 1,  -1, 1,  -1, 1,  -1, -1, -1, -1, -1, 1,
                                                    1,  -1, -1, 1, -1, 1,  -1, 1,  1,  1,  1};
        SymbolBins b;
        for (int k = -26; k <= 26; ++k) b.at(k) = seq[k + 26];
        return b;
    }();
    return s;
}

const SymbolBins& ht_ltf_bins() {
    static const SymbolBins s = [] {
        SymbolBins b = ltf_bins();
        b.at(-28) = 1.0;
        b.at(-27) = 1.0;
        b.at(27) = -1.0;
        b.at(28) = -1.0;
        return b;
    }();
    return s;
}

std::vector<Complex> ltf_symbol(bool ht) {
    const auto& b = ht ? ht_ltf_bins() : ltf_bins();
    return ifft(std::span<const Complex>(b.bins));
}

std::vector<Complex> build_stf() {
    const auto period = ifft(std::span<const Complex>(stf_bins().bins));
    std::vector<Complex> out(kStfLength);
    for (int n = 0; n < kStfLength; ++n) out[n] = period[n % kFftSize];
    return out;
}

std::vector<Complex> build_ltf(bool ht) {
    const auto sym = ltf_symbol(ht);
    std::vector<Complex> out;
    out.reserve(kLtfLength);
    out.insert(out.end(), sym.end() - 32, sym.end());
    out.insert(out.end(), sym.begin(), sym.end());
    out.insert(out.end(), sym.begin(), sym.end());
    return out;
}

IqBuffer build_preamble(bool ht) {
    IqBuffer out;
    out.samples = build_stf();
    const auto ltf = build_ltf(ht);
    out.samples.insert(out.samples.end(), ltf.begin(), ltf.end());
    return out;
}

std::vector<Complex> modulate_symbol(const SymbolBins& sym) {
    const auto body = ifft(std::span<const Complex>(sym.bins));
    std::vector<Complex> out;
    out.reserve(kSymbolLength);
    out.insert(out.end(), body.end() - kCpLength, body.end());
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

IqBuffer modulate(const OfdmGrid& grid) {
    IqBuffer out;
    out.samples.reserve(grid.symbols.size() * kSymbolLength);
    for (const auto& sym : grid.symbols) {
        const auto s = modulate_symbol(sym);
        out.samples.insert(out.samples.end(), s.begin(), s.end());
    }
    return out;
}

SymbolBins demodulate_window(std::span<const Complex> samples, std::size_t offset) {
    if (offset + kFftSize > samples.size()) throw InvalidArgument("demodulate_window: out of range");
    SymbolBins out;
    fft(samples.subspan(offset, kFftSize), std::span<Complex>(out.bins));
    return out;
}

}  // namespace cwifi::phy
