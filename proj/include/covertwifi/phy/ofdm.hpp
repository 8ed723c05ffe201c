#pragma once

#include <array>
#include <span>

#include "covertwifi/common.hpp"

namespace cwifi::phy {

// Frequency-domain content of one OFDM symbol, stored in FFT bin order.
// Use at(k) with a signed subcarrier index in [-32, 31].
struct SymbolBins {
    std::array<Complex, kFftSize> bins{};

    static constexpr int bin(int k) { return (k + kFftSize) % kFftSize; }
    Complex& at(int k) { return bins[bin(k)]; }
    const Complex& at(int k) const { return bins[bin(k)]; }
};

// Rows are OFDM symbols.
struct OfdmGrid {
    std::vector<SymbolBins> symbols;
    bool camouflage = false;   // active set includes +-27, +-28
};

inline constexpr std::array<int, 4> kPilotSubcarriers = {-21, -7, 7, 21};
inline constexpr std::array<double, 4> kPilotValues = {1.0, 1.0, 1.0, -1.0};
inline constexpr std::array<int, 4> kCamouflageSubcarriers = {-28, -27, 27, 28};

// The 48 data subcarriers in mapping order (-26 .. 26, pilots and DC skipped).
const std::array<int, 48>& data_subcarriers();
// Legacy 52 (or 56 with camouflage) active subcarriers, ascending.
std::vector<int> active_subcarriers(bool camouflage);

// Pilot polarity p_n (+1/-1), 127-periodic. The SIG symbol uses n = 0.
double pilot_polarity(int n);

const SymbolBins& stf_bins();
const SymbolBins& ltf_bins();
// HT-LTF: the legacy LTF extended to +-27, +-28.
const SymbolBins& ht_ltf_bins();

// One 64-sample long training symbol in the time domain.
std::vector<Complex> ltf_symbol(bool ht);

std::vector<Complex> build_stf();
std::vector<Complex> build_ltf(bool ht = false);
// STF (160) followed by LTF (160).
IqBuffer build_preamble(bool ht = false);

// 64-point IFFT plus 16-sample cyclic prefix per symbol.
std::vector<Complex> modulate_symbol(const SymbolBins& sym);
IqBuffer modulate(const OfdmGrid& grid);

// FFT of 64 samples starting at `offset`.
SymbolBins demodulate_window(std::span<const Complex> samples, std::size_t offset);

// Nominal mean sample power of a symbol with `active` unit-power subcarriers.
inline constexpr double nominal_symbol_power(int active = 52) {
    return static_cast<double>(active) / (kFftSize * kFftSize);
}

}  // namespace cwifi::phy
