#pragma once

#include <optional>
#include <string>
#include <variant>

#include "covertwifi/common.hpp"
#include "covertwifi/phy/mcs.hpp"
#include "covertwifi/phy/receiver.hpp"
#include "covertwifi/phy/transmitter.hpp"

namespace cwifi::covert {

// Phase shift of the whole STF, one M-ary symbol per frame.
struct StfPsk {
    int order = 64;
};

// Frequency shift of +-delta per data symbol.
struct CfoFsk {
    double delta_hz = 10e3;
    bool positive_is_one = true;
    bool whiten = true;
    int fir_taps = 20;
    int discard = 6;   // decisions dropped at each end of the trace
};

// Extra symbols on subcarriers +-27, +-28 behind an HT-LTF.
struct Camo {
    phy::Modulation modulation = phy::Modulation::Qam64;
};

enum class CpFraction { Full, Half };

// Small-FFT mini-symbols written into the cyclic prefix.
struct CpReplace {
    CpFraction fraction = CpFraction::Half;
    int covert_fft = 8;
    int cpcp_len = 2;
    phy::Modulation modulation = phy::Modulation::Qam64;
};

using CovertSpec = std::variant<StfPsk, CfoFsk, Camo, CpReplace>;

std::string kind_name(const CovertSpec& spec);   // stf-psk, cfo-fsk, camo, cp
std::string param_string(const CovertSpec& spec);
CpFraction parse_fraction(const std::string& s);
std::string to_string(CpFraction f);

// Throws InvalidArgument for out-of-range parameters.
void validate(const CovertSpec& spec);

// Bits embedded in a frame with n data symbols.
std::size_t capacity_bits(const CovertSpec& spec, std::size_t n_data_symbols);
// Bits returned by extract(); smaller than capacity only for CFO FSK.
std::size_t extracted_bits(const CovertSpec& spec, std::size_t n_data_symbols);
// The slice of the embedded payload that extract() is expected to return.
Bits expected_bits(const CovertSpec& spec, const Bits& payload);

// Builds the frame with `payload` hidden in it. Throws on a capacity mismatch.
phy::TxFrame transmit_covert(const phy::Frame& frame, const phy::TxConfig& cfg, const CovertSpec& spec,
                             const Bits& payload);
phy::TxHooks make_hooks(const CovertSpec& spec, const Bits& payload);

struct CovertResult {
    Bits bits;
    std::vector<double> confidence;   // per bit, larger is more certain
    std::optional<double> covert_ber;
};

CovertResult extract(const CovertSpec& spec, const phy::RxDiagnostics& diag, const Bits* truth = nullptr);

// Gray code over M-ary indices.
unsigned gray_encode(unsigned i);
unsigned gray_decode(unsigned g);

// --- STF PSK ---------------------------------------------------------------

double stf_psk_phase(const Bits& bits, int order);
// Rotates the first 160 samples (the STF) of `preamble`.
void stf_psk_embed(std::vector<Complex>& preamble, const Bits& bits, int order);
// Phase of the received STF relative to the reference, equalized with the LTF
// estimate. `sig_phase` (SIG common phase against the same estimate) measures
// the residual CFO, which is extrapolated back to the STF.
double stf_phase_estimate(std::span<const Complex> aligned, const phy::SymbolBins& channel, double sig_phase = 0.0);
Bits stf_psk_extract(std::span<const Complex> aligned, const phy::SymbolBins& channel, double sig_phase, int order,
                     std::vector<double>* confidence = nullptr);

// --- CFO FSK ---------------------------------------------------------------

inline constexpr std::size_t kMinFskSymbols = 60;

// XOR with a fixed public LFSR sequence; applying it twice is the identity.
Bits fsk_whiten(const Bits& bits, std::size_t offset = 0);
// One bit per data symbol; phase stays continuous across symbols.
void cfo_fsk_embed(std::vector<Complex>& frame, const Bits& bits, double delta_hz, bool positive_is_one = true);
// Centered moving average with truncated edges.
std::vector<double> moving_average(const std::vector<double>& x, int taps);
// Hard decisions on the inner n - 2*discard symbols, before de-whitening.
Bits cfo_fsk_extract(const std::vector<double>& per_symbol_cfo_hz, const CfoFsk& spec,
                     std::vector<double>* confidence = nullptr);

// --- Camouflage subcarriers ------------------------------------------------

void camo_embed(phy::OfdmGrid& grid, const Bits& bits, phy::Modulation m);
Bits camo_extract(const phy::RxDiagnostics& diag, phy::Modulation m, std::vector<double>* confidence = nullptr);

// --- Cyclic prefix replacement ---------------------------------------------

int replaced_samples(CpFraction f);
int minis_per_cp(const CpReplace& spec);
// Covert bins of one mini-symbol (signed, ascending).
std::vector<int> cp_usable_bins(int covert_fft);
void cp_replace_embed(std::vector<Complex>& frame, std::size_t n_data_symbols, const Bits& bits,
                      const CpReplace& spec);
Bits cp_replace_extract(const phy::RxDiagnostics& diag, const CpReplace& spec,
                        std::vector<double>* confidence = nullptr);

}  // namespace cwifi::covert
