#pragma once

#include <optional>

#include "covertwifi/common.hpp"
#include "covertwifi/phy/ofdm.hpp"
#include "covertwifi/phy/transmitter.hpp"

namespace cwifi::phy {

struct RxConfig {
    // Normalized lag-16 autocorrelation must exceed this for `plateau_length` samples.
    double detection_threshold = 0.75;
    int plateau_length = 48;
    // Earliest LTF correlation sample above this fraction of the peak marks the first path.
    double first_path_fraction = 0.6;
    // Ideal-CSI reference receiver: unit channel, no phase tracking, timing given.
    bool ideal_channel = false;
    bool track_phase = true;
    std::optional<std::size_t> known_frame_start;
};

struct CfoEstimate {
    double stf_hz = 0.0;   // lag-16 STF autocorrelation
    double ltf_hz = 0.0;   // lag-64 LTF residual after STF correction
    double total_hz() const { return stf_hz + ltf_hz; }
};

struct RxDiagnostics {
    std::size_t frame_start = 0;
    double coarse_cfo_hz = 0.0;
    // Frequency of each data symbol from its cyclic prefix against the symbol
    // tail, so it does not mix neighbouring symbols.
    std::vector<double> per_symbol_cfo_hz;
    // Variance of a single per_symbol_cfo_hz sample due to noise.
    double cfo_noise_var_hz2 = 0.0;
    // Common phase advance between consecutive symbols (pilots plus decisions), in Hz.
    std::vector<double> pilot_cfo_hz;
    SymbolBins channel_estimate;   // 56 subcarriers: legacy plus +-27, +-28 from the HT-LTF reference
    double evm_db = 0.0;
    double noise_per_bin = 0.0;   // mean |Y - H X|^2 on data subcarriers
    double rx_power_db = 0.0;
    bool fcs_ok = false;
    SigField sig;
    Bits raw_bits;       // hard coded bits, deinterleaved, before Viterbi
    Bits decoded_bits;   // descrambled data field: SERVICE + PSDU + tail + pad

    // Per data symbol: CFO-corrected FFT output (not equalized), and the
    // common phase (pilots refined with data decisions) relative to the channel estimate.
    std::vector<SymbolBins> rx_grid;
    std::vector<double> symbol_phase;
    double sig_phase = 0.0;
    // CFO-corrected samples from frame_start to the end of the buffer.
    std::vector<Complex> aligned;
};

struct RxResult {
    Frame frame;
    RxDiagnostics diag;
};

// Index of the first STF sample. Throws NoFrameFound.
std::size_t detect_frame(const IqBuffer& iq, const RxConfig& cfg = {});

CfoEstimate estimate_cfo(const IqBuffer& iq, std::size_t frame_start);

// Rotates samples from `start` onward by e^{-j2pi f (n - start)/fs}.
std::vector<Complex> correct_cfo(const IqBuffer& iq, std::size_t start, double cfo_hz);

// Average of the two long training symbols divided by the reference.
SymbolBins estimate_channel(std::span<const Complex> aligned, bool ht_reference = true);

// Full receive chain. Throws NoFrameFound or SigError.
RxResult receive(const IqBuffer& iq, const RxConfig& cfg = {});

}  // namespace cwifi::phy
