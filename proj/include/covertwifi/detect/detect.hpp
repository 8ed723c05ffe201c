#pragma once

#include <optional>

#include "covertwifi/common.hpp"
#include "covertwifi/phy/receiver.hpp"

namespace cwifi::detect {

struct Thresholds {
    // STF phase: flag when |dphi| > stf_k * stf_sigma_rad. Sigma comes from a
    // clean 25 dB corpus (see calibrate_sigma); this default is that value rounded up.
    double stf_sigma_rad = 0.014;
    double stf_k = 3.0;
    double cfo_score = 3.0;
    double cp_similarity = 0.5;        // symbols below this look replaced
    double subcarrier_margin_db = -10.0;
    double l2_z = 3.0;
};

// --- Layer 1 ---------------------------------------------------------------

// STF phase offset relative to the standard STF, wrapped to (-pi, pi].
double l1_stf_phase(std::span<const Complex> aligned, const phy::SymbolBins& channel, double sig_phase = 0.0);

// Variance of (trace - moving average) over the estimator noise variance.
// About 1 without a covert channel. Throws InvalidArgument below 60 samples.
double l1_cfo_pattern(const std::vector<double>& per_symbol_cfo_hz, double noise_var_hz2, int taps = 20);

struct SubcarrierCheck {
    double extra_power_db = 0.0;   // mean power on +-27, +-28 relative to the data subcarriers
    bool ht_frame = false;         // SIG announces a 56-subcarrier frame
    bool covert = false;
};

// rx_grid holds unequalized FFT outputs of the data symbols.
SubcarrierCheck l1_subcarrier_conformance(const std::vector<phy::SymbolBins>& rx_grid, const phy::SigField& sig,
                                          double threshold_db = -10.0);

// Real part of the normalized correlation between each CP and the last 16
// samples of its symbol, after coarse CFO correction.
std::vector<double> l1_cp_similarity(const IqBuffer& iq, std::size_t frame_start, std::size_t n_symbols);

struct Psd {
    std::vector<double> freq_hz;   // ascending, -fs/2 .. fs/2
    std::vector<double> power;     // linear, per bin
};

// Welch estimate with a Hann window and 50% overlap.
Psd welch_psd(std::span<const Complex> x, int nfft = 256);

// 20 MHz transmit mask in dBr: 0 up to 9 MHz, -20 at 11, -28 at 20, -40 at 30.
double spectral_mask_dbr(double abs_freq_hz);

// min(mask - PSD) in dB over |f| >= 9 MHz, PSD referenced to its in-band peak.
double l1_spectral_mask(std::span<const Complex> x, int nfft = 256);

// Area under the ROC for scores where `positives` should score higher.
double roc_auc(const std::vector<double>& positives, const std::vector<double>& negatives);

// RMS of clean-corpus observations.
double calibrate_sigma(const std::vector<double>& clean);

struct Layer1Report {
    std::size_t frame_start = 0;
    double stf_delta_phi_rad = 0.0;
    std::optional<double> cfo_pattern_score;   // needs >= 60 data symbols
    SubcarrierCheck subcarriers;
    std::vector<double> cp_similarity;
    double oob_power_margin_db = 0.0;
    double evm_db = 0.0;

    bool stf_flag = false;
    bool cfo_flag = false;
    bool cp_flag = false;   // mean CP similarity below threshold
};

// Runs every Layer-1 check on one capture. Throws NoFrameFound or SigError.
Layer1Report analyze(const IqBuffer& iq, const Thresholds& th = {}, const phy::RxConfig& rx = {});

// --- Layer 2 ---------------------------------------------------------------

// What a monitor-mode NIC exposes per frame.
struct Layer2Record {
    bool frame_ok = false;
    std::optional<double> raw_ber;
    double rssi_proxy_db = 0.0;
    std::size_t index = 0;
};

// Max |z| of two-proportion tests on frame-error rate between adjacent
// windows of `window` records. An incomplete trailing window is ignored.
double l2_monitor(const std::vector<Layer2Record>& records, std::size_t window);

double two_proportion_z(std::size_t errors_a, std::size_t n_a, std::size_t errors_b, std::size_t n_b);

}  // namespace cwifi::detect
