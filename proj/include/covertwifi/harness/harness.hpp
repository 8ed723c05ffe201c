#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "covertwifi/channel/channel.hpp"
#include "covertwifi/covert/covert.hpp"
#include "covertwifi/detect/detect.hpp"
#include "covertwifi/phy/receiver.hpp"

namespace cwifi::harness {

// Counter-based seed: independent streams per (seed, trial, stream).
uint64_t derive_seed(uint64_t seed, uint64_t trial, uint64_t stream);

enum Stream : uint64_t { kPayloadStream = 0, kChannelStream = 1, kCovertStream = 2 };

struct SweepAxes {
    std::vector<double> snr_db;
    std::vector<int> psk_order;
    std::vector<double> delta_hz;
    std::vector<covert::CpFraction> fraction;
};

struct ExperimentConfig {
    int mcs_rate = 24;
    std::size_t frame_len_bytes = 1000;   // PSDU length including the FCS
    channel::ChannelConfig channel;
    std::optional<covert::CovertSpec> covert;
    std::size_t n_trials = 1000;
    uint64_t seed = 1;
    unsigned scrambler_seed = 0x7F;
    phy::RxConfig rx;
    bool genie_timing = false;   // hand the receiver the true frame start
    // Noise is referenced to the nominal transmit sample power (average SNR)
    // unless this is set, in which case each faded frame's own power is used.
    bool snr_per_frame = false;
    std::size_t pad_before = 200;
    std::size_t pad_after = 100;
    unsigned threads = 0;   // 0 = hardware concurrency
    SweepAxes axes;
};

// Throws InvalidArgument.
void validate(const ExperimentConfig& cfg);

// JSON config; missing keys keep their defaults.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& json_text, ExperimentConfig base = {});

struct TrialReport {
    bool detected = false;
    bool frame_ok = false;
    double raw_ber = 1.0;
    double coded_ber = 1.0;
    std::optional<double> covert_ber;
    double evm_db = 0.0;
    double coarse_cfo_hz = 0.0;
    double rx_power_db = 0.0;

    std::size_t raw_bits = 0, raw_errors = 0;
    std::size_t coded_bits = 0, coded_errors = 0;
    std::size_t covert_bits = 0, covert_errors = 0;
};

// What the transmitter sent for one trial.
struct TrialSignal {
    phy::Frame frame;
    phy::TxFrame tx;
    Bits covert_payload;
    IqBuffer clean;      // padded, before the channel
    IqBuffer received;   // after the channel
    std::size_t frame_start = 0;
};

// Channel settings for one trial: derived seed and noise reference filled in.
channel::ChannelConfig trial_channel(const ExperimentConfig& cfg, std::size_t trial);
TrialSignal make_trial_signal(const ExperimentConfig& cfg, std::size_t trial);
TrialReport run_trial(const ExperimentConfig& cfg, std::size_t trial);
// Report for an already generated signal (also returns receiver diagnostics when available).
TrialReport evaluate_trial(const ExperimentConfig& cfg, const TrialSignal& sig,
                           std::optional<phy::RxDiagnostics>* diag = nullptr);

// Runs fn(i) for i in [0, n) on `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

std::vector<TrialReport> run_trials(const ExperimentConfig& cfg);

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

// Wilson score interval at 95%.
Interval wilson_interval(std::size_t errors, std::size_t n, double z = 1.959963984540054);

struct SweepPoint {
    channel::Model model = channel::Model::A;
    double snr_db = 0.0;
    int mcs_rate = 0;
    std::string covert_kind = "none";
    std::string covert_param;
    std::size_t trials = 0;
    std::size_t frames_ok = 0;
    std::size_t raw_bits = 0, raw_errors = 0;
    std::size_t coded_bits = 0, coded_errors = 0;
    std::size_t covert_bits = 0, covert_errors = 0;
    double raw_ber = 0.0;
    double coded_ber = 0.0;
    double covert_ber = 0.0;
    double median_covert_ber = 0.0;
    double fer = 0.0;
    double mean_evm_db = 0.0;
    // 95% interval of the headline BER: covert when a covert channel is set, raw otherwise.
    Interval ci;
};

SweepPoint aggregate(const ExperimentConfig& cfg, const std::vector<TrialReport>& reports);
SweepPoint run_point(const ExperimentConfig& cfg);

// Cartesian product of the axes; empty axes keep the config value.
std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& cfg);
std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg);

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const SweepPoint& p);
std::string to_csv(const std::vector<SweepPoint>& points);

// --- rates -----------------------------------------------------------------

struct FrameProfile {
    int mcs_rate = 54;
    double duration_s = 0.0;   // on-air time of one frame
    std::size_t n_data_symbols = 0;
};

// Profile of a frame as this modem builds it.
FrameProfile make_profile(int mcs_rate, std::size_t psdu_bytes);

// Gross covert throughput in bit/s, ignoring inter-frame gaps. Per-frame
// schemes divide by the frame duration; per-symbol schemes count covert
// symbols per 4 us OFDM symbol at the carrier's coding rate.
double covert_rate(const covert::CovertSpec& spec, const FrameProfile& f);

struct RateRow {
    std::string label;
    covert::CovertSpec spec;
    FrameProfile frame;
    double bits_per_s = 0.0;
};
// The four reference configurations.
std::vector<RateRow> reference_rates();
std::string format_rate(double bits_per_s);

// --- files -----------------------------------------------------------------

// Interleaved little-endian float32 I/Q plus a `.meta` sidecar.
void write_iq(const std::filesystem::path& path, const IqBuffer& iq, const std::string& description);
IqBuffer read_iq(const std::filesystem::path& path);

// One byte per 8 bits, most significant bit first.
Bits read_payload_bits(const std::filesystem::path& path);
void write_payload_bits(const std::filesystem::path& path, const Bits& bits);

// key=value lines for one Layer-1 report.
std::string format_report(const detect::Layer1Report& r);

}  // namespace cwifi::harness
