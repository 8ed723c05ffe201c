#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "covertwifi/common.hpp"

namespace cwifi::channel {

// A is no fading; B, D, E are single-cluster exponential power-delay profiles
// with rms delay spreads of 15, 50 and 100 ns.
enum class Model { A, B, D, E };

Model parse_model(const std::string& s);
std::string to_string(Model m);

inline constexpr double kInfiniteSnr = std::numeric_limits<double>::infinity();
inline constexpr double kTapSpacingS = 50e-9;   // one sample at 20 MHz
inline constexpr int kSinusoidsPerTap = 16;

struct ChannelConfig {
    Model model = Model::A;
    double snr_db = kInfiniteSnr;
    double static_cfo_hz = 0.0;
    double max_doppler_hz = 0.0;
    uint64_t seed = 0;
    // Sample power the SNR refers to. Unset means the measured power of the
    // faded frame, which makes the SNR instantaneous rather than average.
    std::optional<double> reference_power;
};

struct ChannelRealization {
    std::vector<int> tap_delays;                  // samples
    std::vector<std::vector<Complex>> tap_gains;  // [tap][sample]
};

double rms_delay_spread_s(Model m);

// Mean tap powers on the 50 ns grid, truncated 30 dB below the first tap,
// summing to 1. Model A is a single unit tap.
std::vector<double> power_delay_profile(Model m);

// Rayleigh taps whose time evolution follows a Jakes spectrum built from
// kSinusoidsPerTap sinusoids. max_doppler_hz = 0 gives a block-fading channel.
ChannelRealization draw_realization(Model m, double max_doppler_hz, std::size_t n_samples, uint64_t seed);

// Tapped delay line; the output has the input length.
IqBuffer apply_realization(const IqBuffer& iq, const ChannelRealization& ch);
IqBuffer apply_fading(const IqBuffer& iq, Model m, double max_doppler_hz, uint64_t seed);

// Complex white Gaussian noise at power P/10^(snr/10), where P is the mean
// power of samples [begin, end). An infinite snr returns the input unchanged.
IqBuffer apply_awgn(const IqBuffer& iq, double snr_db, uint64_t seed, std::size_t begin = 0,
                    std::size_t end = static_cast<std::size_t>(-1));
// Same, with P given directly.
IqBuffer apply_awgn_at(const IqBuffer& iq, double snr_db, double reference_power, uint64_t seed);

// Multiplies sample n by e^{j 2 pi cfo n / fs}.
IqBuffer apply_static_cfo(const IqBuffer& iq, double cfo_hz);

// Fading, then static CFO, then AWGN referenced to cfg.reference_power or,
// when unset, to the faded power over [begin, end).
IqBuffer apply_channel(const IqBuffer& iq, const ChannelConfig& cfg, std::size_t begin = 0,
                       std::size_t end = static_cast<std::size_t>(-1));

}  // namespace cwifi::channel
