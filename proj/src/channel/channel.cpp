#include "covertwifi/channel/channel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace cwifi::channel {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTruncationDb = 30.0;

// Distinct stream per purpose so fading and noise never share draws.
uint64_t mix_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

Model parse_model(const std::string& s) {
    if (s == "A" || s == "a") return Model::A;
    if (s == "B" || s == "b") return Model::B;
    if (s == "D" || s == "d") return Model::D;
    if (s == "E" || s == "e") return Model::E;
    throw InvalidArgument("unknown channel model '" + s + "' (expected A, B, D or E)");
}

std::string to_string(Model m) {
    switch (m) {
        case Model::A: return "A";
        case Model::B: return "B";
        case Model::D: return "D";
        case Model::E: return "E";
    }
    return "?";
}

double rms_delay_spread_s(Model m) {
    switch (m) {
        case Model::A: return 0.0;
        case Model::B: return 15e-9;
        case Model::D: return 50e-9;
        case Model::E: return 100e-9;
    }
    return 0.0;
}

std::vector<double> power_delay_profile(Model m) {
    const double tau = rms_delay_spread_s(m);
    if (tau == 0.0) return {1.0};
    std::vector<double> p;
    const double floor = std::pow(10.0, -kTruncationDb / 10.0);
    for (int d = 0;; ++d) {
        const double v = std::exp(-d * kTapSpacingS / tau);
        if (v < floor) break;
        p.push_back(v);
    }
    double sum = 0.0;
    for (double v : p) sum += v;
    for (double& v : p) v /= sum;
    return p;
}

ChannelRealization draw_realization(Model m, double max_doppler_hz, std::size_t n_samples, uint64_t seed) {
    if (max_doppler_hz < 0.0) throw InvalidArgument("max_doppler_hz must be >= 0");
    const auto pdp = power_delay_profile(m);
    ChannelRealization ch;
    if (m == Model::A) {
        ch.tap_delays = {0};
        ch.tap_gains = {std::vector<Complex>(n_samples, Complex{1.0, 0.0})};
        return ch;
    }
    std::mt19937_64 rng(mix_seed(seed, 1));
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    for (std::size_t d = 0; d < pdp.size(); ++d) {
        const double amp = std::sqrt(pdp[d] / kSinusoidsPerTap);
        const double theta = uni(rng);
        std::array<Complex, kSinusoidsPerTap> phasor{};
        std::array<Complex, kSinusoidsPerTap> step{};
        for (int i = 0; i < kSinusoidsPerTap; ++i) {
            const double alpha = (kTwoPi * i + theta) / kSinusoidsPerTap;
            phasor[i] = std::polar(amp, uni(rng));
            step[i] = std::polar(1.0, kTwoPi * max_doppler_hz * std::cos(alpha) / kSampleRateHz);
        }
        std::vector<Complex> g(n_samples);
        for (std::size_t n = 0; n < n_samples; ++n) {
            Complex s{0.0, 0.0};
            for (int i = 0; i < kSinusoidsPerTap; ++i) {
                s += phasor[i];
                phasor[i] *= step[i];
            }
            g[n] = s;
        }
        ch.tap_delays.push_back(static_cast<int>(d));
        ch.tap_gains.push_back(std::move(g));
    }
    return ch;
}

IqBuffer apply_realization(const IqBuffer& iq, const ChannelRealization& ch) {
    IqBuffer out;
    out.samples.assign(iq.size(), Complex{0.0, 0.0});
    for (std::size_t t = 0; t < ch.tap_delays.size(); ++t) {
        const auto d = static_cast<std::size_t>(ch.tap_delays[t]);
        const auto& g = ch.tap_gains[t];
        if (g.size() < iq.size()) throw InvalidArgument("channel realization shorter than the signal");
        for (std::size_t n = d; n < iq.size(); ++n) out.samples[n] += g[n] * iq.samples[n - d];
    }
    return out;
}

IqBuffer apply_fading(const IqBuffer& iq, Model m, double max_doppler_hz, uint64_t seed) {
    if (m == Model::A) return iq;
    return apply_realization(iq, draw_realization(m, max_doppler_hz, iq.size(), seed));
}

IqBuffer apply_awgn_at(const IqBuffer& iq, double snr_db, double reference_power, uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0) return iq;
    if (!std::isfinite(snr_db)) throw InvalidArgument("snr_db must be finite or +inf");
    if (!(reference_power >= 0.0)) throw InvalidArgument("reference power must be non-negative");
    const double sigma = std::sqrt(reference_power / std::pow(10.0, snr_db / 10.0) / 2.0);
    std::mt19937_64 rng(mix_seed(seed, 2));
    std::normal_distribution<double> nd(0.0, sigma);
    IqBuffer out = iq;
    for (auto& s : out.samples) {
        const double re = nd(rng);
        const double im = nd(rng);
        s += Complex(re, im);
    }
    return out;
}

IqBuffer apply_awgn(const IqBuffer& iq, double snr_db, uint64_t seed, std::size_t begin, std::size_t end) {
    if (std::isinf(snr_db) && snr_db > 0) return iq;
    return apply_awgn_at(iq, snr_db, mean_power(iq.samples, begin, end), seed);
}

IqBuffer apply_static_cfo(const IqBuffer& iq, double cfo_hz) {
    if (cfo_hz == 0.0) return iq;
    IqBuffer out = iq;
    const double w = kTwoPi * cfo_hz / kSampleRateHz;
    for (std::size_t n = 0; n < out.size(); ++n) out.samples[n] *= std::polar(1.0, w * static_cast<double>(n));
    return out;
}

IqBuffer apply_channel(const IqBuffer& iq, const ChannelConfig& cfg, std::size_t begin, std::size_t end) {
    IqBuffer y = apply_fading(iq, cfg.model, cfg.max_doppler_hz, cfg.seed);
    y = apply_static_cfo(y, cfg.static_cfo_hz);
    if (cfg.reference_power) return apply_awgn_at(y, cfg.snr_db, *cfg.reference_power, cfg.seed);
    return apply_awgn(y, cfg.snr_db, cfg.seed, begin, end);
}

}  // namespace cwifi::channel
