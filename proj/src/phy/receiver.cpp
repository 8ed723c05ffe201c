#include "covertwifi/phy/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "covertwifi/phy/coding.hpp"
#include "covertwifi/phy/qam.hpp"

namespace cwifi::phy {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kStfLag = 16;
constexpr int kDetectWindow = 32;
constexpr int kLtfSymbolOffset = 192;   // first long training symbol, relative to frame start

double wrap_phase(double x) { return std::remainder(x, kTwoPi); }

// Phase of sum_k Y_k conj(H_k X_k) and the matching estimator energy sum |H_k X_k|^2.
struct PhaseFit {
    Complex acc{0.0, 0.0};
    double energy = 0.0;
    void add(Complex y, Complex h, Complex x) {
        acc += y * std::conj(h * x);
        energy += std::norm(h * x);
    }
    double angle() const { return energy > 0.0 ? std::arg(acc) : 0.0; }
};

PhaseFit pilot_fit(const SymbolBins& y, const SymbolBins& h, int polarity_index) {
    PhaseFit fit;
    const double p = pilot_polarity(polarity_index);
    for (std::size_t i = 0; i < kPilotSubcarriers.size(); ++i) {
        const int k = kPilotSubcarriers[i];
        fit.add(y.at(k), h.at(k), p * kPilotValues[i]);
    }
    return fit;
}

struct SymbolDemod {
    double pilot_phase = 0.0;
    double phase = 0.0;          // pilot phase refined with decided data subcarriers
    double noise = 0.0;          // sum |Y - H X e^{j phase}|^2 over data subcarriers
    double evm_err = 0.0;
    double evm_ref = 0.0;
};

// Equalizes one symbol and appends LLRs for its 48 data subcarriers.
SymbolDemod demod_symbol(const SymbolBins& y, const SymbolBins& h, int polarity_index, Modulation mod,
                         bool track, std::vector<double>& llr) {
    SymbolDemod out;
    const PhaseFit pilots = pilot_fit(y, h, polarity_index);
    out.pilot_phase = track ? pilots.angle() : 0.0;
    const Complex derot = std::polar(1.0, -out.pilot_phase);

    const auto& idx = data_subcarriers();
    std::array<Complex, 48> z{};
    std::array<double, 48> w{};
    std::array<Complex, 48> decided{};
    PhaseFit refine;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const int k = idx[i];
        const Complex hk = h.at(k);
        const double g = std::norm(hk);
        const Complex yk = y.at(k) * derot;
        z[i] = g > 1e-12 ? yk / hk : Complex{};
        w[i] = g;
        decided[i] = qam_slice(z[i], mod);
        refine.add(yk, hk, decided[i]);
    }
    const double p = pilot_polarity(polarity_index);
    for (std::size_t i = 0; i < kPilotSubcarriers.size(); ++i) {
        const int k = kPilotSubcarriers[i];
        refine.add(y.at(k) * derot, h.at(k), p * kPilotValues[i]);
    }
    out.phase = out.pilot_phase + refine.angle();

    // The data itself is demapped with the refined phase when tracking.
    const Complex rot = std::polar(1.0, out.phase);
    const Complex fine = std::polar(1.0, track ? -refine.angle() : 0.0);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const int k = idx[i];
        z[i] *= fine;
        decided[i] = qam_slice(z[i], mod);
        out.noise += std::norm(y.at(k) - h.at(k) * decided[i] * rot);
        out.evm_err += std::norm(z[i] - decided[i]);
        out.evm_ref += std::norm(decided[i]);
    }
    qam_demap_soft(z, w, mod, llr);
    return out;
}

}  // namespace

std::size_t detect_frame(const IqBuffer& iq, const RxConfig& cfg) {
    const auto& r = iq.samples;
    const std::size_t n_total = r.size();
    if (n_total < static_cast<std::size_t>(kPreambleLength + kDetectWindow)) throw NoFrameFound();

    // Sliding lag-16 autocorrelation, normalized by the window power.
    const std::size_t last = n_total - kDetectWindow - kStfLag;
    Complex c{0.0, 0.0};
    double p = 0.0;
    for (int k = 0; k < kDetectWindow; ++k) {
        c += r[k + kStfLag] * std::conj(r[k]);
        p += std::norm(r[k + kStfLag]);
    }
    std::size_t run = 0;
    std::optional<std::size_t> coarse;
    for (std::size_t n = 0; n <= last; ++n) {
        const double m = p > 1e-30 ? std::abs(c) / p : 0.0;
        if (m > cfg.detection_threshold) {
            if (++run >= static_cast<std::size_t>(cfg.plateau_length)) {
                coarse = n + 1 - run;
                break;
            }
        } else {
            run = 0;
        }
        if (n == last) break;
        c += r[n + kDetectWindow + kStfLag] * std::conj(r[n + kDetectWindow]) - r[n + kStfLag] * std::conj(r[n]);
        p += std::norm(r[n + kDetectWindow + kStfLag]) - std::norm(r[n + kStfLag]);
    }
    if (!coarse) throw NoFrameFound();

    // Provisional CFO from the plateau, used to derotate the LTF template.
    Complex acc{0.0, 0.0};
    for (std::size_t n = *coarse + 16; n < std::min(*coarse + 112, n_total - kStfLag); ++n)
        acc += r[n + kStfLag] * std::conj(r[n]);
    const double f0 = std::arg(acc) / (kTwoPi * kStfLag) * kSampleRateHz;

    const auto tmpl = ltf_symbol(false);
    std::vector<Complex> rotated(kFftSize);
    for (int k = 0; k < kFftSize; ++k) rotated[k] = tmpl[k] * std::polar(1.0, kTwoPi * f0 * k / kSampleRateHz);

    const std::size_t lo = *coarse + 100;
    if (lo + 2 * kFftSize > n_total) throw NoFrameFound();
    const std::size_t hi = std::min(*coarse + 320, n_total - 2 * kFftSize);
    std::vector<double> corr(hi + kFftSize - lo + 1, 0.0);
    for (std::size_t q = lo; q <= hi + kFftSize && q + kFftSize <= n_total; ++q) {
        Complex s{0.0, 0.0};
        for (int k = 0; k < kFftSize; ++k) s += r[q + k] * std::conj(rotated[k]);
        corr[q - lo] = std::abs(s);
    }
    std::vector<double> metric(hi - lo + 1);
    for (std::size_t q = lo; q <= hi; ++q) metric[q - lo] = corr[q - lo] + corr[q - lo + kFftSize];
    const auto peak_it = std::max_element(metric.begin(), metric.end());
    const std::size_t peak = lo + static_cast<std::size_t>(peak_it - metric.begin());
    if (*peak_it <= 0.0) throw NoFrameFound();

    std::size_t first = peak;
    for (std::size_t q = (peak >= lo + 8 ? peak - 8 : lo); q < peak; ++q) {
        if (metric[q - lo] >= cfg.first_path_fraction * *peak_it) {
            first = q;
            break;
        }
    }
    if (first < static_cast<std::size_t>(kLtfSymbolOffset)) throw NoFrameFound();
    return first - kLtfSymbolOffset;
}

CfoEstimate estimate_cfo(const IqBuffer& iq, std::size_t start) {
    const auto& r = iq.samples;
    if (start + kPreambleLength > r.size()) throw InvalidArgument("estimate_cfo: preamble out of range");
    CfoEstimate est;
    Complex acc{0.0, 0.0};
    for (std::size_t n = start + 16; n < start + kStfLength - kStfLag; ++n) acc += r[n + kStfLag] * std::conj(r[n]);
    est.stf_hz = std::arg(acc) / (kTwoPi * kStfLag) * kSampleRateHz;

    Complex acc2{0.0, 0.0};
    const double w = -kTwoPi * est.stf_hz / kSampleRateHz;
    for (std::size_t n = start + kLtfSymbolOffset; n < start + kLtfSymbolOffset + kFftSize; ++n) {
        const Complex a = r[n] * std::polar(1.0, w * static_cast<double>(n - start));
        const Complex b = r[n + kFftSize] * std::polar(1.0, w * static_cast<double>(n + kFftSize - start));
        acc2 += b * std::conj(a);
    }
    est.ltf_hz = std::arg(acc2) / (kTwoPi * kFftSize) * kSampleRateHz;
    return est;
}

std::vector<Complex> correct_cfo(const IqBuffer& iq, std::size_t start, double cfo_hz) {
    std::vector<Complex> out(iq.samples.begin() + static_cast<std::ptrdiff_t>(std::min(start, iq.size())),
                             iq.samples.end());
    const double w = -kTwoPi * cfo_hz / kSampleRateHz;
    for (std::size_t n = 0; n < out.size(); ++n) out[n] *= std::polar(1.0, w * static_cast<double>(n));
    return out;
}

SymbolBins estimate_channel(std::span<const Complex> aligned, bool ht_reference) {
    const SymbolBins y1 = demodulate_window(aligned, kLtfSymbolOffset);
    const SymbolBins y2 = demodulate_window(aligned, kLtfSymbolOffset + kFftSize);
    const auto& ref = ht_reference ? ht_ltf_bins() : ltf_bins();
    SymbolBins h;
    for (int k : active_subcarriers(ht_reference)) h.at(k) = 0.5 * (y1.at(k) + y2.at(k)) / ref.at(k);
    return h;
}

RxResult receive(const IqBuffer& iq, const RxConfig& cfg) {
    RxResult result;
    auto& d = result.diag;
    d.frame_start = cfg.known_frame_start ? *cfg.known_frame_start : detect_frame(iq, cfg);
    if (d.frame_start + kDataOffset > iq.size()) throw NoFrameFound();

    d.coarse_cfo_hz = cfg.ideal_channel ? 0.0 : estimate_cfo(iq, d.frame_start).total_hz();
    d.aligned = correct_cfo(iq, d.frame_start, d.coarse_cfo_hz);
    const std::span<const Complex> aligned(d.aligned);

    if (cfg.ideal_channel) {
        for (int k : active_subcarriers(true)) d.channel_estimate.at(k) = 1.0;
    } else {
        d.channel_estimate = estimate_channel(aligned, true);
    }
    const SymbolBins& h = d.channel_estimate;
    const bool track = cfg.track_phase && !cfg.ideal_channel;

    // SIG
    std::vector<double> llr;
    const SymbolBins y_sig = demodulate_window(aligned, kSigOffset + kCpLength);
    const SymbolDemod sig_demod = demod_symbol(y_sig, h, 0, Modulation::Bpsk, track, llr);
    d.sig_phase = sig_demod.phase;
    const auto sig_soft = deinterleave_soft(llr, 48, 1);
    d.sig = parse_signal_field(fec_decode(sig_soft, CodingRate{1, 2}));
    const Mcs& mcs = d.sig.mcs;

    const std::size_t n_sym = n_data_symbols(mcs, d.sig.length);
    if (kDataOffset + n_sym * kSymbolLength > aligned.size()) throw Error("frame truncated");

    llr.clear();
    llr.reserve(n_sym * mcs.n_cbps);
    d.rx_grid.reserve(n_sym);
    d.symbol_phase.reserve(n_sym);
    double noise = 0.0, evm_err = 0.0, evm_ref = 0.0;
    for (std::size_t n = 0; n < n_sym; ++n) {
        const std::size_t off = kDataOffset + n * kSymbolLength + kCpLength;
        d.rx_grid.push_back(demodulate_window(aligned, off));
        const SymbolDemod sd = demod_symbol(d.rx_grid.back(), h, static_cast<int>(n + 1), mcs.modulation, track, llr);
        d.symbol_phase.push_back(sd.phase);
        noise += sd.noise;
        evm_err += sd.evm_err;
        evm_ref += sd.evm_ref;
    }
    d.noise_per_bin = noise / static_cast<double>(n_sym * 48);
    d.evm_db = 10.0 * std::log10(std::max(evm_err, 1e-30) / std::max(evm_ref, 1e-30));
    d.rx_power_db = 10.0 * std::log10(std::max(mean_power(d.aligned, 0, kDataOffset + n_sym * kSymbolLength), 1e-30));

    const double hz_per_rad = kSampleRateHz / (kTwoPi * kSymbolLength);
    d.pilot_cfo_hz.resize(n_sym);
    double prev = d.sig_phase;
    for (std::size_t n = 0; n < n_sym; ++n) {
        d.pilot_cfo_hz[n] = wrap_phase(d.symbol_phase[n] - prev) * hz_per_rad;
        prev = d.symbol_phase[n];
    }

    // Per-symbol frequency: the CP repeats the symbol tail 64 samples later.
    const double hz_per_rad_cp = kSampleRateHz / (kTwoPi * kFftSize);
    const double sample_noise = d.noise_per_bin / kFftSize;
    d.per_symbol_cfo_hz.resize(n_sym);
    double var_acc = 0.0;
    for (std::size_t n = 0; n < n_sym; ++n) {
        const std::size_t base = kDataOffset + n * kSymbolLength;
        Complex c{0.0, 0.0};
        double e = 0.0;
        for (int i = 0; i < kCpLength; ++i) {
            c += aligned[base + kFftSize + i] * std::conj(aligned[base + i]);
            e += std::norm(aligned[base + i]) + std::norm(aligned[base + kFftSize + i]);
        }
        d.per_symbol_cfo_hz[n] = std::arg(c) * hz_per_rad_cp;
        if (std::norm(c) > 0.0) var_acc += sample_noise * e / (2.0 * std::norm(c));
    }
    d.cfo_noise_var_hz2 = n_sym ? var_acc / static_cast<double>(n_sym) * hz_per_rad_cp * hz_per_rad_cp : 0.0;

    const auto soft = deinterleave_soft(llr, mcs.n_cbps, mcs.n_bpsc);
    d.raw_bits.resize(soft.size());
    for (std::size_t i = 0; i < soft.size(); ++i) d.raw_bits[i] = soft[i] > 0.0 ? 1 : 0;

    const Bits scrambled = fec_decode(soft, mcs.coding_rate);
    const unsigned seed = recover_scrambler_seed(std::span<const uint8_t>(scrambled.data(), 7));
    d.decoded_bits = scramble(scrambled, seed);

    const std::size_t psdu_bits = 8 * d.sig.length;
    const Bits psdu(d.decoded_bits.begin() + 16, d.decoded_bits.begin() + 16 + static_cast<std::ptrdiff_t>(psdu_bits));
    result.frame = Frame{bits_to_bytes_lsb(psdu), mcs};
    d.fcs_ok = check_fcs(result.frame.psdu);
    return result;
}

}  // namespace cwifi::phy
