#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "covertwifi/covert/covert.hpp"
#include "covertwifi/detect/detect.hpp"
#include "covertwifi/fft.hpp"

namespace cwifi::detect {
namespace {

constexpr double kOobStartHz = 9e6;

double db(double x) { return 10.0 * std::log10(std::max(x, 1e-300)); }

}  // namespace

double l1_stf_phase(std::span<const Complex> aligned, const phy::SymbolBins& channel, double sig_phase) {
    return std::remainder(covert::stf_phase_estimate(aligned, channel, sig_phase), 2.0 * std::numbers::pi);
}

double l1_cfo_pattern(const std::vector<double>& trace, double noise_var_hz2, int taps) {
    if (trace.size() < covert::kMinFskSymbols)
        throw InvalidArgument("CFO pattern needs at least 60 symbols, got " + std::to_string(trace.size()));
    if (!(noise_var_hz2 > 0.0)) throw InvalidArgument("noise variance must be positive");
    const auto ma = covert::moving_average(trace, taps);
    double mean = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) mean += trace[i] - ma[i];
    mean /= static_cast<double>(trace.size());
    double var = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) var += std::pow(trace[i] - ma[i] - mean, 2);
    var /= static_cast<double>(trace.size() - 1);
    return var / noise_var_hz2;
}

SubcarrierCheck l1_subcarrier_conformance(const std::vector<phy::SymbolBins>& rx_grid, const phy::SigField& sig,
                                          double threshold_db) {
    if (rx_grid.empty()) throw InvalidArgument("no data symbols to inspect");
    double extra = 0.0, data = 0.0;
    for (const auto& sym : rx_grid) {
        for (int k : phy::kCamouflageSubcarriers) extra += std::norm(sym.at(k));
        for (int k : phy::data_subcarriers()) data += std::norm(sym.at(k));
    }
    extra /= static_cast<double>(phy::kCamouflageSubcarriers.size());
    data /= static_cast<double>(phy::data_subcarriers().size());
    SubcarrierCheck out;
    out.extra_power_db = db(extra) - db(data);
    out.ht_frame = sig.ht_marked;
    out.covert = !sig.ht_marked && out.extra_power_db > threshold_db;
    return out;
}

std::vector<double> l1_cp_similarity(const IqBuffer& iq, std::size_t frame_start, std::size_t n_symbols) {
    const double cfo = phy::estimate_cfo(iq, frame_start).total_hz();
    const auto y = phy::correct_cfo(iq, frame_start, cfo);
    std::vector<double> out;
    out.reserve(n_symbols);
    for (std::size_t n = 0; n < n_symbols; ++n) {
        const std::size_t base = kDataOffset + n * kSymbolLength;
        if (base + kSymbolLength > y.size()) break;
        Complex c{0.0, 0.0};
        double ea = 0.0, eb = 0.0;
        for (int i = 0; i < kCpLength; ++i) {
            const Complex a = y[base + i];
            const Complex b = y[base + kFftSize + i];
            c += a * std::conj(b);
            ea += std::norm(a);
            eb += std::norm(b);
        }
        out.push_back(ea > 0.0 && eb > 0.0 ? c.real() / std::sqrt(ea * eb) : 0.0);
    }
    return out;
}

Psd welch_psd(std::span<const Complex> x, int nfft) {
    if (nfft < 8) throw InvalidArgument("Welch segment too short");
    const auto n = static_cast<std::size_t>(nfft);
    std::vector<double> win(n);
    double wpow = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        win[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
        wpow += win[i] * win[i];
    }
    std::vector<double> acc(n, 0.0);
    std::vector<Complex> seg(n), spec(n);
    std::size_t segments = 0;
    const std::size_t hop = n / 2;
    for (std::size_t start = 0; start + n <= x.size(); start += hop) {
        for (std::size_t i = 0; i < n; ++i) seg[i] = x[start + i] * win[i];
        fft(seg, spec);
        for (std::size_t i = 0; i < n; ++i) acc[i] += std::norm(spec[i]);
        ++segments;
    }
    if (segments == 0) throw InvalidArgument("signal shorter than one Welch segment");

    Psd out;
    out.freq_hz.resize(n);
    out.power.resize(n);
    const double scale = 1.0 / (static_cast<double>(segments) * wpow);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = (i + n / 2) % n;   // fftshift
        const auto signed_k = static_cast<double>(i) - static_cast<double>(n / 2);
        out.freq_hz[i] = signed_k * kSampleRateHz / static_cast<double>(n);
        out.power[i] = acc[k] * scale;
    }
    return out;
}

double spectral_mask_dbr(double f) {
    f = std::abs(f);
    if (f <= 9e6) return 0.0;
    if (f <= 11e6) return -20.0 * (f - 9e6) / 2e6;
    if (f <= 20e6) return -20.0 - 8.0 * (f - 11e6) / 9e6;
    if (f <= 30e6) return -28.0 - 12.0 * (f - 20e6) / 10e6;
    return -40.0;
}

double l1_spectral_mask(std::span<const Complex> x, int nfft) {
    const Psd psd = welch_psd(x, nfft);
    double ref = 0.0;
    for (std::size_t i = 0; i < psd.power.size(); ++i)
        if (std::abs(psd.freq_hz[i]) < kOobStartHz) ref = std::max(ref, psd.power[i]);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < psd.power.size(); ++i) {
        if (std::abs(psd.freq_hz[i]) < kOobStartHz) continue;
        margin = std::min(margin, spectral_mask_dbr(psd.freq_hz[i]) - (db(psd.power[i]) - db(ref)));
    }
    return margin;
}

double roc_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
    if (pos.empty() || neg.empty()) throw InvalidArgument("ROC needs both classes");
    // Mann-Whitney U via ranks; ties count one half.
    std::vector<std::pair<double, int>> all;
    all.reserve(pos.size() + neg.size());
    for (double v : pos) all.emplace_back(v, 1);
    for (double v : neg) all.emplace_back(v, 0);
    std::sort(all.begin(), all.end());
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        const double rank = 0.5 * static_cast<double>(i + j + 1);   // average 1-based rank
        for (std::size_t k = i; k < j; ++k)
            if (all[k].second) rank_sum += rank;
        i = j;
    }
    const auto np = static_cast<double>(pos.size());
    const auto nn = static_cast<double>(neg.size());
    return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double calibrate_sigma(const std::vector<double>& clean) {
    if (clean.empty()) throw InvalidArgument("empty calibration corpus");
    double s = 0.0;
    for (double v : clean) s += v * v;
    return std::sqrt(s / static_cast<double>(clean.size()));
}

Layer1Report analyze(const IqBuffer& iq, const Thresholds& th, const phy::RxConfig& rx) {
    const auto result = phy::receive(iq, rx);
    const auto& d = result.diag;
    Layer1Report r;
    r.frame_start = d.frame_start;
    r.stf_delta_phi_rad = l1_stf_phase(d.aligned, d.channel_estimate, d.sig_phase);
    if (d.per_symbol_cfo_hz.size() >= covert::kMinFskSymbols && d.cfo_noise_var_hz2 > 0.0)
        r.cfo_pattern_score = l1_cfo_pattern(d.per_symbol_cfo_hz, d.cfo_noise_var_hz2);
    r.subcarriers = l1_subcarrier_conformance(d.rx_grid, d.sig, th.subcarrier_margin_db);
    r.cp_similarity = l1_cp_similarity(iq, d.frame_start, d.rx_grid.size());
    const std::size_t end = std::min(iq.size(), d.frame_start + kDataOffset + d.rx_grid.size() * kSymbolLength);
    r.oob_power_margin_db = l1_spectral_mask(std::span<const Complex>(iq.samples).subspan(d.frame_start, end - d.frame_start));
    r.evm_db = d.evm_db;

    r.stf_flag = std::abs(r.stf_delta_phi_rad) > th.stf_k * th.stf_sigma_rad;
    r.cfo_flag = r.cfo_pattern_score && *r.cfo_pattern_score > th.cfo_score;
    if (!r.cp_similarity.empty()) {
        const double mean = std::accumulate(r.cp_similarity.begin(), r.cp_similarity.end(), 0.0) /
                            static_cast<double>(r.cp_similarity.size());
        r.cp_flag = mean < th.cp_similarity;
    }
    return r;
}

}  // namespace cwifi::detect
