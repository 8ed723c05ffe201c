#include <cmath>

#include "covertwifi/covert/covert.hpp"
#include "covertwifi/fft.hpp"
#include "covertwifi/phy/ofdm.hpp"
#include "covertwifi/phy/qam.hpp"

namespace cwifi::covert {
namespace {

constexpr int kLegacyEdge = 26;

int bin_index(int c, int n) { return (c + n) % n; }

// Sample amplitude scale giving the nominal frame sample power.
double mini_scale(int covert_fft, std::size_t usable) {
    return std::sqrt(phy::nominal_symbol_power() * covert_fft * covert_fft / static_cast<double>(usable));
}

// Mean of the legacy estimate over the band a covert bin spans.
Complex group_gain(const phy::SymbolBins& h, int c, int covert_fft) {
    const int g = kFftSize / covert_fft;
    Complex sum{0.0, 0.0};
    int count = 0;
    for (int k = c * g - g / 2; k < c * g + (g + 1) / 2; ++k) {
        if (k == 0 || k < -kLegacyEdge || k > kLegacyEdge) continue;
        sum += h.at(k);
        ++count;
    }
    return count ? sum / static_cast<double>(count) : h.at(c * g);
}

}  // namespace

int replaced_samples(CpFraction f) { return f == CpFraction::Full ? kCpLength : kCpLength / 2; }

int minis_per_cp(const CpReplace& spec) { return replaced_samples(spec.fraction) / spec.covert_fft; }

std::vector<int> cp_usable_bins(int covert_fft) {
    // In-band bins only: a covert bin c sits at legacy subcarrier c * 64 / covert_fft.
    const int g = kFftSize / covert_fft;
    std::vector<int> out;
    for (int c = -covert_fft / 2; c < covert_fft / 2; ++c)
        if (c != 0 && std::abs(c * g) <= kLegacyEdge) out.push_back(c);
    if (out.empty()) out.push_back(0);
    return out;
}

void cp_replace_embed(std::vector<Complex>& frame, std::size_t n_data_symbols, const Bits& bits,
                      const CpReplace& spec) {
    const int f = spec.covert_fft;
    const int minis = minis_per_cp(spec);
    const auto usable = cp_usable_bins(f);
    const std::size_t per_cp = static_cast<std::size_t>(minis) * usable.size() * phy::bits_per_symbol(spec.modulation);
    if (bits.size() != per_cp * n_data_symbols)
        throw InvalidArgument("CP replacement payload must be " + std::to_string(per_cp * n_data_symbols) + " bits");
    if (frame.size() < kDataOffset + n_data_symbols * kSymbolLength) throw InvalidArgument("frame too short");

    const auto symbols = phy::qam_map(bits, spec.modulation);
    const double scale = mini_scale(f, usable.size());
    std::vector<Complex> bins(f), body(f);
    std::size_t s = 0;
    for (std::size_t n = 0; n < n_data_symbols; ++n) {
        std::size_t pos = kDataOffset + n * kSymbolLength;
        for (int m = 0; m < minis; ++m) {
            std::fill(bins.begin(), bins.end(), Complex{});
            for (int c : usable) bins[bin_index(c, f)] = symbols[s++];
            ifft(bins, body);
            for (int i = 0; i < spec.cpcp_len; ++i) frame[pos++] = scale * body[f - spec.cpcp_len + i];
            for (int i = 0; i < f; ++i) frame[pos++] = scale * body[i];
        }
    }
}

Bits cp_replace_extract(const phy::RxDiagnostics& diag, const CpReplace& spec, std::vector<double>* confidence) {
    const int f = spec.covert_fft;
    const int minis = minis_per_cp(spec);
    const auto usable = cp_usable_bins(f);
    const double scale = mini_scale(f, usable.size());
    std::vector<Complex> gains;
    for (int c : usable) gains.push_back(scale * group_gain(diag.channel_estimate, c, f));

    const std::span<const Complex> aligned(diag.aligned);
    std::vector<Complex> z;
    std::vector<double> w;
    std::vector<Complex> y(f);
    for (std::size_t n = 0; n < diag.rx_grid.size(); ++n) {
        const Complex derot = std::polar(1.0, -diag.symbol_phase[n]);
        std::size_t pos = kDataOffset + n * kSymbolLength;
        for (int m = 0; m < minis; ++m) {
            pos += spec.cpcp_len;
            if (pos + f > aligned.size()) throw Error("frame truncated");
            fft(aligned.subspan(pos, f), y);
            pos += f;
            for (std::size_t i = 0; i < usable.size(); ++i) {
                const double g = std::norm(gains[i]);
                z.push_back(g > 1e-24 ? y[bin_index(usable[i], f)] * derot / gains[i] : Complex{});
                w.push_back(g / (scale * scale));
            }
        }
    }
    std::vector<double> llr;
    phy::qam_demap_soft(z, w, spec.modulation, llr);
    Bits out(llr.size());
    for (std::size_t i = 0; i < llr.size(); ++i) out[i] = llr[i] > 0.0 ? 1 : 0;
    if (confidence) {
        confidence->resize(llr.size());
        for (std::size_t i = 0; i < llr.size(); ++i) (*confidence)[i] = std::abs(llr[i]);
    }
    return out;
}

}  // namespace cwifi::covert
