#include "covertwifi/covert/covert.hpp"
#include "covertwifi/phy/qam.hpp"

namespace cwifi::covert {

void camo_embed(phy::OfdmGrid& grid, const Bits& bits, phy::Modulation m) {
    const std::size_t per_symbol = phy::kCamouflageSubcarriers.size() * phy::bits_per_symbol(m);
    if (bits.size() != per_symbol * grid.symbols.size())
        throw InvalidArgument("camouflage payload must be " + std::to_string(per_symbol * grid.symbols.size()) +
                              " bits");
    const auto symbols = phy::qam_map(bits, m);
    std::size_t s = 0;
    for (auto& row : grid.symbols)
        for (int k : phy::kCamouflageSubcarriers) row.at(k) = symbols[s++];
    grid.camouflage = true;
}

Bits camo_extract(const phy::RxDiagnostics& diag, phy::Modulation m, std::vector<double>* confidence) {
    std::vector<Complex> z;
    std::vector<double> w;
    for (std::size_t n = 0; n < diag.rx_grid.size(); ++n) {
        const Complex derot = std::polar(1.0, -diag.symbol_phase[n]);
        for (int k : phy::kCamouflageSubcarriers) {
            const Complex h = diag.channel_estimate.at(k);
            const double g = std::norm(h);
            z.push_back(g > 1e-12 ? diag.rx_grid[n].at(k) * derot / h : Complex{});
            w.push_back(g);
        }
    }
    std::vector<double> llr;
    phy::qam_demap_soft(z, w, m, llr);
    Bits out(llr.size());
    for (std::size_t i = 0; i < llr.size(); ++i) out[i] = llr[i] > 0.0 ? 1 : 0;
    if (confidence) {
        confidence->resize(llr.size());
        for (std::size_t i = 0; i < llr.size(); ++i) (*confidence)[i] = std::abs(llr[i]);
    }
    return out;
}

}  // namespace cwifi::covert
