#include <bit>
#include <cstdio>

#include "covertwifi/harness/harness.hpp"

namespace cwifi::harness {

FrameProfile make_profile(int mcs_rate, std::size_t psdu_bytes) {
    const auto& mcs = phy::mcs_for_rate(mcs_rate);
    FrameProfile f;
    f.mcs_rate = mcs_rate;
    f.n_data_symbols = phy::n_data_symbols(mcs, psdu_bytes);
    f.duration_s = static_cast<double>(kDataOffset + f.n_data_symbols * kSymbolLength) / kSampleRateHz;
    return f;
}

double covert_rate(const covert::CovertSpec& spec, const FrameProfile& f) {
    covert::validate(spec);
    const double r = phy::mcs_for_rate(f.mcs_rate).coding_rate.value();
    if (const auto* s = std::get_if<covert::StfPsk>(&spec)) {
        if (!(f.duration_s > 0.0)) throw InvalidArgument("frame duration must be positive");
        return std::countr_zero(static_cast<unsigned>(s->order)) / f.duration_s;
    }
    if (std::holds_alternative<covert::CfoFsk>(spec)) return 1.0 / kSymbolDurationS;
    // Covert symbols per OFDM symbol, at the carrier's coding rate.
    return static_cast<double>(covert::capacity_bits(spec, 1)) * r / kSymbolDurationS;
}

std::vector<RateRow> reference_rates() {
    using covert::CpFraction;
    std::vector<RateRow> rows = {
        {"stf-psk M=64, 16 us frames", covert::StfPsk{64}, FrameProfile{36, 16e-6, 1}},
        {"stf-psk M=64, 14-byte 36 Mbit/s frame as modulated", covert::StfPsk{64}, make_profile(36, 14)},
        {"cfo-fsk", covert::CfoFsk{}, make_profile(24, 1000)},
        {"camo 64QAM, 54 Mbit/s frames", covert::Camo{phy::Modulation::Qam64}, make_profile(54, 1500)},
        {"cp half fft=8 cpcp=2 64QAM, 54 Mbit/s frames",
         covert::CpReplace{CpFraction::Half, 8, 2, phy::Modulation::Qam64}, make_profile(54, 1500)},
    };
    for (auto& row : rows) row.bits_per_s = covert_rate(row.spec, row.frame);
    return rows;
}

std::string format_rate(double bps) {
    char buf[64];
    if (bps >= 1e6) std::snprintf(buf, sizeof buf, "%g Mbit/s", bps / 1e6);
    else std::snprintf(buf, sizeof buf, "%g kbit/s", bps / 1e3);
    return buf;
}

}  // namespace cwifi::harness
