#include "covertwifi/phy/mcs.hpp"

#include "covertwifi/common.hpp"

namespace cwifi::phy {

int bits_per_symbol(Modulation m) {
    switch (m) {
        case Modulation::Bpsk: return 1;
        case Modulation::Qpsk: return 2;
        case Modulation::Qam16: return 4;
        case Modulation::Qam64: return 6;
    }
    return 0;
}

std::string to_string(Modulation m) {
    switch (m) {
        case Modulation::Bpsk: return "BPSK";
        case Modulation::Qpsk: return "QPSK";
        case Modulation::Qam16: return "16QAM";
        case Modulation::Qam64: return "64QAM";
    }
    return "?";
}

Modulation parse_modulation(const std::string& s) {
    if (s == "BPSK" || s == "bpsk") return Modulation::Bpsk;
    if (s == "QPSK" || s == "qpsk") return Modulation::Qpsk;
    if (s == "16QAM" || s == "16qam" || s == "QAM16") return Modulation::Qam16;
    if (s == "64QAM" || s == "64qam" || s == "QAM64") return Modulation::Qam64;
    throw InvalidArgument("unknown modulation: " + s);
}

namespace {

constexpr Mcs make(int rate, Modulation mod, int bpsc, int num, int den, unsigned bits) {
    return Mcs{rate, mod, CodingRate{num, den}, bpsc, 48 * bpsc, 48 * bpsc * num / den, bits};
}

}  // namespace

const std::array<Mcs, 8>& all_mcs() {
    static const std::array<Mcs, 8> table = {
        make(6, Modulation::Bpsk, 1, 1, 2, 0b1101),  make(9, Modulation::Bpsk, 1, 3, 4, 0b1111),
        make(12, Modulation::Qpsk, 2, 1, 2, 0b0101), make(18, Modulation::Qpsk, 2, 3, 4, 0b0111),
        make(24, Modulation::Qam16, 4, 1, 2, 0b1001), make(36, Modulation::Qam16, 4, 3, 4, 0b1011),
        make(48, Modulation::Qam64, 6, 2, 3, 0b0001), make(54, Modulation::Qam64, 6, 3, 4, 0b0011),
    };
    return table;
}

const Mcs& mcs_for_rate(int rate_mbps) {
    for (const auto& m : all_mcs())
        if (m.rate_mbps == rate_mbps) return m;
    throw InvalidArgument("unsupported rate: " + std::to_string(rate_mbps) + " Mbps");
}

std::optional<Mcs> mcs_from_sig_bits(unsigned rate_bits) {
    for (const auto& m : all_mcs())
        if (m.sig_rate_bits == rate_bits) return m;
    return std::nullopt;
}

}  // namespace cwifi::phy
