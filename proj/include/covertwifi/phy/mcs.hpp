#pragma once

#include <array>
#include <optional>
#include <string>

namespace cwifi::phy {

enum class Modulation { Bpsk, Qpsk, Qam16, Qam64 };

int bits_per_symbol(Modulation m);
std::string to_string(Modulation m);
Modulation parse_modulation(const std::string& s);

struct CodingRate {
    int num;
    int den;
    double value() const { return static_cast<double>(num) / den; }
    friend bool operator==(const CodingRate&, const CodingRate&) = default;
};

// One of the eight 802.11a/g rates.
struct Mcs {
    int rate_mbps;
    Modulation modulation;
    CodingRate coding_rate;
    int n_bpsc;   // coded bits per subcarrier
    int n_cbps;   // coded bits per OFDM symbol
    int n_dbps;   // data bits per OFDM symbol
    unsigned sig_rate_bits;   // R1..R4, R1 in bit 3

    friend bool operator==(const Mcs& a, const Mcs& b) { return a.rate_mbps == b.rate_mbps; }
};

const std::array<Mcs, 8>& all_mcs();

// Throws InvalidArgument for rates other than 6/9/12/18/24/36/48/54.
const Mcs& mcs_for_rate(int rate_mbps);
std::optional<Mcs> mcs_from_sig_bits(unsigned rate_bits);

}  // namespace cwifi::phy
