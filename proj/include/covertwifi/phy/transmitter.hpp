#pragma once

#include <functional>

#include "covertwifi/common.hpp"
#include "covertwifi/phy/mcs.hpp"
#include "covertwifi/phy/ofdm.hpp"

namespace cwifi::phy {

inline constexpr std::size_t kMinPsduBytes = 14;
inline constexpr std::size_t kMaxPsduBytes = 2338;
inline constexpr std::size_t kMaxSigLength = 4095;

// MAC payload plus FCS, and the rate it is sent at.
struct Frame {
    Bytes psdu;
    Mcs mcs;
};

// Appends the FCS to `body` (MAC header + payload).
Frame make_frame(const Bytes& body, const Mcs& mcs);
void validate_frame(const Frame& frame);

struct SigField {
    Mcs mcs;
    std::size_t length = 0;
    bool ht_marked = false;   // stand-in for an HT-SIG: the reserved SIG bit
};

// 24 bits: rate, reserved, length (LSB first), even parity, 6 tail zeros.
Bits signal_field_bits(const SigField& sig);
SigField parse_signal_field(const Bits& bits24);

// One BPSK rate-1/2 symbol (pilots use polarity index 0).
SymbolBins build_signal_field(const SigField& sig);

std::size_t n_data_symbols(const Mcs& mcs, std::size_t psdu_bytes);

struct TxConfig {
    unsigned scrambler_seed = 0x7F;
    bool ht_marked = false;
};

// Extension points where covert codecs attach. Each runs after the stage it
// names has been built; any of them may be empty.
struct TxHooks {
    // Data grid (no SIG). Set `use_ht_ltf` to send the HT-LTF instead of the LTF.
    std::function<void(OfdmGrid& data_grid, bool& use_ht_ltf)> on_data_grid;
    std::function<void(std::vector<Complex>& preamble)> on_preamble;
    // Complete frame: preamble, SIG at kSigOffset, data from kDataOffset.
    std::function<void(std::vector<Complex>& frame, std::size_t n_data_symbols)> on_frame;
};

struct TxFrame {
    IqBuffer iq;
    OfdmGrid data_grid;
    Bits coded_bits;   // after puncturing, before interleaving
    std::size_t n_data_symbols = 0;
    bool ht_ltf = false;
};

TxFrame build_tx(const Frame& frame, const TxConfig& cfg = {}, const TxHooks& hooks = {});

// Legitimate frame without covert content.
IqBuffer transmit(const Frame& frame, const TxConfig& cfg = {});

// SERVICE + PSDU + tail + pad, scrambled, tail re-zeroed.
Bits data_field_bits(const Frame& frame, unsigned scrambler_seed);

}  // namespace cwifi::phy
