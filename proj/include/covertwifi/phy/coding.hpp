#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "covertwifi/common.hpp"
#include "covertwifi/phy/mcs.hpp"

namespace cwifi::phy {

// IEEE 802.3 CRC-32 (reflected 0x04C11DB7, init and final xor 0xFFFFFFFF).
uint32_t crc32(std::span<const uint8_t> data);

// FCS bytes in transmission order (least significant byte first).
std::array<uint8_t, 4> compute_fcs(std::span<const uint8_t> data);
bool check_fcs(std::span<const uint8_t> psdu);

// x^7 + x^4 + 1 scrambler; seed is the 7-bit register state and must be nonzero.
Bits scrambler_sequence(std::size_t n, unsigned seed7);
Bits scramble(const Bits& bits, unsigned seed7);
// Recovers the register state from the first 7 scrambled bits of a zero SERVICE field.
unsigned recover_scrambler_seed(std::span<const uint8_t> first7);

// Rate-1/2 K=7 convolutional code (133, 171 octal), then punctured to `rate`.
Bits fec_encode(const Bits& bits, CodingRate rate);

// Soft inputs: positive means bit 1, magnitude is confidence, 0 is an erasure.
// The input must be a whole number of puncturing periods.
Bits fec_decode(std::span<const double> soft, CodingRate rate);
Bits fec_decode_hard(const Bits& coded, CodingRate rate);

// Number of coded bits produced from n input bits.
std::size_t coded_length(std::size_t n, CodingRate rate);

// Two-permutation block interleaver, applied per n_cbps block.
Bits interleave(const Bits& bits, int n_cbps, int n_bpsc);
Bits deinterleave(const Bits& bits, int n_cbps, int n_bpsc);
std::vector<double> deinterleave_soft(std::span<const double> values, int n_cbps, int n_bpsc);
// perm[k] = position of input bit k after interleaving.
std::vector<int> interleaver_permutation(int n_cbps, int n_bpsc);

}  // namespace cwifi::phy
