#pragma once

#include <span>

#include "covertwifi/common.hpp"
#include "covertwifi/phy/mcs.hpp"

namespace cwifi::phy {

// Gray-coded 802.11 constellations with unit average power. The first bit of
// each group selects the in-phase level.
std::vector<Complex> qam_map(const Bits& bits, Modulation m);

// Hard decisions.
Bits qam_demap(std::span<const Complex> symbols, Modulation m);

// Max-log LLRs, positive meaning bit 1, each symbol scaled by its weight
// (typically |H|^2 of the subcarrier).
void qam_demap_soft(std::span<const Complex> symbols, std::span<const double> weights, Modulation m,
                    std::vector<double>& out);

// Closest constellation point.
Complex qam_slice(Complex z, Modulation m);

// All points in index order: point i carries the bits of i, MSB = first bit.
const std::vector<Complex>& constellation(Modulation m);

}  // namespace cwifi::phy
