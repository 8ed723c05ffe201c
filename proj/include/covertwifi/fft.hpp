#pragma once

#include <span>

#include "covertwifi/common.hpp"

namespace cwifi {

// Unnormalized forward DFT: X[k] = sum_n x[n] e^{-j2pi kn/N}.
void fft(std::span<const Complex> in, std::span<Complex> out);

// Inverse DFT with 1/N scaling, so ifft(fft(x)) == x.
void ifft(std::span<const Complex> in, std::span<Complex> out);

std::vector<Complex> fft(std::span<const Complex> in);
std::vector<Complex> ifft(std::span<const Complex> in);

}  // namespace cwifi
