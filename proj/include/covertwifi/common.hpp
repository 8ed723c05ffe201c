#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwifi {

using Complex = std::complex<double>;
using Bits = std::vector<uint8_t>;   // one bit per element, values 0/1
using Bytes = std::vector<uint8_t>;

inline constexpr double kSampleRateHz = 20e6;
inline constexpr int kFftSize = 64;
inline constexpr int kCpLength = 16;
inline constexpr int kSymbolLength = kFftSize + kCpLength;   // 80 samples, 4 us
inline constexpr int kStfLength = 160;
inline constexpr int kLtfLength = 160;
inline constexpr int kPreambleLength = kStfLength + kLtfLength;
inline constexpr int kSigOffset = kPreambleLength;
inline constexpr int kDataOffset = kPreambleLength + kSymbolLength;   // first data symbol
inline constexpr double kSymbolDurationS = kSymbolLength / kSampleRateHz;

// Complex baseband samples at 20 Msample/s.
struct IqBuffer {
    std::vector<Complex> samples;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    Complex& operator[](std::size_t i) { return samples[i]; }
    const Complex& operator[](std::size_t i) const { return samples[i]; }
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NoFrameFound : public Error {
public:
    NoFrameFound() : Error("no frame found") {}
};

class SigError : public Error {
public:
    using Error::Error;
};

// Mean |x|^2 over [begin, end).
double mean_power(const std::vector<Complex>& x, std::size_t begin = 0,
                  std::size_t end = static_cast<std::size_t>(-1));

// Bits packed MSB first, as in covert payload files.
Bits bytes_to_bits_msb(const Bytes& bytes);
Bytes bits_to_bytes_msb(const Bits& bits);

// Bits packed LSB first, as transmitted by the 802.11 PHY.
Bits bytes_to_bits_lsb(const Bytes& bytes);
Bytes bits_to_bytes_lsb(const Bits& bits);

std::size_t count_bit_errors(const Bits& a, const Bits& b);

}  // namespace cwifi
