#include "covertwifi/common.hpp"

#include <algorithm>

namespace cwifi {

double mean_power(const std::vector<Complex>& x, std::size_t begin, std::size_t end) {
    end = std::min(end, x.size());
    if (begin >= end) return 0.0;
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += std::norm(x[i]);
    return acc / static_cast<double>(end - begin);
}

Bits bytes_to_bits_msb(const Bytes& bytes) {
    Bits bits;
    bits.reserve(bytes.size() * 8);
    for (uint8_t b : bytes)
        for (int i = 7; i >= 0; --i) bits.push_back((b >> i) & 1);
    return bits;
}

Bytes bits_to_bytes_msb(const Bits& bits) {
    Bytes bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bytes[i / 8] |= static_cast<uint8_t>(0x80 >> (i % 8));
    return bytes;
}

Bits bytes_to_bits_lsb(const Bytes& bytes) {
    Bits bits;
    bits.reserve(bytes.size() * 8);
    for (uint8_t b : bytes)
        for (int i = 0; i < 8; ++i) bits.push_back((b >> i) & 1);
    return bits;
}

Bytes bits_to_bytes_lsb(const Bits& bits) {
    Bytes bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bytes[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
    return bytes;
}

std::size_t count_bit_errors(const Bits& a, const Bits& b) {
    const std::size_t n = std::min(a.size(), b.size());
    std::size_t errors = std::max(a.size(), b.size()) - n;
    for (std::size_t i = 0; i < n; ++i) errors += (a[i] != b[i]);
    return errors;
}

}  // namespace cwifi
