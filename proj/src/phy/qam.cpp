#include "covertwifi/phy/qam.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace cwifi::phy {
namespace {

// Per-axis Gray levels indexed by the axis bits (first bit most significant).
int axis_level(unsigned bits, int n) {
    switch (n) {
        case 1: return bits ? 1 : -1;
        case 2: {
            static constexpr std::array<int, 4> lv = {-3, -1, 3, 1};   // 00 01 10 11
            return lv[bits];
        }
        case 3: {
            static constexpr std::array<int, 8> lv = {-7, -5, -1, -3, 7, 5, 1, 3};
            return lv[bits];
        }
    }
    return 0;
}

std::vector<Complex> build(Modulation m) {
    const int nb = bits_per_symbol(m);
    std::vector<Complex> pts(1u << nb);
    if (m == Modulation::Bpsk) {
        pts[0] = {-1.0, 0.0};
        pts[1] = {1.0, 0.0};
        return pts;
    }
    const int half = nb / 2;
    const double norm = m == Modulation::Qpsk ? std::sqrt(2.0) : m == Modulation::Qam16 ? std::sqrt(10.0) : std::sqrt(42.0);
    for (unsigned idx = 0; idx < pts.size(); ++idx) {
        const unsigned i_bits = idx >> half;
        const unsigned q_bits = idx & ((1u << half) - 1);
        pts[idx] = Complex(axis_level(i_bits, half), axis_level(q_bits, half)) / norm;
    }
    return pts;
}

}  // namespace

const std::vector<Complex>& constellation(Modulation m) {
    static const std::array<std::vector<Complex>, 4> tables = {build(Modulation::Bpsk), build(Modulation::Qpsk),
                                                               build(Modulation::Qam16), build(Modulation::Qam64)};
    return tables[static_cast<int>(m)];
}

std::vector<Complex> qam_map(const Bits& bits, Modulation m) {
    const int nb = bits_per_symbol(m);
    if (bits.size() % nb != 0) throw InvalidArgument("qam_map: bit count not divisible by bits per symbol");
    const auto& pts = constellation(m);
    std::vector<Complex> out(bits.size() / nb);
    for (std::size_t s = 0; s < out.size(); ++s) {
        unsigned idx = 0;
        for (int b = 0; b < nb; ++b) idx = (idx << 1) | (bits[s * nb + b] & 1u);
        out[s] = pts[idx];
    }
    return out;
}

Complex qam_slice(Complex z, Modulation m) {
    const auto& pts = constellation(m);
    Complex best = pts[0];
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
        const double d = std::norm(z - p);
        if (d < best_d) {
            best_d = d;
            best = p;
        }
    }
    return best;
}

Bits qam_demap(std::span<const Complex> symbols, Modulation m) {
    const int nb = bits_per_symbol(m);
    const auto& pts = constellation(m);
    Bits out;
    out.reserve(symbols.size() * nb);
    for (const auto& z : symbols) {
        unsigned best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (unsigned i = 0; i < pts.size(); ++i) {
            const double d = std::norm(z - pts[i]);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        for (int b = nb - 1; b >= 0; --b) out.push_back(static_cast<uint8_t>((best >> b) & 1u));
    }
    return out;
}

void qam_demap_soft(std::span<const Complex> symbols, std::span<const double> weights, Modulation m,
                    std::vector<double>& out) {
    const int nb = bits_per_symbol(m);
    const auto& pts = constellation(m);
    constexpr double kInf = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        std::array<double, 6> d0, d1;
        d0.fill(kInf);
        d1.fill(kInf);
        for (unsigned i = 0; i < pts.size(); ++i) {
            const double d = std::norm(symbols[s] - pts[i]);
            for (int b = 0; b < nb; ++b) {
                const bool one = (i >> (nb - 1 - b)) & 1u;
                auto& slot = one ? d1[b] : d0[b];
                if (d < slot) slot = d;
            }
        }
        const double w = weights.empty() ? 1.0 : weights[s];
        for (int b = 0; b < nb; ++b) out.push_back((d0[b] - d1[b]) * w);
    }
}

}  // namespace cwifi::phy
