#include "covertwifi/covert/covert.hpp"

#include <bit>
#include <sstream>

namespace cwifi::covert {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string kind_name(const CovertSpec& spec) {
    return std::visit(Overloaded{[](const StfPsk&) { return std::string("stf-psk"); },
                                 [](const CfoFsk&) { return std::string("cfo-fsk"); },
                                 [](const Camo&) { return std::string("camo"); },
                                 [](const CpReplace&) { return std::string("cp"); }},
                      spec);
}

std::string param_string(const CovertSpec& spec) {
    std::ostringstream os;
    std::visit(Overloaded{[&](const StfPsk& s) { os << "M=" << s.order; },
                          [&](const CfoFsk& s) { os << "delta_hz=" << s.delta_hz; },
                          [&](const Camo& s) { os << "mod=" << phy::to_string(s.modulation); },
                          [&](const CpReplace& s) {
                              os << to_string(s.fraction) << "/fft=" << s.covert_fft << "/cpcp=" << s.cpcp_len
                                 << "/mod=" << phy::to_string(s.modulation);
                          }},
               spec);
    return os.str();
}

CpFraction parse_fraction(const std::string& s) {
    if (s == "full") return CpFraction::Full;
    if (s == "half") return CpFraction::Half;
    throw InvalidArgument("unknown CP fraction '" + s + "' (expected full or half)");
}

std::string to_string(CpFraction f) { return f == CpFraction::Full ? "full" : "half"; }

void validate(const CovertSpec& spec) {
    std::visit(Overloaded{[](const StfPsk& s) {
                              if (s.order < 2 || s.order > 256 || !std::has_single_bit(static_cast<unsigned>(s.order)))
                                  throw InvalidArgument("PSK order must be a power of two in [2, 256]");
                          },
                          [](const CfoFsk& s) {
                              if (!(s.delta_hz > 0.0)) throw InvalidArgument("CFO FSK delta must be > 0");
                              if (s.fir_taps < 1 || s.discard < 0) throw InvalidArgument("bad CFO FSK filter settings");
                          },
                          [](const Camo&) {},
                          [](const CpReplace& s) {
                              if (s.covert_fft != 16 && s.covert_fft != 8 && s.covert_fft != 4 && s.covert_fft != 2)
                                  throw InvalidArgument("covert FFT size must be 16, 8, 4 or 2");
                              if (s.cpcp_len < 0 || s.cpcp_len >= s.covert_fft)
                                  throw InvalidArgument("CPCP length must be in [0, covert_fft)");
                              const int minis = minis_per_cp(s);
                              if (minis < 1) throw InvalidArgument("covert FFT larger than the replaced span");
                              if (minis * (s.covert_fft + s.cpcp_len) > kCpLength)
                                  throw InvalidArgument("covert mini-symbols plus CPCP exceed the cyclic prefix");
                          }},
               spec);
}

std::size_t capacity_bits(const CovertSpec& spec, std::size_t n) {
    return std::visit(
        Overloaded{[](const StfPsk& s) { return static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(s.order))); },
                   [n](const CfoFsk&) { return n; },
                   [n](const Camo& s) { return n * phy::kCamouflageSubcarriers.size() * phy::bits_per_symbol(s.modulation); },
                   [n](const CpReplace& s) {
                       return n * minis_per_cp(s) * cp_usable_bins(s.covert_fft).size() *
                              phy::bits_per_symbol(s.modulation);
                   }},
        spec);
}

std::size_t extracted_bits(const CovertSpec& spec, std::size_t n) {
    if (const auto* f = std::get_if<CfoFsk>(&spec)) {
        const auto drop = 2 * static_cast<std::size_t>(f->discard);
        return n > drop ? n - drop : 0;
    }
    return capacity_bits(spec, n);
}

Bits expected_bits(const CovertSpec& spec, const Bits& payload) {
    if (const auto* f = std::get_if<CfoFsk>(&spec)) {
        const auto d = static_cast<std::size_t>(f->discard);
        if (payload.size() <= 2 * d) return {};
        return Bits(payload.begin() + static_cast<std::ptrdiff_t>(d), payload.end() - static_cast<std::ptrdiff_t>(d));
    }
    return payload;
}

phy::TxHooks make_hooks(const CovertSpec& spec, const Bits& payload) {
    phy::TxHooks hooks;
    std::visit(Overloaded{[&](const StfPsk& s) {
                              hooks.on_preamble = [payload, s](std::vector<Complex>& pre) {
                                  stf_psk_embed(pre, payload, s.order);
                              };
                          },
                          [&](const CfoFsk& s) {
                              hooks.on_frame = [payload, s](std::vector<Complex>& frame, std::size_t n_sym) {
                                  if (n_sym < kMinFskSymbols)
                                      throw InvalidArgument("CFO FSK needs a frame with at least 60 data symbols");
                                  if (payload.size() != n_sym) throw InvalidArgument("CFO FSK: one bit per data symbol");
                                  cfo_fsk_embed(frame, s.whiten ? fsk_whiten(payload) : payload, s.delta_hz,
                                                s.positive_is_one);
                              };
                          },
                          [&](const Camo& s) {
                              hooks.on_data_grid = [payload, s](phy::OfdmGrid& grid, bool& use_ht) {
                                  camo_embed(grid, payload, s.modulation);
                                  use_ht = true;
                              };
                          },
                          [&](const CpReplace& s) {
                              hooks.on_frame = [payload, s](std::vector<Complex>& frame, std::size_t n_sym) {
                                  cp_replace_embed(frame, n_sym, payload, s);
                              };
                          }},
               spec);
    return hooks;
}

phy::TxFrame transmit_covert(const phy::Frame& frame, const phy::TxConfig& cfg, const CovertSpec& spec,
                             const Bits& payload) {
    validate(spec);
    const auto n_sym = phy::n_data_symbols(frame.mcs, frame.psdu.size());
    const auto need = capacity_bits(spec, n_sym);
    if (payload.size() != need)
        throw InvalidArgument(kind_name(spec) + " payload must be " + std::to_string(need) + " bits, got " +
                              std::to_string(payload.size()));
    return phy::build_tx(frame, cfg, make_hooks(spec, payload));
}

CovertResult extract(const CovertSpec& spec, const phy::RxDiagnostics& diag, const Bits* truth) {
    CovertResult r;
    std::visit(Overloaded{[&](const StfPsk& s) {
                              r.bits = stf_psk_extract(diag.aligned, diag.channel_estimate, diag.sig_phase, s.order, &r.confidence);
                          },
                          [&](const CfoFsk& s) {
                              r.bits = cfo_fsk_extract(diag.per_symbol_cfo_hz, s, &r.confidence);
                              if (s.whiten) r.bits = fsk_whiten(r.bits, static_cast<std::size_t>(s.discard));
                          },
                          [&](const Camo& s) { r.bits = camo_extract(diag, s.modulation, &r.confidence); },
                          [&](const CpReplace& s) { r.bits = cp_replace_extract(diag, s, &r.confidence); }},
               spec);
    if (truth) {
        const Bits want = expected_bits(spec, *truth);
        r.covert_ber = want.empty() ? 0.0
                                    : static_cast<double>(count_bit_errors(r.bits, want)) / static_cast<double>(want.size());
    }
    return r;
}

}  // namespace cwifi::covert
