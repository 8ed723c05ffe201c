#include "covertwifi/phy/transmitter.hpp"

#include <algorithm>

#include "covertwifi/phy/coding.hpp"
#include "covertwifi/phy/qam.hpp"

namespace cwifi::phy {

Frame make_frame(const Bytes& body, const Mcs& mcs) {
    Frame f{body, mcs};
    const auto fcs = compute_fcs(body);
    f.psdu.insert(f.psdu.end(), fcs.begin(), fcs.end());
    validate_frame(f);
    return f;
}

void validate_frame(const Frame& frame) {
    if (frame.psdu.size() < kMinPsduBytes || frame.psdu.size() > kMaxPsduBytes)
        throw InvalidArgument("PSDU length " + std::to_string(frame.psdu.size()) + " outside [14, 2338]");
}

Bits signal_field_bits(const SigField& sig) {
    if (sig.length > kMaxSigLength) throw InvalidArgument("SIG length exceeds 4095");
    Bits bits(24, 0);
    for (int i = 0; i < 4; ++i) bits[i] = (sig.mcs.sig_rate_bits >> (3 - i)) & 1u;
    bits[4] = sig.ht_marked ? 1 : 0;
    for (int i = 0; i < 12; ++i) bits[5 + i] = (sig.length >> i) & 1u;
    uint8_t parity = 0;
    for (int i = 0; i < 17; ++i) parity ^= bits[i];
    bits[17] = parity;
    return bits;
}

SigField parse_signal_field(const Bits& bits) {
    if (bits.size() < 24) throw SigError("SIG field too short");
    uint8_t parity = 0;
    for (int i = 0; i < 18; ++i) parity ^= bits[i];
    if (parity != 0) throw SigError("SIG parity failure");
    unsigned rate = 0;
    for (int i = 0; i < 4; ++i) rate = (rate << 1) | bits[i];
    const auto mcs = mcs_from_sig_bits(rate);
    if (!mcs) throw SigError("SIG carries an invalid rate");
    std::size_t length = 0;
    for (int i = 0; i < 12; ++i) length |= static_cast<std::size_t>(bits[5 + i]) << i;
    if (length == 0) throw SigError("SIG length is zero");
    return SigField{*mcs, length, bits[4] != 0};
}

namespace {

SymbolBins map_symbol(const std::vector<Complex>& data48, int polarity_index) {
    SymbolBins sym;
    const auto& idx = data_subcarriers();
    for (std::size_t i = 0; i < idx.size(); ++i) sym.at(idx[i]) = data48[i];
    const double p = pilot_polarity(polarity_index);
    for (std::size_t i = 0; i < kPilotSubcarriers.size(); ++i) sym.at(kPilotSubcarriers[i]) = p * kPilotValues[i];
    return sym;
}

}  // namespace

SymbolBins build_signal_field(const SigField& sig) {
    const Bits coded = fec_encode(signal_field_bits(sig), CodingRate{1, 2});
    const Bits inter = interleave(coded, 48, 1);
    return map_symbol(qam_map(inter, Modulation::Bpsk), 0);
}

std::size_t n_data_symbols(const Mcs& mcs, std::size_t psdu_bytes) {
    const std::size_t bits = 16 + 8 * psdu_bytes + 6;
    return (bits + mcs.n_dbps - 1) / mcs.n_dbps;
}

Bits data_field_bits(const Frame& frame, unsigned scrambler_seed) {
    const std::size_t n_sym = n_data_symbols(frame.mcs, frame.psdu.size());
    Bits bits(16, 0);
    const Bits payload = bytes_to_bits_lsb(frame.psdu);
    bits.insert(bits.end(), payload.begin(), payload.end());
    const std::size_t tail_pos = bits.size();
    bits.resize(n_sym * frame.mcs.n_dbps, 0);
    Bits scrambled = scramble(bits, scrambler_seed);
    std::fill(scrambled.begin() + tail_pos, scrambled.begin() + tail_pos + 6, 0);
    return scrambled;
}

TxFrame build_tx(const Frame& frame, const TxConfig& cfg, const TxHooks& hooks) {
    validate_frame(frame);
    const Mcs& mcs = frame.mcs;
    TxFrame tx;
    tx.n_data_symbols = n_data_symbols(mcs, frame.psdu.size());
    tx.coded_bits = fec_encode(data_field_bits(frame, cfg.scrambler_seed), mcs.coding_rate);

    tx.data_grid.symbols.reserve(tx.n_data_symbols);
    for (std::size_t n = 0; n < tx.n_data_symbols; ++n) {
        const Bits block(tx.coded_bits.begin() + n * mcs.n_cbps, tx.coded_bits.begin() + (n + 1) * mcs.n_cbps);
        const auto symbols = qam_map(interleave(block, mcs.n_cbps, mcs.n_bpsc), mcs.modulation);
        tx.data_grid.symbols.push_back(map_symbol(symbols, static_cast<int>(n + 1)));
    }

    bool use_ht = false;
    if (hooks.on_data_grid) hooks.on_data_grid(tx.data_grid, use_ht);
    tx.ht_ltf = use_ht;

    IqBuffer preamble = build_preamble(use_ht);
    if (hooks.on_preamble) hooks.on_preamble(preamble.samples);

    const SigField sig{mcs, frame.psdu.size(), cfg.ht_marked};
    const auto sig_samples = modulate_symbol(build_signal_field(sig));
    const IqBuffer data = modulate(tx.data_grid);

    auto& out = tx.iq.samples;
    out.reserve(preamble.size() + kSymbolLength + data.size());
    out = std::move(preamble.samples);
    out.insert(out.end(), sig_samples.begin(), sig_samples.end());
    out.insert(out.end(), data.samples.begin(), data.samples.end());

    if (hooks.on_frame) hooks.on_frame(out, tx.n_data_symbols);
    return tx;
}

IqBuffer transmit(const Frame& frame, const TxConfig& cfg) { return build_tx(frame, cfg).iq; }

}  // namespace cwifi::phy
