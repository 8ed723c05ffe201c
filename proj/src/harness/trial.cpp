#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "covertwifi/harness/harness.hpp"
#include "covertwifi/phy/mcs.hpp"
#include "covertwifi/phy/ofdm.hpp"

namespace cwifi::harness {
namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Bits random_bits(std::mt19937_64& rng, std::size_t n) {
    Bits out(n);
    for (auto& b : out) b = static_cast<uint8_t>(rng() & 1u);
    return out;
}

std::size_t clamp_errors(std::size_t errors, std::size_t n) { return std::min(errors, n); }

}  // namespace

uint64_t derive_seed(uint64_t seed, uint64_t trial, uint64_t stream) {
    return splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ (stream * 0xD1B54A32D192ED03ULL));
}

void validate(const ExperimentConfig& cfg) {
    const auto& mcs = phy::mcs_for_rate(cfg.mcs_rate);
    if (cfg.frame_len_bytes < phy::kMinPsduBytes || cfg.frame_len_bytes > phy::kMaxPsduBytes)
        throw InvalidArgument("frame length must be in [14, 2338] bytes");
    if (cfg.n_trials < 1) throw InvalidArgument("n_trials must be >= 1");
    if (cfg.scrambler_seed == 0 || cfg.scrambler_seed > 0x7F) throw InvalidArgument("scrambler seed must be in [1, 127]");
    if (cfg.channel.max_doppler_hz < 0.0) throw InvalidArgument("max_doppler_hz must be >= 0");
    if (std::isnan(cfg.channel.snr_db) || cfg.channel.snr_db == -std::numeric_limits<double>::infinity())
        throw InvalidArgument("snr_db must be finite or +inf");
    if (cfg.covert) {
        covert::validate(*cfg.covert);
        if (std::holds_alternative<covert::CfoFsk>(*cfg.covert) &&
            phy::n_data_symbols(mcs, cfg.frame_len_bytes) < covert::kMinFskSymbols)
            throw InvalidArgument("CFO FSK needs frames with at least 60 data symbols");
    }
}

channel::ChannelConfig trial_channel(const ExperimentConfig& cfg, std::size_t trial) {
    channel::ChannelConfig ch = cfg.channel;
    ch.seed = derive_seed(cfg.seed, trial, kChannelStream);
    if (!cfg.snr_per_frame && !ch.reference_power) ch.reference_power = phy::nominal_symbol_power();
    return ch;
}

TrialSignal make_trial_signal(const ExperimentConfig& cfg, std::size_t trial) {
    const auto& mcs = phy::mcs_for_rate(cfg.mcs_rate);
    TrialSignal s;
    std::mt19937_64 rng(derive_seed(cfg.seed, trial, kPayloadStream));
    Bytes body(cfg.frame_len_bytes - 4);
    for (auto& b : body) b = static_cast<uint8_t>(rng() & 0xFFu);
    s.frame = phy::make_frame(body, mcs);

    const phy::TxConfig tx_cfg{cfg.scrambler_seed, false};
    if (cfg.covert) {
        std::mt19937_64 crng(derive_seed(cfg.seed, trial, kCovertStream));
        const auto n_sym = phy::n_data_symbols(mcs, s.frame.psdu.size());
        s.covert_payload = random_bits(crng, covert::capacity_bits(*cfg.covert, n_sym));
        s.tx = covert::transmit_covert(s.frame, tx_cfg, *cfg.covert, s.covert_payload);
    } else {
        s.tx = phy::build_tx(s.frame, tx_cfg);
    }

    s.frame_start = cfg.pad_before;
    s.clean.samples.assign(cfg.pad_before, Complex{});
    s.clean.samples.insert(s.clean.samples.end(), s.tx.iq.samples.begin(), s.tx.iq.samples.end());
    s.clean.samples.resize(s.clean.size() + cfg.pad_after, Complex{});

    s.received = channel::apply_channel(s.clean, trial_channel(cfg, trial), s.frame_start, s.frame_start + s.tx.iq.size());
    return s;
}

TrialReport evaluate_trial(const ExperimentConfig& cfg, const TrialSignal& sig,
                           std::optional<phy::RxDiagnostics>* diag_out) {
    TrialReport r;
    const Bits sent_psdu = bytes_to_bits_lsb(sig.frame.psdu);
    const Bits sent_covert = cfg.covert ? covert::expected_bits(*cfg.covert, sig.covert_payload) : Bits{};
    r.raw_bits = sig.tx.coded_bits.size();
    r.coded_bits = sent_psdu.size();
    r.covert_bits = sent_covert.size();
    r.raw_errors = r.raw_bits;
    r.coded_errors = r.coded_bits;
    r.covert_errors = r.covert_bits;

    phy::RxConfig rx = cfg.rx;
    if (cfg.genie_timing) rx.known_frame_start = sig.frame_start;
    try {
        auto res = phy::receive(sig.received, rx);
        r.detected = true;
        const auto& d = res.diag;
        r.frame_ok = d.fcs_ok;
        r.evm_db = d.evm_db;
        r.coarse_cfo_hz = d.coarse_cfo_hz;
        r.rx_power_db = d.rx_power_db;
        r.raw_errors = clamp_errors(count_bit_errors(d.raw_bits, sig.tx.coded_bits), r.raw_bits);
        r.coded_errors = clamp_errors(count_bit_errors(bytes_to_bits_lsb(res.frame.psdu), sent_psdu), r.coded_bits);
        if (cfg.covert) {
            try {
                const auto c = covert::extract(*cfg.covert, d);
                r.covert_errors = clamp_errors(count_bit_errors(c.bits, sent_covert), r.covert_bits);
            } catch (const Error&) {
                // A misread SIG can leave too few symbols; the covert bits count as lost.
            }
        }
        if (diag_out) *diag_out = std::move(res.diag);
    } catch (const Error&) {
        r.detected = false;
    }
    const auto ratio = [](std::size_t e, std::size_t n) { return n ? static_cast<double>(e) / static_cast<double>(n) : 0.0; };
    r.raw_ber = ratio(r.raw_errors, r.raw_bits);
    r.coded_ber = ratio(r.coded_errors, r.coded_bits);
    if (cfg.covert) r.covert_ber = ratio(r.covert_errors, r.covert_bits);
    return r;
}

TrialReport run_trial(const ExperimentConfig& cfg, std::size_t trial) {
    return evaluate_trial(cfg, make_trial_signal(cfg, trial));
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<TrialReport> run_trials(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<TrialReport> out(cfg.n_trials);
    parallel_for(cfg.n_trials, cfg.threads, [&](std::size_t i) { out[i] = run_trial(cfg, i); });
    return out;
}

}  // namespace cwifi::harness
