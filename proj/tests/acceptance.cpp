// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and writes
// the CSV of every sweep to acceptance_out/ next to the binary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "covertwifi/detect/detect.hpp"
#include "covertwifi/harness/harness.hpp"

using namespace cwifi;
using namespace cwifi::harness;
using covert::CpFraction;
using covert::CpReplace;

namespace {

std::filesystem::path g_out_dir = "acceptance_out";

struct Check {
    std::string what;
    bool ok;
};

struct Verdict {
    std::vector<Check> checks;
    std::vector<std::string> notes;

    void check(const std::string& what, bool ok) { checks.push_back({what, ok}); }
    void note(const std::string& s) { notes.push_back(s); }
    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Two-sided p-value of a two-proportion z statistic.
double p_value(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

double two_prop_p(std::size_t ea, std::size_t na, std::size_t eb, std::size_t nb) {
    return p_value(detect::two_proportion_z(ea, na, eb, nb));
}

ExperimentConfig base(int mcs, std::size_t len, std::size_t trials, uint64_t seed) {
    ExperimentConfig c;
    c.mcs_rate = mcs;
    c.frame_len_bytes = len;
    c.n_trials = trials;
    c.seed = seed;
    return c;
}

ExperimentConfig with(ExperimentConfig c, channel::Model m, double snr_db,
                      std::optional<covert::CovertSpec> spec = std::nullopt) {
    c.channel.model = m;
    c.channel.snr_db = snr_db;
    c.covert = spec;
    return c;
}

void save_csv(const std::string& name, const std::vector<SweepPoint>& pts) {
    std::ofstream out(g_out_dir / name);
    out << to_csv(pts);
}

std::string describe(const SweepPoint& p) {
    std::ostringstream os;
    os << to_string(p.model) << " snr=" << p.snr_db << " " << p.covert_kind << " " << p.covert_param
       << " raw=" << fmt("%.3g", p.raw_ber) << " coded=" << fmt("%.3g", p.coded_ber);
    if (p.covert_kind != "none") os << " covert=" << fmt("%.3g", p.covert_ber) << " median=" << fmt("%.3g", p.median_covert_ber);
    os << " fer=" << fmt("%.3g", p.fer);
    return os.str();
}

phy::Frame random_frame(std::size_t psdu_len, int rate, uint64_t seed) {
    std::mt19937_64 rng(seed);
    Bytes b(psdu_len - 4);
    for (auto& x : b) x = static_cast<uint8_t>(rng());
    return phy::make_frame(b, phy::mcs_for_rate(rate));
}

// --- 1 ---------------------------------------------------------------------

Verdict loopback() {
    Verdict v;
    int ok = 0, total = 0;
    for (const auto& m : phy::all_mcs()) {
        for (std::size_t len : {std::size_t{14}, std::size_t{1500}, std::size_t{2338}}) {
            ++total;
            phy::Frame f = random_frame(len, m.rate_mbps, len * 100 + static_cast<std::size_t>(m.rate_mbps));
            phy::TxFrame tx = phy::build_tx(f);
            auto r = phy::receive(tx.iq);
            if (r.diag.fcs_ok && r.frame.psdu == f.psdu && count_bit_errors(r.diag.raw_bits, tx.coded_bits) == 0) ++ok;
        }
    }
    v.check(std::to_string(ok) + "/" + std::to_string(total) + " MCS x length round trips error free", ok == total);
    return v;
}

// --- 2 ---------------------------------------------------------------------

Verdict uncoded_baseline() {
    Verdict v;
    // Ideal-CSI receiver with known timing; the channel SNR is set so that the
    // per-subcarrier SNR equals the target.
    const double bin_gain_db = 10.0 * std::log10(64.0 / 52.0);
    std::vector<SweepPoint> pts;
    for (double snr : {2.0, 4.0, 6.0, 8.0}) {
        auto cfg = with(base(6, 1000, 0, 2), channel::Model::A, snr - bin_gain_db);
        cfg.genie_timing = true;
        cfg.rx.ideal_channel = true;
        std::size_t raw_bits = 0, raw_err = 0, coded_bits = 0, coded_err = 0, skipped = 0;
        std::vector<TrialReport> used;
        for (std::size_t t = 0; raw_bits < 1000000; ++t) {
            TrialSignal s = make_trial_signal(cfg, t);
            std::optional<phy::RxDiagnostics> d;
            TrialReport r = evaluate_trial(cfg, s, &d);
            // A misread SIG says nothing about the data symbols; leave those frames out.
            if (!r.detected || !d || d->sig.length != s.frame.psdu.size()) {
                ++skipped;
                continue;
            }
            raw_bits += r.raw_bits;
            raw_err += r.raw_errors;
            coded_bits += r.coded_bits;
            coded_err += r.coded_errors;
            used.push_back(r);
        }
        cfg.n_trials = used.size();
        SweepPoint p = aggregate(cfg, used);
        p.snr_db = snr;
        pts.push_back(p);
        const double lin = std::pow(10.0, snr / 10.0);
        const double theory = q_func(std::sqrt(2.0 * lin));
        const double ber = static_cast<double>(raw_err) / static_cast<double>(raw_bits);
        const double se = std::sqrt(theory * (1.0 - theory) / static_cast<double>(raw_bits));
        const double coded = static_cast<double>(coded_err) / static_cast<double>(coded_bits);
        v.check("SNR " + fmt("%g", snr) + " dB: raw " + fmt("%.4e", ber) + " vs Q " + fmt("%.4e", theory) + " (" +
                    fmt("%.2f", (ber - theory) / se) + " se, " + std::to_string(raw_bits) + " bits, " +
                    std::to_string(skipped) + " SIG failures skipped)",
                std::abs(ber - theory) <= 3.0 * se);
        v.check("SNR " + fmt("%g", snr) + " dB: coded " + fmt("%.3e", coded) + " <= raw", coded <= ber);
    }
    save_csv("c2_uncoded.csv", pts);
    return v;
}

// --- 3 ---------------------------------------------------------------------

std::vector<SweepPoint> stf_fading_sweep(unsigned threads) {
    std::vector<SweepPoint> pts;
    for (auto m : {channel::Model::B, channel::Model::D, channel::Model::E}) {
        for (int order : {16, 32, 64}) {
            auto cfg = with(base(24, 100, 1000, 3), m, 25.0, covert::StfPsk{order});
            cfg.threads = threads;
            pts.push_back(run_point(cfg));
        }
    }
    return pts;
}

Verdict stf_psk() {
    Verdict v;
    // 6 bits per 14-byte 36 Mbit/s frame; 16,667 frames give 10^5 bits.
    auto awgn = with(base(36, 14, 16667, 3), channel::Model::A, 25.0, covert::StfPsk{64});
    SweepPoint a = run_point(awgn);
    save_csv("c3_awgn.csv", {a});
    v.note(describe(a));
    v.check("AWGN 25 dB 64-PSK covert BER " + fmt("%.2e", a.covert_ber) + " < 1e-3 over " +
                std::to_string(a.covert_bits) + " bits",
            a.covert_bits >= 100000 && a.covert_ber < 1e-3);

    auto pts = stf_fading_sweep(0);
    save_csv("c3_fading.csv", pts);
    for (const auto& p : pts) {
        v.note(describe(p));
        v.check(to_string(p.model) + " " + p.covert_param + " median covert BER = 0", p.median_covert_ber == 0.0);
    }

    for (auto m : {channel::Model::A, channel::Model::D}) {
        auto plain = with(base(24, 100, 1000, 33), m, 25.0);
        auto emb = with(plain, m, 25.0, covert::StfPsk{64});
        SweepPoint p0 = run_point(plain), p1 = run_point(emb);
        const double p = two_prop_p(p1.coded_errors, p1.coded_bits, p0.coded_errors, p0.coded_bits);
        v.check(to_string(m) + " legit coded BER " + fmt("%.3e", p1.coded_ber) + " vs " + fmt("%.3e", p0.coded_ber) +
                    " (p=" + fmt("%.3g", p) + ") > 0.01",
                p > 0.01);
    }
    return v;
}

// --- 4 ---------------------------------------------------------------------

Verdict cfo_fsk() {
    Verdict v;
    auto plain = with(base(24, 1000, 1000, 4), channel::Model::A, 25.0);
    plain.channel.static_cfo_hz = 50e3;
    SweepPoint p0 = run_point(plain);
    std::vector<SweepPoint> pts{p0};
    std::map<double, SweepPoint> by_delta;
    for (double d : {1e3, 5e3, 10e3}) {
        auto cfg = with(plain, channel::Model::A, 25.0, covert::CfoFsk{d});
        by_delta[d] = run_point(cfg);
        pts.push_back(by_delta[d]);
    }
    const auto& b1 = by_delta[1e3];
    const auto& b5 = by_delta[5e3];
    const auto& b10 = by_delta[10e3];
    v.check("AWGN delta 5 kHz covert BER " + fmt("%.2e", b5.covert_ber) + " < 1e-3", b5.covert_ber < 1e-3);
    v.check("AWGN delta 10 kHz covert BER " + fmt("%.2e", b10.covert_ber) + " < 1e-3", b10.covert_ber < 1e-3);
    v.check("AWGN delta 1 kHz covert BER " + fmt("%.3f", b1.covert_ber) + " > 5%", b1.covert_ber > 0.05);
    v.check("AWGN delta 1 kHz at least 10x the 5 kHz point", b1.covert_ber >= 10.0 * b5.covert_ber && b1.covert_ber > b5.covert_ber);
    for (double d : {1e3, 5e3, 10e3}) {
        const auto& p = by_delta[d];
        const double pv = two_prop_p(p.coded_errors, p.coded_bits, p0.coded_errors, p0.coded_bits);
        v.check("legit coded BER at delta " + fmt("%g", d / 1e3) + " kHz " + fmt("%.2e", p.coded_ber) + " vs " +
                    fmt("%.2e", p0.coded_ber) + " (p=" + fmt("%.3g", pv) + ") > 0.01",
                pv > 0.01);
        v.note("raw BER delta " + fmt("%g", d / 1e3) + " kHz " + fmt("%.3e", p.raw_ber) + " vs " + fmt("%.3e", p0.raw_ber));
    }

    std::map<double, SweepPoint> e;
    for (double d : {10e3, 20e3}) {
        auto cfg = with(base(24, 1000, 1000, 44), channel::Model::E, 25.0, covert::CfoFsk{d});
        e[d] = run_point(cfg);
        pts.push_back(e[d]);
    }
    v.check("model E delta 10 kHz covert BER " + fmt("%.3f", e[10e3].covert_ber) + " >= 1%", e[10e3].covert_ber >= 0.01);
    v.check("model E delta 20 kHz covert BER " + fmt("%.4f", e[20e3].covert_ber) + " < 1%", e[20e3].covert_ber < 0.01);
    for (const auto& p : pts) v.note(describe(p));
    save_csv("c4_cfo_fsk.csv", pts);
    return v;
}

// --- 5 ---------------------------------------------------------------------

Verdict camouflage() {
    Verdict v;
    std::vector<SweepPoint> pts;
    for (double snr : {5.0, 10.0, 15.0, 20.0, 25.0}) {
        // Matched modulation: 64-QAM on both sets of subcarriers.
        auto plain = with(base(54, 1000, 1000, 5), channel::Model::A, snr);
        plain.genie_timing = true;
        auto emb = with(plain, channel::Model::A, snr, covert::Camo{phy::Modulation::Qam64});
        SweepPoint p0 = run_point(plain), p1 = run_point(emb);
        pts.push_back(p0);
        pts.push_back(p1);
        const double ratio = p1.raw_ber > 0 ? p1.covert_ber / p1.raw_ber : (p1.covert_ber == 0 ? 1.0 : INFINITY);
        v.check("SNR " + fmt("%g", snr) + ": covert " + fmt("%.3e", p1.covert_ber) + " vs legacy raw " +
                    fmt("%.3e", p1.raw_ber) + " ratio " + fmt("%.2f", ratio) + " within 2x",
                ratio <= 2.0 && ratio >= 0.5);
        const double p = two_prop_p(p1.coded_errors, p1.coded_bits, p0.coded_errors, p0.coded_bits);
        v.check("SNR " + fmt("%g", snr) + ": legacy coded BER " + fmt("%.3e", p1.coded_ber) + " vs " +
                    fmt("%.3e", p0.coded_ber) + " (p=" + fmt("%.3g", p) + ") > 0.01",
                p > 0.01);
    }
    save_csv("c5_camouflage.csv", pts);

    // Occupied subcarriers in the received data symbols.
    auto cfg = with(base(54, 1000, 1, 55), channel::Model::A, 25.0, covert::Camo{});
    auto count = [](const ExperimentConfig& c) {
        std::optional<phy::RxDiagnostics> d;
        evaluate_trial(c, make_trial_signal(c, 0), &d);
        std::vector<double> p(64, 0.0);
        for (const auto& s : d->rx_grid)
            for (int k = -32; k < 32; ++k) p[static_cast<std::size_t>(k + 32)] += std::norm(s.at(k));
        const double peak = *std::max_element(p.begin(), p.end());
        return std::count_if(p.begin(), p.end(), [&](double x) { return x > peak * 0.1; });
    };
    const auto camo_bins = count(cfg);
    cfg.covert.reset();
    const auto legacy_bins = count(cfg);
    v.check("camouflage frame occupies " + std::to_string(camo_bins) + " subcarriers (legacy " +
                std::to_string(legacy_bins) + ")",
            camo_bins == 56 && legacy_bins == 52);
    return v;
}

// --- 6 ---------------------------------------------------------------------

std::vector<SweepPoint> cpcp_points(unsigned threads) {
    std::vector<SweepPoint> pts;
    for (int cpcp : {0, 2}) {
        auto cfg = with(base(24, 200, 1000, 6), channel::Model::D, 25.0, CpReplace{CpFraction::Half, 8, cpcp});
        cfg.threads = threads;
        pts.push_back(run_point(cfg));
    }
    return pts;
}

Verdict cp_replacement() {
    Verdict v;
    std::vector<SweepPoint> pts;
    {
        auto full = with(base(24, 200, 1000, 6), channel::Model::A, 15.0, CpReplace{CpFraction::Full, 16, 0});
        auto half = with(full, channel::Model::A, 15.0, CpReplace{CpFraction::Half, 8, 0});
        SweepPoint pf = run_point(full), ph = run_point(half);
        pts.push_back(pf);
        pts.push_back(ph);
        const double p = two_prop_p(pf.covert_errors, pf.covert_bits, ph.covert_errors, ph.covert_bits);
        v.check("AWGN 15 dB full covert BER " + fmt("%.4f", pf.covert_ber) + " < half " + fmt("%.4f", ph.covert_ber) +
                    " (p=" + fmt("%.3g", p) + ")",
                pf.covert_ber < ph.covert_ber);
    }
    {
        auto c = cpcp_points(0);
        pts.insert(pts.end(), c.begin(), c.end());
        const double z = detect::two_proportion_z(c[0].covert_errors, c[0].covert_bits, c[1].covert_errors, c[1].covert_bits);
        v.check("model D CPCP=2 covert BER " + fmt("%.4f", c[1].covert_ber) + " < CPCP=0 " + fmt("%.4f", c[0].covert_ber) +
                    " (p=" + fmt("%.3g", p_value(z)) + ") < 0.01",
                z > 0 && p_value(z) < 0.01);
    }
    for (auto m : {channel::Model::B, channel::Model::D, channel::Model::E}) {
        auto plain = with(base(24, 200, 1000, 66), m, 25.0);
        auto full = with(plain, m, 25.0, CpReplace{CpFraction::Full, 16, 0});
        auto half = with(plain, m, 25.0, CpReplace{CpFraction::Half, 8, 2});
        SweepPoint p0 = run_point(plain), pf = run_point(full), ph = run_point(half);
        pts.push_back(p0);
        pts.push_back(pf);
        pts.push_back(ph);
        const double zf = detect::two_proportion_z(pf.raw_errors, pf.raw_bits, p0.raw_errors, p0.raw_bits);
        v.check(to_string(m) + " full replacement raises legit raw BER " + fmt("%.3e", pf.raw_ber) + " vs " +
                    fmt("%.3e", p0.raw_ber) + " (p=" + fmt("%.3g", p_value(zf)) + ")",
                zf > 0 && p_value(zf) < 0.01);
        const double zh = detect::two_proportion_z(ph.raw_errors, ph.raw_bits, p0.raw_errors, p0.raw_bits);
        const std::string line = to_string(m) + " half replacement legit raw BER " + fmt("%.3e", ph.raw_ber) + " vs " +
                                 fmt("%.3e", p0.raw_ber) + " (p=" + fmt("%.3g", p_value(zh)) + ")";
        if (m == channel::Model::E) v.note(line);
        else v.check(line + " not raised", !(zh > 0 && p_value(zh) < 0.01));
    }
    save_csv("c6_cp.csv", pts);

    // Spectral mask over the frame body.
    double min_full = INFINITY, sum_full = 0, sum_reg = 0;
    const int n = 100;
    for (int t = 0; t < n; ++t) {
        auto reg = with(base(24, 1000, 1, 600 + static_cast<uint64_t>(t)), channel::Model::A, 25.0);
        auto full = with(reg, channel::Model::A, 25.0, CpReplace{CpFraction::Full, 16, 0});
        for (int k = 0; k < 2; ++k) {
            const auto& cfg = k ? full : reg;
            TrialSignal s = make_trial_signal(cfg, 0);
            const std::span<const Complex> body(s.received.samples.data() + s.frame_start, s.tx.iq.size());
            const double m = detect::l1_spectral_mask(body);
            if (k) {
                sum_full += m;
                min_full = std::min(min_full, m);
            } else {
                sum_reg += m;
            }
        }
    }
    v.check("mask margin full CP " + fmt("%.2f", sum_full / n) + " dB < regular " + fmt("%.2f", sum_reg / n) +
                " dB, min " + fmt("%.2f", min_full) + " >= 0",
            sum_full < sum_reg && min_full >= 0.0);
    return v;
}

// --- 7 ---------------------------------------------------------------------

Verdict rates() {
    Verdict v;
    auto rows = reference_rates();
    std::map<std::string, std::string> got;
    for (const auto& r : rows) {
        got[r.label] = format_rate(r.bits_per_s);
        v.note(r.label + ": " + got[r.label]);
    }
    v.check("STF PSK 375 kbit/s", format_rate(rows[0].bits_per_s) == "375 kbit/s");
    v.check("CFO FSK 250 kbit/s", format_rate(rows[2].bits_per_s) == "250 kbit/s");
    v.check("camouflage 4.5 Mbit/s", format_rate(rows[3].bits_per_s) == "4.5 Mbit/s");
    v.check("half CP + CPCP 6.75 Mbit/s", format_rate(rows[4].bits_per_s) == "6.75 Mbit/s");
    return v;
}

// --- 8 ---------------------------------------------------------------------

std::vector<detect::Layer1Report> corpus(const ExperimentConfig& cfg) {
    std::vector<detect::Layer1Report> out(cfg.n_trials);
    parallel_for(cfg.n_trials, cfg.threads, [&](std::size_t i) {
        TrialSignal s = make_trial_signal(cfg, i);
        out[i] = detect::analyze(s.received, {}, cfg.rx);
    });
    return out;
}

double mean_of(const std::vector<double>& x) {
    return x.empty() ? 0.0 : std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Frame outcomes for a run: the first half without, the second half with the covert channel.
std::vector<detect::Layer2Record> toggled_run(const std::vector<TrialReport>& off, const std::vector<TrialReport>& on,
                                              std::size_t run, std::size_t half) {
    std::vector<detect::Layer2Record> recs;
    for (std::size_t i = 0; i < 2 * half; ++i) {
        const auto& r = i < half ? off[run * half + i] : on[run * half + i - half];
        recs.push_back({r.frame_ok, r.detected ? std::optional<double>(r.raw_ber) : std::nullopt, r.rx_power_db, i});
    }
    return recs;
}

Verdict detectors() {
    Verdict v;
    {
        auto clean = with(base(24, 100, 1000, 8), channel::Model::A, 25.0);
        auto full = with(clean, channel::Model::A, 25.0, CpReplace{CpFraction::Full, 16, 0});
        std::vector<double> pos, neg;
        for (const auto& r : corpus(clean)) neg.push_back(-mean_of(r.cp_similarity));
        for (const auto& r : corpus(full)) pos.push_back(-mean_of(r.cp_similarity));
        const double auc = detect::roc_auc(pos, neg);
        v.check("cp_similarity AUC full replacement " + fmt("%.4f", auc) + " > 0.99", auc > 0.99);
    }
    {
        auto legacy = with(base(24, 100, 1000, 81), channel::Model::A, 25.0);
        auto camo = with(legacy, channel::Model::A, 25.0, covert::Camo{});
        std::size_t flagged_camo = 0, flagged_legacy = 0;
        for (const auto& r : corpus(camo)) flagged_camo += r.subcarriers.covert;
        for (const auto& r : corpus(legacy)) flagged_legacy += r.subcarriers.covert;
        v.check("subcarrier check flags " + std::to_string(flagged_camo) + "/1000 camouflage, " +
                    std::to_string(flagged_legacy) + "/1000 legacy",
                flagged_camo == 1000 && flagged_legacy == 0);
    }
    {
        auto clean = with(base(36, 14, 1000, 82), channel::Model::A, 25.0);
        auto psk = with(clean, channel::Model::A, 25.0, covert::StfPsk{64});
        psk.seed = 83;
        std::vector<double> phases;
        for (const auto& r : corpus(clean)) phases.push_back(r.stf_delta_phi_rad);
        const double sigma = detect::calibrate_sigma(phases);
        std::size_t flagged = 0, false_alarms = 0;
        for (double p : phases) false_alarms += std::abs(p) > 3.0 * sigma;
        for (const auto& r : corpus(psk)) flagged += std::abs(r.stf_delta_phi_rad) > 3.0 * sigma;
        v.note("calibrated STF sigma " + fmt("%.4f", sigma) + " rad, clean false alarms " + std::to_string(false_alarms) + "/1000");
        v.check("l1_stf_phase flags " + std::to_string(flagged) + "/1000 64-PSK frames >= 98%", flagged >= 980);
    }
    {
        // 100 runs of 1000 frames, the covert channel switched on halfway; model D, 25 dB.
        const std::size_t runs = 100, half = 500;
        auto off_cfg = with(base(54, 14, runs * half, 84), channel::Model::D, 25.0);
        const auto off = run_trials(off_cfg);
        struct Case {
            std::string name;
            covert::CovertSpec spec;
            bool expect_alarm;
        };
        const std::vector<Case> cases = {{"STF PSK", covert::StfPsk{64}, false},
                                         {"camouflage", covert::Camo{}, false},
                                         {"full CP replacement", CpReplace{CpFraction::Full, 16, 0}, true}};
        uint64_t seed = 85;
        for (const auto& c : cases) {
            auto on_cfg = with(off_cfg, channel::Model::D, 25.0, c.spec);
            on_cfg.seed = seed++;
            const auto on = run_trials(on_cfg);
            std::size_t alarms = 0;
            for (std::size_t r = 0; r < runs; ++r) alarms += detect::l2_monitor(toggled_run(off, on, r, half), half) > 3.0;
            if (c.expect_alarm)
                v.check("l2_monitor alarms in " + std::to_string(alarms) + "/100 " + c.name + " runs (>= 90)", alarms >= 90);
            else
                v.check("l2_monitor quiet in " + std::to_string(runs - alarms) + "/100 " + c.name + " runs (>= 99)",
                        runs - alarms >= 99);
        }
    }
    return v;
}

// --- 9 ---------------------------------------------------------------------

Verdict determinism() {
    Verdict v;
    auto a = to_csv(stf_fading_sweep(1));
    auto b = to_csv(stf_fading_sweep(3));
    std::ifstream first(g_out_dir / "c3_fading.csv");
    std::stringstream saved;
    saved << first.rdbuf();
    v.check("STF fading sweep CSV identical across reruns and thread counts", a == b && a == saved.str());
    auto c = to_csv(cpcp_points(1));
    auto d = to_csv(cpcp_points(2));
    v.check("CPCP sweep CSV identical across reruns", c == d);
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_out_dir = argv[1];
    std::filesystem::create_directories(g_out_dir);
    std::ofstream summary(g_out_dir / "summary.txt");

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"loopback", loopback},        {"uncoded baseline", uncoded_baseline},
        {"STF PSK", stf_psk},          {"CFO FSK", cfo_fsk},
        {"camouflage", camouflage},    {"CP replacement", cp_replacement},
        {"rates", rates},              {"detectors", detectors},
        {"determinism", determinism},
    };
    int failed = 0;
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.check(std::string("exception: ") + e.what(), false);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream os;
        for (const auto& n : v.notes) os << "    . " << n << '\n';
        for (const auto& c : v.checks) os << "    " << (c.ok ? "ok   " : "FAIL ") << c.what << '\n';
        const std::string head = "criterion " + std::to_string(i + 1) + " " + criteria[i].first + ": " +
                                 (v.pass() ? "PASS" : "FAIL") + " (" + fmt("%.0f", secs) + " s)";
        std::cout << head << '\n' << os.str() << std::flush;
        summary << head << '\n' << os.str() << std::flush;
        lines.push_back(head);
        failed += !v.pass();
    }
    std::cout << "\n";
    for (const auto& l : lines) std::cout << l << '\n';
    std::cout << failed << " of " << criteria.size() << " criteria failed; details in " << (g_out_dir / "summary.txt").string()
              << '\n';
    return 0;
}
