// covertwifi: simulate, sweep, detect, rates, iqdump.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

#include "covertwifi/harness/harness.hpp"

using namespace cwifi;

namespace {

struct Flags {
    std::string config;
    int mcs = 0;
    std::size_t len = 0;
    std::string model;
    std::vector<std::string> snr;
    double doppler = 0.0;
    double cfo = 0.0;
    std::string covert;
    std::vector<int> order;
    std::vector<double> delta;
    std::vector<std::string> fraction;
    int covert_fft = 0;
    int cpcp = 0;
    std::string modulation;
    std::size_t trials = 0;
    uint64_t seed = 0;
    unsigned threads = 0;
    bool genie = false;
    bool ideal = false;
    std::string out;
    std::string payload;
};

double parse_snr(const std::string& s) {
    if (s == "inf" || s == "+inf") return channel::kInfiniteSnr;
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw InvalidArgument("bad SNR value '" + s + "'");
    }
}

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "JSON experiment config; flags override it")->check(CLI::ExistingFile);
    app->add_option("--mcs", f.mcs, "Rate in Mbit/s (6, 9, 12, 18, 24, 36, 48, 54)");
    app->add_option("--len", f.len, "PSDU length in bytes, FCS included");
    app->add_option("--model", f.model, "Channel model A, B, D or E");
    app->add_option("--snr", f.snr, "SNR in dB, or inf; several values for sweep");
    app->add_option("--doppler", f.doppler, "Maximum Doppler in Hz");
    app->add_option("--cfo", f.cfo, "Static CFO in Hz");
    app->add_option("--covert", f.covert, "stf-psk, cfo-fsk, camo or cp")
        ->check(CLI::IsMember({"stf-psk", "cfo-fsk", "camo", "cp", "none"}));
    app->add_option("--order", f.order, "PSK order M");
    app->add_option("--delta", f.delta, "CFO FSK shift in Hz");
    app->add_option("--fraction", f.fraction, "CP replacement: full or half");
    app->add_option("--covert-fft", f.covert_fft, "CP replacement FFT size (16, 8, 4, 2)");
    app->add_option("--cpcp", f.cpcp, "CP replacement CPCP length in samples");
    app->add_option("--modulation", f.modulation, "Covert modulation for camo and cp");
    app->add_option("--trials", f.trials, "Monte Carlo trials per point");
    app->add_option("--seed", f.seed, "Experiment seed");
    app->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
    app->add_flag("--genie-timing", f.genie, "Give the receiver the true frame start");
    app->add_flag("--ideal-channel", f.ideal, "Unit channel estimate, no tracking (implies genie timing)");
    app->add_option("--out", f.out, "Output file");
}

harness::ExperimentConfig build_config(const CLI::App* app, const Flags& f, bool allow_axes) {
    harness::ExperimentConfig cfg;
    if (!f.config.empty()) cfg = harness::load_config(f.config);
    const auto set = [app](const char* name) { return app->count(name) > 0; };
    if (set("--mcs")) cfg.mcs_rate = f.mcs;
    if (set("--len")) cfg.frame_len_bytes = f.len;
    if (set("--model")) cfg.channel.model = channel::parse_model(f.model);
    if (set("--doppler")) cfg.channel.max_doppler_hz = f.doppler;
    if (set("--cfo")) cfg.channel.static_cfo_hz = f.cfo;
    if (set("--trials")) cfg.n_trials = f.trials;
    if (set("--seed")) cfg.seed = f.seed;
    if (set("--threads")) cfg.threads = f.threads;
    if (f.genie) cfg.genie_timing = true;
    if (f.ideal) {
        cfg.rx.ideal_channel = true;
        cfg.genie_timing = true;
    }
    if (set("--snr")) {
        std::vector<double> v;
        for (const auto& s : f.snr) v.push_back(parse_snr(s));
        if (v.size() > 1 && !allow_axes) throw InvalidArgument("--snr takes one value here; use sweep for several");
        cfg.channel.snr_db = v.front();
        if (allow_axes) cfg.axes.snr_db = v;
    }

    if (set("--covert")) {
        if (f.covert == "none") cfg.covert.reset();
        else if (f.covert == "stf-psk") cfg.covert = covert::StfPsk{};
        else if (f.covert == "cfo-fsk") cfg.covert = covert::CfoFsk{};
        else if (f.covert == "camo") cfg.covert = covert::Camo{};
        else cfg.covert = covert::CpReplace{};
    }
    const auto many = [&](std::size_t n, const char* name) {
        if (n > 1 && !allow_axes) throw InvalidArgument(std::string(name) + " takes one value here; use sweep for several");
        return n > 1;
    };
    if (cfg.covert) {
        auto& spec = *cfg.covert;
        if (auto* s = std::get_if<covert::StfPsk>(&spec); s && set("--order")) {
            s->order = f.order.front();
            if (many(f.order.size(), "--order")) cfg.axes.psk_order = f.order;
        }
        if (auto* s = std::get_if<covert::CfoFsk>(&spec); s && set("--delta")) {
            s->delta_hz = f.delta.front();
            if (many(f.delta.size(), "--delta")) cfg.axes.delta_hz = f.delta;
        }
        if (auto* s = std::get_if<covert::Camo>(&spec); s && set("--modulation"))
            s->modulation = phy::parse_modulation(f.modulation);
        if (auto* s = std::get_if<covert::CpReplace>(&spec)) {
            if (set("--fraction")) {
                s->fraction = covert::parse_fraction(f.fraction.front());
                if (many(f.fraction.size(), "--fraction"))
                    for (const auto& v : f.fraction) cfg.axes.fraction.push_back(covert::parse_fraction(v));
            }
            if (set("--covert-fft")) s->covert_fft = f.covert_fft;
            if (set("--cpcp")) s->cpcp_len = f.cpcp;
            if (set("--modulation")) s->modulation = phy::parse_modulation(f.modulation);
        }
    }
    harness::validate(cfg);
    return cfg;
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(out);
    if (!os) throw Error("cannot write " + out);
    os << text;
}

void print_summary(const std::vector<harness::SweepPoint>& points) {
    for (const auto& p : points) {
        std::cerr << channel::to_string(p.model) << " snr=" << p.snr_db << " mcs=" << p.mcs_rate << ' ' << p.covert_kind
                  << (p.covert_param.empty() ? "" : " " + p.covert_param) << " trials=" << p.trials
                  << " raw_ber=" << p.raw_ber << " coded_ber=" << p.coded_ber;
        if (p.covert_kind != "none") std::cerr << " covert_ber=" << p.covert_ber << " median=" << p.median_covert_ber;
        std::cerr << " fer=" << p.fer << '\n';
    }
}

int cmd_detect(const std::string& in, const std::string& out) {
    const IqBuffer iq = harness::read_iq(in);
    std::ostringstream csv;
    csv << "frame,frame_start,stf_delta_phi_rad,cfo_pattern_score,extra_subcarrier_power_db,cp_similarity_mean,"
           "oob_power_margin_db,evm_db,stf_flag,cfo_flag,subcarrier_flag,cp_flag\n";
    std::size_t offset = 0;
    int frames = 0;
    while (offset < iq.size()) {
        IqBuffer rest;
        rest.samples.assign(iq.samples.begin() + static_cast<std::ptrdiff_t>(offset), iq.samples.end());
        detect::Layer1Report r;
        try {
            r = detect::analyze(rest);
        } catch (const NoFrameFound&) {
            break;
        }
        r.frame_start += offset;
        std::cout << "frame=" << frames << ' ' << harness::format_report(r) << '\n';
        double cp_mean = 0.0;
        for (double v : r.cp_similarity) cp_mean += v;
        if (!r.cp_similarity.empty()) cp_mean /= static_cast<double>(r.cp_similarity.size());
        csv << frames << ',' << r.frame_start << ',' << r.stf_delta_phi_rad << ','
            << (r.cfo_pattern_score ? std::to_string(*r.cfo_pattern_score) : std::string()) << ','
            << r.subcarriers.extra_power_db << ',' << cp_mean << ',' << r.oob_power_margin_db << ',' << r.evm_db << ','
            << r.stf_flag << ',' << r.cfo_flag << ',' << r.subcarriers.covert << ',' << r.cp_flag << '\n';
        ++frames;
        offset = r.frame_start + kDataOffset + r.cp_similarity.size() * kSymbolLength;
    }
    if (frames == 0) {
        std::cerr << "no frame found in " << in << '\n';
        return 2;
    }
    if (!out.empty()) emit(csv.str(), out);
    return 0;
}

int cmd_iqdump(const harness::ExperimentConfig& cfg, const std::string& payload_path, const std::string& out) {
    if (out.empty()) throw InvalidArgument("iqdump needs --out");
    auto c = cfg;
    c.n_trials = 1;
    auto sig = harness::make_trial_signal(c, 0);
    if (c.covert && !payload_path.empty()) {
        const auto n_sym = sig.tx.n_data_symbols;
        Bits bits = harness::read_payload_bits(payload_path);
        const auto need = covert::capacity_bits(*c.covert, n_sym);
        if (bits.size() < need)
            throw InvalidArgument("payload file holds " + std::to_string(bits.size()) + " bits, frame needs " +
                                  std::to_string(need));
        bits.resize(need);
        sig.covert_payload = bits;
        sig.tx = covert::transmit_covert(sig.frame, phy::TxConfig{c.scrambler_seed, false}, *c.covert, bits);
        sig.clean.samples.assign(c.pad_before, Complex{});
        sig.clean.samples.insert(sig.clean.samples.end(), sig.tx.iq.samples.begin(), sig.tx.iq.samples.end());
        sig.clean.samples.resize(sig.clean.size() + c.pad_after, Complex{});
        sig.received = channel::apply_channel(sig.clean, harness::trial_channel(c, 0), c.pad_before, c.pad_before + sig.tx.iq.size());
    }
    std::ostringstream desc;
    desc << "mcs=" << c.mcs_rate << " len=" << c.frame_len_bytes << " model=" << channel::to_string(c.channel.model)
         << " snr_db=" << c.channel.snr_db << " covert=" << (c.covert ? covert::kind_name(*c.covert) : "none");
    if (c.covert) desc << ' ' << covert::param_string(*c.covert);
    harness::write_iq(out, sig.received, desc.str());
    std::cerr << "wrote " << sig.received.size() << " samples to " << out << '\n';
    return 0;
}

int cmd_rates(const std::string& out) {
    std::ostringstream os;
    for (const auto& row : harness::reference_rates())
        os << row.label << ": " << harness::format_rate(row.bits_per_s) << '\n';
    emit(os.str(), out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"802.11a/g baseband modem with physical-layer covert channels"};
    app.require_subcommand(1);
    Flags f;
    auto* simulate = app.add_subcommand("simulate", "Run one configuration point");
    auto* sweep = app.add_subcommand("sweep", "Run a sweep and write CSV");
    auto* detect_cmd = app.add_subcommand("detect", "Run Layer-1 detectors over an IQ capture");
    auto* rates = app.add_subcommand("rates", "Print gross covert rates of the reference configurations");
    auto* iqdump = app.add_subcommand("iqdump", "Write one transmitted frame as an IQ capture");
    add_common(simulate, f);
    add_common(sweep, f);
    add_common(iqdump, f);
    iqdump->add_option("--payload", f.payload, "Covert payload file (bits, MSB first)")->check(CLI::ExistingFile);
    std::string in;
    detect_cmd->add_option("--in", in, "IQ capture (.iq float32 pairs)")->required()->check(CLI::ExistingFile);
    detect_cmd->add_option("--out", f.out, "Aggregate CSV output");
    rates->add_option("--out", f.out, "Output file");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*simulate) {
            const auto cfg = build_config(simulate, f, false);
            const auto point = harness::run_point(cfg);
            print_summary({point});
            emit(harness::to_csv({point}), f.out);
        } else if (*sweep) {
            const auto cfg = build_config(sweep, f, true);
            const auto points = harness::run_sweep(cfg);
            print_summary(points);
            emit(harness::to_csv(points), f.out);
        } else if (*detect_cmd) {
            return cmd_detect(in, f.out);
        } else if (*rates) {
            return cmd_rates(f.out);
        } else if (*iqdump) {
            return cmd_iqdump(build_config(iqdump, f, false), f.payload, f.out);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
