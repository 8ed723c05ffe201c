#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "covertwifi/harness/harness.hpp"

namespace cwifi::harness {
namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string fmt_snr(double snr) { return std::isinf(snr) ? std::string("inf") : fmt("%g", snr); }

}  // namespace

Interval wilson_interval(std::size_t errors, std::size_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(errors) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

SweepPoint aggregate(const ExperimentConfig& cfg, const std::vector<TrialReport>& reports) {
    SweepPoint p;
    p.model = cfg.channel.model;
    p.snr_db = cfg.channel.snr_db;
    p.mcs_rate = cfg.mcs_rate;
    if (cfg.covert) {
        p.covert_kind = covert::kind_name(*cfg.covert);
        p.covert_param = covert::param_string(*cfg.covert);
    }
    p.trials = reports.size();
    std::vector<double> covert_bers;
    double evm = 0.0;
    std::size_t evm_n = 0;
    for (const auto& r : reports) {
        p.frames_ok += r.frame_ok ? 1 : 0;
        p.raw_bits += r.raw_bits;
        p.raw_errors += r.raw_errors;
        p.coded_bits += r.coded_bits;
        p.coded_errors += r.coded_errors;
        p.covert_bits += r.covert_bits;
        p.covert_errors += r.covert_errors;
        if (r.covert_ber) covert_bers.push_back(*r.covert_ber);
        if (r.detected) {
            evm += r.evm_db;
            ++evm_n;
        }
    }
    const auto ratio = [](std::size_t e, std::size_t n) { return n ? static_cast<double>(e) / static_cast<double>(n) : 0.0; };
    p.raw_ber = ratio(p.raw_errors, p.raw_bits);
    p.coded_ber = ratio(p.coded_errors, p.coded_bits);
    p.covert_ber = ratio(p.covert_errors, p.covert_bits);
    p.fer = p.trials ? 1.0 - static_cast<double>(p.frames_ok) / static_cast<double>(p.trials) : 0.0;
    p.mean_evm_db = evm_n ? evm / static_cast<double>(evm_n) : 0.0;
    if (!covert_bers.empty()) {
        std::sort(covert_bers.begin(), covert_bers.end());
        const std::size_t m = covert_bers.size();
        p.median_covert_ber = m % 2 ? covert_bers[m / 2] : 0.5 * (covert_bers[m / 2 - 1] + covert_bers[m / 2]);
    }
    p.ci = cfg.covert ? wilson_interval(p.covert_errors, p.covert_bits) : wilson_interval(p.raw_errors, p.raw_bits);
    return p;
}

SweepPoint run_point(const ExperimentConfig& cfg) { return aggregate(cfg, run_trials(cfg)); }

std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& cfg) {
    std::vector<double> snrs = cfg.axes.snr_db;
    if (snrs.empty()) snrs.push_back(cfg.channel.snr_db);

    std::vector<std::optional<covert::CovertSpec>> specs;
    if (cfg.covert) {
        const auto& spec = *cfg.covert;
        if (const auto* s = std::get_if<covert::StfPsk>(&spec); s && !cfg.axes.psk_order.empty()) {
            for (int m : cfg.axes.psk_order) specs.emplace_back(covert::StfPsk{m});
        } else if (const auto* f = std::get_if<covert::CfoFsk>(&spec); f && !cfg.axes.delta_hz.empty()) {
            for (double d : cfg.axes.delta_hz) {
                auto v = *f;
                v.delta_hz = d;
                specs.emplace_back(v);
            }
        } else if (const auto* c = std::get_if<covert::CpReplace>(&spec); c && !cfg.axes.fraction.empty()) {
            for (auto fr : cfg.axes.fraction) {
                auto v = *c;
                v.fraction = fr;
                specs.emplace_back(v);
            }
        } else {
            specs.push_back(spec);
        }
    } else {
        specs.emplace_back(std::nullopt);
    }

    std::vector<ExperimentConfig> out;
    for (double snr : snrs) {
        for (const auto& spec : specs) {
            ExperimentConfig c = cfg;
            c.channel.snr_db = snr;
            c.covert = spec;
            c.axes = {};
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg) {
    std::vector<SweepPoint> out;
    for (const auto& c : expand_sweep(cfg)) out.push_back(run_point(c));
    return out;
}

void write_csv_header(std::ostream& os) {
    os << "model,snr_db,mcs,covert_kind,covert_param,trials,raw_ber,coded_ber,covert_ber,fer,ci_low,ci_high\n";
}

void write_csv_row(std::ostream& os, const SweepPoint& p) {
    const bool has_covert = p.covert_kind != "none";
    os << channel::to_string(p.model) << ',' << fmt_snr(p.snr_db) << ',' << p.mcs_rate << ',' << p.covert_kind << ','
       << p.covert_param << ',' << p.trials << ',' << fmt("%.6e", p.raw_ber) << ',' << fmt("%.6e", p.coded_ber) << ','
       << (has_covert ? fmt("%.6e", p.covert_ber) : std::string()) << ',' << fmt("%.6e", p.fer) << ','
       << fmt("%.6e", p.ci.low) << ',' << fmt("%.6e", p.ci.high) << '\n';
}

std::string to_csv(const std::vector<SweepPoint>& points) {
    std::ostringstream os;
    write_csv_header(os);
    for (const auto& p : points) write_csv_row(os, p);
    return os.str();
}

}  // namespace cwifi::harness
