#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "covertwifi/harness/harness.hpp"

namespace cwifi::harness {
namespace {

using nlohmann::json;

double parse_snr(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return channel::kInfiniteSnr;
        throw InvalidArgument("snr_db must be a number or \"inf\"");
    }
    return j.get<double>();
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

covert::CovertSpec parse_covert(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "stf-psk") {
        covert::StfPsk s;
        read(j, "order", s.order);
        return s;
    }
    if (kind == "cfo-fsk") {
        covert::CfoFsk s;
        read(j, "delta_hz", s.delta_hz);
        read(j, "positive_is_one", s.positive_is_one);
        read(j, "whiten", s.whiten);
        read(j, "fir_taps", s.fir_taps);
        read(j, "discard", s.discard);
        return s;
    }
    if (kind == "camo") {
        covert::Camo s;
        if (j.contains("modulation")) s.modulation = phy::parse_modulation(j.at("modulation").get<std::string>());
        return s;
    }
    if (kind == "cp") {
        covert::CpReplace s;
        if (j.contains("fraction")) s.fraction = covert::parse_fraction(j.at("fraction").get<std::string>());
        read(j, "covert_fft", s.covert_fft);
        read(j, "cpcp_len", s.cpcp_len);
        if (j.contains("modulation")) s.modulation = phy::parse_modulation(j.at("modulation").get<std::string>());
        return s;
    }
    throw InvalidArgument("unknown covert kind '" + kind + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, ExperimentConfig cfg) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        read(j, "mcs", cfg.mcs_rate);
        read(j, "frame_len_bytes", cfg.frame_len_bytes);
        read(j, "n_trials", cfg.n_trials);
        read(j, "seed", cfg.seed);
        read(j, "scrambler_seed", cfg.scrambler_seed);
        read(j, "threads", cfg.threads);
        read(j, "genie_timing", cfg.genie_timing);
        read(j, "pad_before", cfg.pad_before);
        read(j, "pad_after", cfg.pad_after);
        if (j.contains("channel")) {
            const auto& c = j.at("channel");
            if (c.contains("model")) cfg.channel.model = channel::parse_model(c.at("model").get<std::string>());
            if (c.contains("snr_db")) cfg.channel.snr_db = parse_snr(c.at("snr_db"));
            read(c, "static_cfo_hz", cfg.channel.static_cfo_hz);
            read(c, "max_doppler_hz", cfg.channel.max_doppler_hz);
            read(c, "snr_per_frame", cfg.snr_per_frame);
        }
        if (j.contains("rx")) {
            const auto& r = j.at("rx");
            read(r, "detection_threshold", cfg.rx.detection_threshold);
            read(r, "plateau_length", cfg.rx.plateau_length);
            read(r, "first_path_fraction", cfg.rx.first_path_fraction);
            read(r, "ideal_channel", cfg.rx.ideal_channel);
            read(r, "track_phase", cfg.rx.track_phase);
        }
        if (j.contains("covert")) {
            const auto& c = j.at("covert");
            if (c.is_null()) cfg.covert.reset();
            else cfg.covert = parse_covert(c);
        }
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            if (s.contains("snr_db")) {
                cfg.axes.snr_db.clear();
                for (const auto& v : s.at("snr_db")) cfg.axes.snr_db.push_back(parse_snr(v));
            }
            read(s, "psk_order", cfg.axes.psk_order);
            read(s, "delta_hz", cfg.axes.delta_hz);
            if (s.contains("fraction")) {
                cfg.axes.fraction.clear();
                for (const auto& v : s.at("fraction")) cfg.axes.fraction.push_back(covert::parse_fraction(v.get<std::string>()));
            }
        }
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("bad config value: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace cwifi::harness
