#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "covertwifi/harness/harness.hpp"

using namespace cwifi;
using namespace cwifi::harness;

namespace {

ExperimentConfig small(std::optional<covert::CovertSpec> spec, int mcs = 24, std::size_t len = 200) {
    ExperimentConfig c;
    c.mcs_rate = mcs;
    c.frame_len_bytes = len;
    c.covert = spec;
    c.n_trials = 8;
    c.threads = 2;
    return c;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("covertwifi_test_" + name);
}

}  // namespace

TEST_CASE("seed derivation") {
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    std::set<uint64_t> seen;
    for (uint64_t t = 0; t < 100; ++t)
        for (uint64_t s = 0; s < 3; ++s) seen.insert(derive_seed(1, t, s));
    CHECK(seen.size() == 300);
    CHECK(derive_seed(1, 0, 0) != derive_seed(2, 0, 0));
}

TEST_CASE("identity channel gives zero errors for every scheme") {
    std::vector<std::pair<std::optional<covert::CovertSpec>, std::size_t>> cases = {
        {std::nullopt, 200},
        {covert::StfPsk{64}, 200},
        {covert::CfoFsk{10e3}, 1000},
        {covert::Camo{}, 200},
        {covert::CpReplace{covert::CpFraction::Full, 16, 0}, 200},
        {covert::CpReplace{covert::CpFraction::Half, 8, 2}, 200},
    };
    for (const auto& [spec, len] : cases) {
        auto cfg = small(spec, 24, len);
        for (std::size_t t = 0; t < 3; ++t) {
            TrialReport r = run_trial(cfg, t);
            CHECK(r.frame_ok);
            CHECK(r.raw_ber == 0.0);
            CHECK(r.coded_ber == 0.0);
            CHECK(r.covert_ber.has_value() == spec.has_value());
            if (spec) CHECK(*r.covert_ber == 0.0);
        }
    }
}

TEST_CASE("trials are reproducible") {
    auto cfg = small(covert::StfPsk{64});
    cfg.channel = {channel::Model::D, 10.0, 20e3, 50.0, 0};
    for (std::size_t t = 0; t < 4; ++t) {
        TrialReport a = run_trial(cfg, t), b = run_trial(cfg, t);
        CHECK(a.raw_errors == b.raw_errors);
        CHECK(a.coded_errors == b.coded_errors);
        CHECK(a.covert_errors == b.covert_errors);
        CHECK(a.evm_db == b.evm_db);
        CHECK(a.coarse_cfo_hz == b.coarse_cfo_hz);
    }
    auto c1 = cfg, c4 = cfg;
    c1.threads = 1;
    c4.threads = 4;
    CHECK(to_csv({run_point(c1)}) == to_csv({run_point(c4)}));
}

TEST_CASE("undetected frames count as total loss") {
    auto cfg = small(covert::StfPsk{64});
    cfg.channel.snr_db = -20.0;
    cfg.n_trials = 3;
    for (const auto& r : run_trials(cfg)) {
        if (!r.detected) {
            CHECK(r.raw_errors == r.raw_bits);
            CHECK(r.covert_errors == r.covert_bits);
            CHECK(*r.covert_ber == 1.0);
        }
    }
}

TEST_CASE("aggregate totals match capacities") {
    auto cfg = small(covert::Camo{}, 54, 300);
    cfg.channel.snr_db = 20.0;
    SweepPoint p = run_point(cfg);
    const auto n = phy::n_data_symbols(phy::mcs_for_rate(54), 300);
    CHECK(p.trials == cfg.n_trials);
    CHECK(p.covert_bits == cfg.n_trials * covert::capacity_bits(covert::Camo{}, n));
    CHECK(p.coded_bits == cfg.n_trials * 300 * 8);
    CHECK(p.raw_bits == cfg.n_trials * n * 288);
    CHECK(p.covert_kind == "camo");
}

TEST_CASE("wilson interval") {
    Interval i = wilson_interval(10, 100);
    CHECK(i.low == doctest::Approx(0.05522914).epsilon(1e-6));
    CHECK(i.high == doctest::Approx(0.17436566).epsilon(1e-6));
    Interval z = wilson_interval(0, 1000);
    CHECK(std::abs(z.low) < 1e-12);
    CHECK(z.high == doctest::Approx(0.00382634).epsilon(1e-5));
    // Width scales as 1/sqrt(n): quadrupling the trials halves it.
    for (double p : {0.01, 0.1, 0.3}) {
        const std::size_t n = 10000;
        Interval a = wilson_interval(static_cast<std::size_t>(p * n), n);
        Interval b = wilson_interval(static_cast<std::size_t>(p * 4 * n), 4 * n);
        double ratio = (a.high - a.low) / (b.high - b.low);
        CHECK(ratio == doctest::Approx(2.0).epsilon(0.2));
        Interval c = wilson_interval(static_cast<std::size_t>(p * 2 * n), 2 * n);
        CHECK((a.high - a.low) / (c.high - c.low) == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
    }
}

TEST_CASE("sweep expansion and csv") {
    ExperimentConfig c = small(covert::StfPsk{});
    c.axes.snr_db = {5, 10, 15};
    c.axes.psk_order = {16, 64};
    auto pts = expand_sweep(c);
    REQUIRE(pts.size() == 6);
    CHECK(pts[0].channel.snr_db == 5);
    CHECK(std::get<covert::StfPsk>(*pts[0].covert).order == 16);
    CHECK(std::get<covert::StfPsk>(*pts[1].covert).order == 64);
    CHECK(pts[5].channel.snr_db == 15);

    std::ostringstream os;
    write_csv_header(os);
    CHECK(os.str() == "model,snr_db,mcs,covert_kind,covert_param,trials,raw_ber,coded_ber,covert_ber,fer,ci_low,ci_high\n");

    SweepPoint p;
    p.model = channel::Model::D;
    p.snr_db = channel::kInfiniteSnr;
    p.mcs_rate = 24;
    p.covert_kind = "stf-psk";
    p.covert_param = "M=64";
    p.trials = 10;
    p.raw_ber = 0.5;
    p.ci = {0.25, 0.75};
    std::ostringstream row;
    write_csv_row(row, p);
    CHECK(row.str() ==
          "D,inf,24,stf-psk,M=64,10,5.000000e-01,0.000000e+00,0.000000e+00,0.000000e+00,2.500000e-01,7.500000e-01\n");
    p.covert_kind = "none";
    p.covert_param = "";
    std::ostringstream none;
    write_csv_row(none, p);
    CHECK(none.str() == "D,inf,24,none,,10,5.000000e-01,0.000000e+00,,0.000000e+00,2.500000e-01,7.500000e-01\n");
}

TEST_CASE("single point sweep equals trial aggregation") {
    auto cfg = small(covert::StfPsk{64});
    cfg.channel.snr_db = 12.0;
    auto sweep = run_sweep(cfg);
    REQUIRE(sweep.size() == 1);
    CHECK(to_csv(sweep) == to_csv({aggregate(cfg, run_trials(cfg))}));
}

TEST_CASE("awgn baseline ber falls with snr") {
    auto cfg = small(std::nullopt, 54, 500);
    cfg.n_trials = 20;
    cfg.genie_timing = true;
    cfg.axes.snr_db = {8, 12, 16, 20};
    auto pts = run_sweep(cfg);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].ci.low <= pts[i - 1].ci.high);
    CHECK(pts.back().raw_ber < pts.front().raw_ber);
}

TEST_CASE("covert rates") {
    auto rows = reference_rates();
    REQUIRE(rows.size() == 5);
    CHECK(format_rate(rows[0].bits_per_s) == "375 kbit/s");
    CHECK(format_rate(rows[2].bits_per_s) == "250 kbit/s");
    CHECK(format_rate(rows[3].bits_per_s) == "4.5 Mbit/s");
    CHECK(format_rate(rows[4].bits_per_s) == "6.75 Mbit/s");
    CHECK(rows[0].bits_per_s == doctest::Approx(6 * 62500.0));
    // The modem's own 14-byte frame also has a SIG and a data symbol: 24 us.
    CHECK(make_profile(36, 14).duration_s == doctest::Approx(24e-6));
    CHECK(make_profile(36, 14).n_data_symbols == 1);
    CHECK(covert_rate(covert::CfoFsk{}, make_profile(24, 100)) == doctest::Approx(250e3));
}

TEST_CASE("iq files") {
    IqBuffer iq;
    for (int i = 0; i < 500; ++i) iq.samples.emplace_back(0.001 * i, -0.5 + 0.002 * i);
    auto p = temp_path("iq.bin");
    write_iq(p, iq, "unit test");
    IqBuffer back = read_iq(p);
    REQUIRE(back.size() == iq.size());
    for (std::size_t i = 0; i < iq.size(); ++i) CHECK(std::abs(back[i] - iq[i]) < 1e-7);
    CHECK(std::filesystem::exists(std::filesystem::path(p).replace_extension(".meta")));
    CHECK_THROWS_AS(read_iq(temp_path("missing.bin")), InvalidArgument);

    Bits bits{1, 0, 1, 1, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0, 0, 0};
    auto q = temp_path("payload.bin");
    write_payload_bits(q, bits);
    CHECK(read_payload_bits(q) == bits);
    CHECK(std::filesystem::file_size(q) == 2);
    std::filesystem::remove(p);
    std::filesystem::remove(std::filesystem::path(p).replace_extension(".meta"));
    std::filesystem::remove(q);
}

TEST_CASE("config parsing") {
    auto c = parse_config(R"({
        "mcs": 36, "frame_len_bytes": 14, "n_trials": 50, "seed": 9,
        "channel": {"model": "E", "snr_db": "inf", "max_doppler_hz": 10, "snr_per_frame": true},
        "covert": {"kind": "cp", "fraction": "full", "covert_fft": 16, "cpcp_len": 0},
        "sweep": {"snr_db": [5, 10]}
    })");
    CHECK(c.mcs_rate == 36);
    CHECK(c.frame_len_bytes == 14);
    CHECK(c.n_trials == 50);
    CHECK(c.seed == 9);
    CHECK(c.channel.model == channel::Model::E);
    CHECK(std::isinf(c.channel.snr_db));
    CHECK(c.channel.max_doppler_hz == 10);
    CHECK(c.snr_per_frame);
    CHECK_FALSE(trial_channel(c, 0).reference_power);
    CHECK(*trial_channel(ExperimentConfig{}, 0).reference_power == doctest::Approx(52.0 / 4096.0));
    auto cp = std::get<covert::CpReplace>(*c.covert);
    CHECK(cp.fraction == covert::CpFraction::Full);
    CHECK(cp.covert_fft == 16);
    CHECK(c.axes.snr_db == std::vector<double>{5, 10});

    CHECK_THROWS_AS(parse_config("{"), InvalidArgument);
    CHECK_THROWS_AS(parse_config(R"({"mcs": 7})"), InvalidArgument);
    CHECK_THROWS_AS(parse_config(R"({"n_trials": 0})"), InvalidArgument);
    CHECK_THROWS_AS(parse_config(R"({"covert": {"kind": "morse"}})"), InvalidArgument);
    CHECK_THROWS_AS(parse_config(R"({"frame_len_bytes": 100, "covert": {"kind": "cfo-fsk"}})"), InvalidArgument);
    CHECK_THROWS_AS(load_config(temp_path("nope.json")), InvalidArgument);
}
