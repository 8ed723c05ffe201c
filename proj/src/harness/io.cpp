#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "covertwifi/harness/harness.hpp"

namespace cwifi::harness {
namespace {

static_assert(std::endian::native == std::endian::little, "IQ files are written in host order");

std::filesystem::path meta_path(const std::filesystem::path& p) {
    auto m = p;
    m.replace_extension(".meta");
    return m;
}

}  // namespace

void write_iq(const std::filesystem::path& path, const IqBuffer& iq, const std::string& description) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    std::vector<float> buf;
    buf.reserve(2 * iq.size());
    for (const auto& s : iq.samples) {
        buf.push_back(static_cast<float>(s.real()));
        buf.push_back(static_cast<float>(s.imag()));
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
    std::ofstream meta(meta_path(path));
    if (!meta) throw Error("cannot write " + meta_path(path).string());
    meta << "sample_rate_hz=20000000\n" << "description=" << description << '\n';
}

IqBuffer read_iq(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();
    if (bytes.size() % (2 * sizeof(float)) != 0) throw InvalidArgument(path.string() + ": truncated IQ sample");

    std::ifstream meta(meta_path(path));
    for (std::string line; meta && std::getline(meta, line);) {
        if (line.rfind("sample_rate_hz=", 0) == 0 && line != "sample_rate_hz=20000000")
            throw InvalidArgument(path.string() + ": only 20 MHz captures are supported");
    }

    IqBuffer iq;
    const std::size_t n = bytes.size() / (2 * sizeof(float));
    iq.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        float re, im;
        std::memcpy(&re, bytes.data() + 8 * i, 4);
        std::memcpy(&im, bytes.data() + 8 * i + 4, 4);
        iq.samples[i] = Complex(re, im);
    }
    return iq;
}

Bits read_payload_bits(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    const Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes_to_bits_msb(bytes);
}

void write_payload_bits(const std::filesystem::path& path, const Bits& bits) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    const Bytes bytes = bits_to_bytes_msb(bits);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::string format_report(const detect::Layer1Report& r) {
    std::ostringstream os;
    double cp_mean = 0.0;
    for (double v : r.cp_similarity) cp_mean += v;
    if (!r.cp_similarity.empty()) cp_mean /= static_cast<double>(r.cp_similarity.size());
    os << "frame_start=" << r.frame_start << " stf_delta_phi_rad=" << r.stf_delta_phi_rad << " cfo_pattern_score=";
    if (r.cfo_pattern_score) os << *r.cfo_pattern_score;
    else os << "na";
    os << " extra_subcarrier_power_db=" << r.subcarriers.extra_power_db << " ht_frame=" << r.subcarriers.ht_frame
       << " cp_similarity_mean=" << cp_mean << " oob_power_margin_db=" << r.oob_power_margin_db
       << " evm_db=" << r.evm_db << " stf_flag=" << r.stf_flag << " cfo_flag=" << r.cfo_flag
       << " subcarrier_flag=" << r.subcarriers.covert << " cp_flag=" << r.cp_flag;
    return os.str();
}

}  // namespace cwifi::harness
