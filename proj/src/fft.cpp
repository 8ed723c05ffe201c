#include "covertwifi/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace cwifi {
namespace {

// fftw_execute_dft is thread-safe; planning is not.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<Complex> a(n), b(n);
        fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                          reinterpret_cast<fftw_complex*>(b.data()), sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

void execute(std::span<const Complex> in, std::span<Complex> out, int sign) {
    if (in.size() != out.size()) throw InvalidArgument("fft: size mismatch");
    if (in.empty()) return;
    const int n = static_cast<int>(in.size());
    fftw_plan plan = cache().get(n, sign);
    // FFTW does not modify the input of an out-of-place complex transform.
    auto* src = const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in.data()));
    if (in.data() == out.data()) {
        std::vector<Complex> tmp(in.begin(), in.end());
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
    } else {
        fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out.data()));
    }
}

}  // namespace

void fft(std::span<const Complex> in, std::span<Complex> out) { execute(in, out, FFTW_FORWARD); }

void ifft(std::span<const Complex> in, std::span<Complex> out) {
    execute(in, out, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(in.size());
    for (auto& v : out) v *= scale;
}

std::vector<Complex> fft(std::span<const Complex> in) {
    std::vector<Complex> out(in.size());
    fft(in, std::span<Complex>(out));
    return out;
}

std::vector<Complex> ifft(std::span<const Complex> in) {
    std::vector<Complex> out(in.size());
    ifft(in, std::span<Complex>(out));
    return out;
}

}  // namespace cwifi
