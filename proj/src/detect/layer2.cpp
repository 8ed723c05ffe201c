#include <cmath>

#include "covertwifi/detect/detect.hpp"

namespace cwifi::detect {

double two_proportion_z(std::size_t ea, std::size_t na, std::size_t eb, std::size_t nb) {
    if (na == 0 || nb == 0) throw InvalidArgument("empty window");
    const double pa = static_cast<double>(ea) / static_cast<double>(na);
    const double pb = static_cast<double>(eb) / static_cast<double>(nb);
    const double p = static_cast<double>(ea + eb) / static_cast<double>(na + nb);
    const double var = p * (1.0 - p) * (1.0 / static_cast<double>(na) + 1.0 / static_cast<double>(nb));
    return var > 0.0 ? (pa - pb) / std::sqrt(var) : 0.0;
}

double l2_monitor(const std::vector<Layer2Record>& records, std::size_t window) {
    if (window == 0) throw InvalidArgument("empty window");
    const std::size_t n_windows = records.size() / window;
    if (n_windows < 2) throw InvalidArgument("l2_monitor needs at least two full windows");
    std::vector<std::size_t> errors(n_windows, 0);
    for (std::size_t i = 0; i < n_windows * window; ++i)
        if (!records[i].frame_ok) ++errors[i / window];
    double score = 0.0;
    for (std::size_t w = 0; w + 1 < n_windows; ++w)
        score = std::max(score, std::abs(two_proportion_z(errors[w], window, errors[w + 1], window)));
    return score;
}

}  // namespace cwifi::detect
