#include "cheapboot/resample.hpp"

#include <algorithm>
#include <stdexcept>

namespace cheapboot {

std::vector<std::size_t> draw_indices(std::size_t n, const SeedSpec& seed) {
    if (n < 1) {
        throw std::invalid_argument("draw_indices: n must be >= 1");
    }
    CounterStream stream(seed, StreamKind::resample);
    std::vector<std::size_t> indices(n);
    for (auto& idx : indices) {
        idx = static_cast<std::size_t>(stream.bounded(n));
    }
    return indices;
}

EmpiricalSample resample(const EmpiricalSample& sample, const SeedSpec& seed) {
    const std::size_t n = sample.n_rows();
    const std::size_t p = sample.n_cols();
    const auto indices = draw_indices(n, seed);

    std::vector<double> data(n * p);
    for (std::size_t i = 0; i < n; ++i) {
        const auto src = sample.row(indices[i]);
        std::copy(src.begin(), src.end(), data.begin() + static_cast<std::ptrdiff_t>(i * p));
    }
    if (!sample.has_response()) {
        return {n, p, std::move(data)};
    }
    std::vector<double> response(n);
    for (std::size_t i = 0; i < n; ++i) {
        response[i] = sample.response()[indices[i]];
    }
    return {n, p, std::move(data), std::move(response)};
}

MultiSourceSample resample_multi(const MultiSourceSample& sample, const SeedSpec& seed) {
    std::vector<std::vector<double>> out;
    out.reserve(sample.n_sources());
    for (std::size_t j = 0; j < sample.n_sources(); ++j) {
        const auto& src = sample.source(j);
        const auto indices = draw_indices(src.size(), seed.with_source(j));
        std::vector<double> redrawn(src.size());
        for (std::size_t i = 0; i < src.size(); ++i) {
            redrawn[i] = src[indices[i]];
        }
        out.push_back(std::move(redrawn));
    }
    return MultiSourceSample(std::move(out));
}

}  // namespace cheapboot
