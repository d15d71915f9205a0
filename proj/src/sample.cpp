#include "cheapboot/sample.hpp"

#include <cmath>
#include <stdexcept>

namespace cheapboot {

EmpiricalSample::EmpiricalSample(std::size_t n, std::size_t p, std::vector<double> row_major,
                                 std::optional<std::vector<double>> response)
    : n_(n), p_(p), data_(std::move(row_major)), response_(std::move(response)) {
    if (n_ < 1 || p_ < 1) {
        throw std::invalid_argument("EmpiricalSample: need n >= 1 and p >= 1");
    }
    if (data_.size() != n_ * p_) {
        throw std::invalid_argument("EmpiricalSample: data length does not match n*p");
    }
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("EmpiricalSample: non-finite matrix entry");
        }
    }
    if (response_) {
        if (response_->size() != n_) {
            throw std::invalid_argument("EmpiricalSample: response length does not match n");
        }
        for (double v : *response_) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("EmpiricalSample: non-finite response entry");
            }
        }
    }
}

const std::vector<double>& EmpiricalSample::response() const {
    if (!response_) {
        throw std::logic_error("EmpiricalSample: no response column present");
    }
    return *response_;
}

std::vector<double> EmpiricalSample::column_means() const {
    std::vector<double> means(p_, 0.0);
    const double* ptr = data_.data();
    for (std::size_t i = 0; i < n_; ++i, ptr += p_) {
        for (std::size_t j = 0; j < p_; ++j) {
            means[j] += ptr[j];
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n_);
    for (double& m : means) m *= inv_n;
    return means;
}

MultiSourceSample::MultiSourceSample(std::vector<std::vector<double>> sources)
    : sources_(std::move(sources)) {
    if (sources_.empty()) {
        throw std::invalid_argument("MultiSourceSample: need at least one source");
    }
    for (const auto& src : sources_) {
        if (src.empty()) {
            throw std::invalid_argument("MultiSourceSample: empty source");
        }
        for (double v : src) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("MultiSourceSample: non-finite entry");
            }
        }
    }
}

}  // namespace cheapboot
