#ifndef CHEAPBOOT_SAMPLE_HPP
#define CHEAPBOOT_SAMPLE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cheapboot {

// An n-by-p data matrix of i.i.d. observations, row major, with an optional
// paired response vector (regression targets). Entries are validated once,
// at construction: NaN/Inf are rejected here and nowhere else.
class EmpiricalSample {
  public:
    EmpiricalSample(std::size_t n, std::size_t p, std::vector<double> row_major,
                    std::optional<std::vector<double>> response = std::nullopt);

    std::size_t n_rows() const { return n_; }
    std::size_t n_cols() const { return p_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * p_ + j]; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * p_, p_}; }
    const std::vector<double>& data() const { return data_; }

    bool has_response() const { return response_.has_value(); }
    const std::vector<double>& response() const;

    // Column means in a single fixed-order pass (deterministic reduction).
    std::vector<double> column_means() const;

  private:
    std::size_t n_;
    std::size_t p_;
    std::vector<double> data_;
    std::optional<std::vector<double>> response_;
};

// An ordered collection of independent univariate samples, e.g. the 13
// input-data sources of the network model (12 inter-arrival sources in
// row-major node-pair order, then message length).
class MultiSourceSample {
  public:
    explicit MultiSourceSample(std::vector<std::vector<double>> sources);

    std::size_t n_sources() const { return sources_.size(); }
    const std::vector<double>& source(std::size_t j) const { return sources_[j]; }
    const std::vector<std::vector<double>>& sources() const { return sources_; }

  private:
    std::vector<std::vector<double>> sources_;
};

}  // namespace cheapboot

#endif
