#ifndef CHEAPBOOT_IO_HPP
#define CHEAPBOOT_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "cheapboot/sample.hpp"

namespace cheapboot {

// Which column of an input file, if any, is the regression response.
// Name selection requires a header line (CSV only).
struct ResponseSelector {
    std::variant<std::monostate, std::size_t, std::string> sel;

    static ResponseSelector none() { return {}; }
    static ResponseSelector by_index(std::size_t idx) { return {{idx}}; }
    static ResponseSelector by_name(std::string name) { return {{std::move(name)}}; }
    bool is_none() const { return std::holds_alternative<std::monostate>(sel); }
};

// Comma-separated values, one observation per row, optional single header
// line (auto-detected: a first line with any non-numeric token). Throws
// std::runtime_error naming the offending line/field on parse failure.
EmpiricalSample load_csv(const std::filesystem::path& path,
                         const ResponseSelector& response = ResponseSelector::none());

// Binary matrix container, little-endian:
//   bytes 0..7   magic "CBSAMP01"
//   bytes 8..11  n (uint32)
//   bytes 12..15 p (uint32)
//   then n*p float64 values, row major.
EmpiricalSample load_matrix_binary(const std::filesystem::path& path,
                                   const ResponseSelector& response = ResponseSelector::none());
void save_matrix_binary(const std::filesystem::path& path, const EmpiricalSample& sample);

// Sparse svmlight/libsvm text rows ("label idx:value idx:value ...",
// 1-based feature indices, '#' comments), densified into an
// EmpiricalSample whose response holds the labels. Feature count is the
// largest index seen, or `min_features` if larger.
EmpiricalSample load_svmlight(const std::filesystem::path& path, std::size_t min_features = 0);

}  // namespace cheapboot

#endif
