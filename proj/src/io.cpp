#include "cheapboot/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "binary sample container assumes a little-endian host");

namespace cheapboot {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

bool parse_double(const std::string& tok, double& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    while (last > first && (*(last - 1) == ' ' || *(last - 1) == '\t')) --last;
    if (first == last) return false;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

// Splits column `idx` out of a row-major matrix as the response.
EmpiricalSample split_response(std::size_t n, std::size_t p, const std::vector<double>& raw,
                               std::size_t idx) {
    if (idx >= p) {
        throw std::runtime_error("response column index " + std::to_string(idx) +
                                 " out of range (file has " + std::to_string(p) + " columns)");
    }
    if (p < 2) {
        throw std::runtime_error("cannot split a response column out of a 1-column file");
    }
    std::vector<double> matrix;
    matrix.reserve(n * (p - 1));
    std::vector<double> response;
    response.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            const double v = raw[i * p + j];
            if (j == idx) {
                response.push_back(v);
            } else {
                matrix.push_back(v);
            }
        }
    }
    return {n, p - 1, std::move(matrix), std::move(response)};
}

}  // namespace

EmpiricalSample load_csv(const std::filesystem::path& path, const ResponseSelector& response) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open CSV file: " + path.string());
    }

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    std::vector<double> raw;
    std::size_t p = 0;
    std::size_t n = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        auto fields = split_fields(line);
        if (p == 0 && raw.empty()) {
            // First content line: header iff any field is non-numeric.
            bool numeric = true;
            double tmp;
            for (const auto& f : fields) {
                if (!parse_double(f, tmp)) {
                    numeric = false;
                    break;
                }
            }
            if (!numeric) {
                header = fields;
                p = fields.size();
                continue;
            }
            p = fields.size();
        }
        if (fields.size() != p) {
            throw std::runtime_error("CSV line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(p) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        for (std::size_t j = 0; j < fields.size(); ++j) {
            double v;
            if (!parse_double(fields[j], v)) {
                throw std::runtime_error("CSV line " + std::to_string(line_no) + ", field " +
                                         std::to_string(j + 1) + ": not a number: '" + fields[j] +
                                         "'");
            }
            raw.push_back(v);
        }
        ++n;
    }
    if (n == 0) {
        throw std::runtime_error("CSV file has no data rows: " + path.string());
    }

    if (response.is_none()) {
        return {n, p, std::move(raw)};
    }
    std::size_t idx;
    if (const auto* name = std::get_if<std::string>(&response.sel)) {
        if (header.empty()) {
            throw std::runtime_error("response column '" + *name +
                                     "' requested by name but the file has no header line");
        }
        auto it = std::find(header.begin(), header.end(), *name);
        if (it == header.end()) {
            throw std::runtime_error("response column '" + *name + "' not found in header");
        }
        idx = static_cast<std::size_t>(it - header.begin());
    } else {
        idx = std::get<std::size_t>(response.sel);
    }
    return split_response(n, p, raw, idx);
}

namespace {
constexpr char kMagic[8] = {'C', 'B', 'S', 'A', 'M', 'P', '0', '1'};
}

EmpiricalSample load_matrix_binary(const std::filesystem::path& path,
                                   const ResponseSelector& response) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open binary sample file: " + path.string());
    }
    char magic[8];
    std::uint32_t n32 = 0, p32 = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&n32), 4);
    in.read(reinterpret_cast<char*>(&p32), 4);
    if (!in || std::memcmp(magic, kMagic, 8) != 0) {
        throw std::runtime_error("bad magic in binary sample file: " + path.string());
    }
    const std::size_t n = n32, p = p32;
    std::vector<double> raw(n * p);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n * p * 8));
    if (!in) {
        throw std::runtime_error("truncated binary sample file: " + path.string());
    }
    if (response.is_none()) {
        return {n, p, std::move(raw)};
    }
    if (std::holds_alternative<std::string>(response.sel)) {
        throw std::runtime_error("binary sample files have no header; select the response by index");
    }
    return split_response(n, p, raw, std::get<std::size_t>(response.sel));
}

EmpiricalSample load_svmlight(const std::filesystem::path& path, std::size_t min_features) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open svmlight file: " + path.string());
    }
    struct Entry {
        std::size_t index;  // 0-based
        double value;
    };
    std::vector<std::vector<Entry>> rows;
    std::vector<double> labels;
    std::size_t p = min_features;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::string tok;
        if (!(fields >> tok)) continue;  // blank or comment-only line
        double label;
        if (!parse_double(tok, label)) {
            throw std::runtime_error("svmlight line " + std::to_string(line_no) +
                                     ": bad label '" + tok + "'");
        }
        std::vector<Entry> row;
        while (fields >> tok) {
            const auto colon = tok.find(':');
            double value;
            std::size_t index = 0;
            bool ok = colon != std::string::npos && colon > 0;
            if (ok) {
                try {
                    index = std::stoul(tok.substr(0, colon));
                } catch (...) {
                    ok = false;
                }
            }
            ok = ok && index >= 1 && parse_double(tok.substr(colon + 1), value);
            if (!ok) {
                throw std::runtime_error("svmlight line " + std::to_string(line_no) +
                                         ": bad feature token '" + tok + "'");
            }
            row.push_back({index - 1, value});
            p = std::max(p, index);
        }
        rows.push_back(std::move(row));
        labels.push_back(label);
    }
    if (rows.empty()) {
        throw std::runtime_error("svmlight file has no data rows: " + path.string());
    }
    if (p == 0) {
        throw std::runtime_error("svmlight file has no features: " + path.string());
    }
    std::vector<double> dense(rows.size() * p, 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& entry : rows[i]) {
            dense[i * p + entry.index] = entry.value;
        }
    }
    return {rows.size(), p, std::move(dense), std::move(labels)};
}

void save_matrix_binary(const std::filesystem::path& path, const EmpiricalSample& sample) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot create binary sample file: " + path.string());
    }
    const auto n32 = static_cast<std::uint32_t>(sample.n_rows());
    const auto p32 = static_cast<std::uint32_t>(sample.n_cols());
    out.write(kMagic, 8);
    out.write(reinterpret_cast<const char*>(&n32), 4);
    out.write(reinterpret_cast<const char*>(&p32), 4);
    out.write(reinterpret_cast<const char*>(sample.data().data()),
              static_cast<std::streamsize>(sample.data().size() * 8));
    if (!out) {
        throw std::runtime_error("failed writing binary sample file: " + path.string());
    }
}

}  // namespace cheapboot
