#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "copyqnn/errors.hpp"

namespace copyqnn::csv {

/// Shortest decimal form that parses back to the same double. Keeps CSV
/// outputs byte-stable across identical runs and lossless to reload.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string &s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError("bad numeric field '" + s + "'");
    return v;
}

class Writer {
  public:
    explicit Writer(const std::filesystem::path &path) : out_(path) {
        if (!out_) throw Error("cannot open " + path.string() + " for writing");
    }

    void row(const std::vector<std::string> &fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

/// Whole-file reader; fields are plain comma-split (no quoting — none of
/// the emitted values contain commas).
inline std::vector<std::vector<std::string>> read_rows(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t pos = line.find(',', start);
            if (pos == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

} // namespace copyqnn::csv
