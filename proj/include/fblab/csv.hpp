#pragma once

// CSV output with a '#'-prefixed metadata preamble.  Every file written by
// the command line tool starts with the resolved configuration as
// '# key=value' lines, then one header row, then data rows.  Numbers carry
// 17 significant digits so files round-trip doubles exactly and reruns are
// byte-identical.

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fblab::csv {

/// Shortest exact decimal form would do, but a fixed %.17g is simpler and
/// still round-trips; also used for stdout reporting.
inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Writer {
  public:
    Writer(const std::string& path,
           const std::vector<std::pair<std::string, std::string>>& metadata,
           const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_)
            throw std::runtime_error("csv::Writer: cannot open " + path);
        for (const auto& [k, v] : metadata)
            out_ << "# " << k << "=" << v << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << (i ? "," : "") << columns[i];
        out_ << "\n";
    }

    /// Row of numbers, all printed with num().
    void row(std::initializer_list<double> values) {
        std::size_t i = 0;
        for (double v : values)
            out_ << (i++ ? "," : "") << num(v);
        out_ << "\n";
    }

    /// Row of preformatted cells (for mixed numeric/text rows).
    void row_cells(std::initializer_list<std::string> cells) {
        std::size_t i = 0;
        for (const auto& c : cells)
            out_ << (i++ ? "," : "") << c;
        out_ << "\n";
    }

    void close() { out_.close(); }

  private:
    std::ofstream out_;
};

}  // namespace fblab::csv
