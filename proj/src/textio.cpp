#include "qcdma/textio.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qcdma::textio {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv(const std::vector<std::pair<std::string, std::string>>& metadata,
                const std::vector<CsvColumn>& columns) {
    std::string out;
    for (const auto& [key, value] : metadata) out += "# " + key + "=" + value + "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ",";
        out += columns[c].name;
    }
    out += "\n";
    std::size_t rows = 0;
    for (const auto& col : columns) rows = std::max(rows, col.values.size());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ",";
            if (r < columns[c].values.size()) out += g17(columns[c].values[r]);
        }
        out += "\n";
    }
    return out;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << contents;
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace qcdma::textio
