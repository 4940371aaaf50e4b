// Text output helpers: 17-significant-digit number formatting and small
// CSV writers with a fixed, documented column order.
#ifndef QCDMA_TEXTIO_HPP
#define QCDMA_TEXTIO_HPP

#include <complex>
#include <string>
#include <vector>

namespace qcdma::textio {

// Round-trippable decimal form of a double ("%.17g").
std::string g17(double x);

struct CsvColumn {
    std::string name;
    std::vector<double> values;
};

// "# key=value" metadata lines, then a header row, then the rows.
std::string csv(const std::vector<std::pair<std::string, std::string>>& metadata,
                const std::vector<CsvColumn>& columns);

void write_file(const std::string& path, const std::string& contents);

}  // namespace qcdma::textio

#endif
