#ifndef MAGOPT_CSV_HPP
#define MAGOPT_CSV_HPP

#include <string>
#include <vector>

#include "magopt/errors.hpp"

namespace magopt {

/// Column-oriented numeric table with a mandatory header row. Floating point
/// is written with 17 significant digits so values round-trip exactly.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;  // throws data_error when missing
    size_t col_count() const { return header.size(); }
};

std::string format17(double v);

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

}  // namespace magopt

#endif
