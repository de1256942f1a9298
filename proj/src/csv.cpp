#include "magopt/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace magopt {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    throw data_error("csv: missing column '" + name + "'");
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw data_error("csv: cannot open for writing: " + path);
    for (size_t i = 0; i < table.header.size(); ++i)
        std::fprintf(f, "%s%s", i ? "," : "", table.header[i].c_str());
    std::fprintf(f, "\n");
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            std::fprintf(f, "%s%.17g", i ? "," : "", row[i]);
        std::fprintf(f, "\n");
    }
    if (std::fclose(f) != 0) throw data_error("csv: write failed: " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("csv: cannot open: " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw data_error("csv: empty file: " + path);
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(table.header.size());
        const char* p = line.c_str();
        for (size_t i = 0; i < table.header.size(); ++i) {
            char* end = nullptr;
            const double v = std::strtod(p, &end);
            if (end == p)
                throw data_error("csv: " + path + " line " + std::to_string(lineno) +
                                 ": bad value in column '" + table.header[i] + "'");
            row.push_back(v);
            p = end;
            if (i + 1 < table.header.size()) {
                if (*p != ',')
                    throw data_error("csv: " + path + " line " + std::to_string(lineno) +
                                     ": expected ',' after column '" + table.header[i] +
                                     "'");
                ++p;
            }
        }
        if (*p != '\0' && *p != '\r')
            throw data_error("csv: " + path + " line " + std::to_string(lineno) +
                             ": trailing characters");
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace magopt
