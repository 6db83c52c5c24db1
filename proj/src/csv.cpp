#include "mpifs/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace mpifs {
namespace {

void write_rows(std::ostream& os, const std::vector<PointValue>& entries, const char* value_name) {
    const int d = static_cast<int>(entries.front().x.size());
    for (int i = 1; i <= d; ++i) os << "x" << i << ",";
    os << value_name << "\n";
    char buf[32];
    for (const PointValue& e : entries) {
        for (int i = 0; i < d; ++i) {
            std::snprintf(buf, sizeof buf, "%.6f", e.x[i]);
            os << buf << ",";
        }
        std::snprintf(buf, sizeof buf, "%.6f", e.value);
        os << buf << "\n";
    }
}

// Rows become raw entries; the map constructors merge points that collide
// after 6-decimal rounding by max, which keeps eval within the serialization
// tolerance.
std::vector<PointValue> read_rows(std::istream& is, const char* what) {
    std::string line;
    if (!std::getline(is, line)) throw IoError(std::string(what) + " csv: missing header");
    int d = 0;
    {
        std::stringstream header(line);
        std::string field;
        while (std::getline(header, field, ',')) ++d;
        --d;  // last column is the value
    }
    if (d < 1 || d > 3) throw IoError(std::string(what) + " csv: expected 1..3 coordinate columns");
    std::vector<PointValue> entries;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string field;
        Point x(d);
        double value = 0.0;
        for (int i = 0; i <= d; ++i) {
            if (!std::getline(row, field, ','))
                throw IoError(std::string(what) + " csv: short row at line " + std::to_string(lineno));
            char* end = nullptr;
            const double v = std::strtod(field.c_str(), &end);
            if (end == field.c_str())
                throw IoError(std::string(what) + " csv: bad number at line " + std::to_string(lineno));
            if (i < d)
                x[i] = v;
            else
                value = v;
        }
        entries.push_back({std::move(x), value});
    }
    return entries;
}

}  // namespace

void write_density_csv(std::ostream& os, const DensityMap& mu) {
    if (mu.empty()) throw InvalidMeasureError("csv: empty density");
    write_rows(os, mu.entries(), "lambda");
}

DensityMap read_density_csv(std::istream& is) { return DensityMap(read_rows(is, "density")); }

DensityMap read_density_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return read_density_csv(in);
}

void write_fuzzy_csv(std::ostream& os, const FuzzyMap& u) {
    if (u.empty()) throw InvalidMeasureError("csv: empty fuzzy set");
    write_rows(os, u.entries(), "u");
}

FuzzyMap read_fuzzy_csv(std::istream& is) { return FuzzyMap(read_rows(is, "fuzzy")); }

}  // namespace mpifs
