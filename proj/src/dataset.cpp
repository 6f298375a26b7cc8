#include "shapereg/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "shapereg/errors.hpp"

namespace shapereg {
namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

// Locale-independent strict parse of a full token.
double parse_cell(const std::string& cell, std::size_t row) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw InputError("csv: non-numeric value '" + cell + "' in data row " +
                         std::to_string(row));
    if (!std::isfinite(v))
        throw InputError("csv: non-finite value in data row " + std::to_string(row));
    return v;
}

}  // namespace

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("csv: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw InputError("csv: empty file '" + path + "'");
    const auto header = split_csv(line);
    if (header.size() != 2)
        throw InputError("csv: expected exactly two columns named x and y");
    int x_col, y_col;
    if (header[0] == "x" && header[1] == "y") {
        x_col = 0;
        y_col = 1;
    } else if (header[0] == "y" && header[1] == "x") {
        x_col = 1;
        y_col = 0;
    } else {
        throw InputError("csv: header must name columns x and y (got '" + header[0] + "', '" +
                         header[1] + "')");
    }

    Dataset ds;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != 2)
            throw InputError("csv: wrong field count in data row " + std::to_string(row));
        ds.x.push_back(parse_cell(cells[x_col], row));
        ds.y.push_back(parse_cell(cells[y_col], row));
    }
    if (ds.x.size() < 3) throw InputError("csv: need at least 3 data rows");

    const auto [mn, mx] = std::minmax_element(ds.x.begin(), ds.x.end());
    ds.x_min = *mn;
    ds.x_max = *mx;
    if (!(ds.x_max > ds.x_min)) throw InputError("csv: covariate is constant; cannot rescale");
    const double span = ds.x_max - ds.x_min;
    for (auto& v : ds.x) v = std::clamp((v - ds.x_min) / span, 0.0, 1.0);
    return ds;
}

}  // namespace shapereg
