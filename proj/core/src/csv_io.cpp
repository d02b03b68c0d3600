#include "stackfuse/csv_io.hpp"

#include "stackfuse/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace stackfuse {
namespace {

double parse_double(std::string_view cell, std::size_t row, std::size_t col) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("csv row " + std::to_string(row) + ", column " + std::to_string(col) +
                         ": '" + std::string(cell) + "' is not a number");
    }
    return value;
}

long parse_long(std::string_view cell, std::size_t row, std::size_t col) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ParseError("csv row " + std::to_string(row) + ", column " + std::to_string(col) +
                         ": '" + std::string(cell) + "' is not an integer");
    }
    return value;
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

} // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    if (schema.feature_len < 1) {
        throw InvalidArgumentError("csv schema: feature_len must be >= 1");
    }
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    const int columns = schema.feature_len + 1 + (schema.person_col >= 0 ? 1 : 0);
    if (schema.label_col < 0 || schema.label_col >= columns ||
        (schema.person_col >= 0 &&
         (schema.person_col >= columns || schema.person_col == schema.label_col))) {
        throw InvalidArgumentError("csv schema: label/person columns out of range");
    }

    Dataset ds;
    ds.feature_len = schema.feature_len;
    ds.name = path.filename().string();

    std::string line;
    std::size_t row = 0;
    int max_label = -1;
    while (std::getline(in, line)) {
        ++row;
        if (row == 1 && schema.has_header) continue;
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        const auto cells = split_cells(line);
        if (static_cast<int>(cells.size()) != columns) {
            throw ParseError("csv row " + std::to_string(row) + ": expected " +
                             std::to_string(columns) + " columns, got " +
                             std::to_string(cells.size()));
        }
        Sample s;
        s.features.reserve(static_cast<std::size_t>(schema.feature_len));
        for (int col = 0; col < columns; ++col) {
            if (col == schema.label_col) {
                const long label = parse_long(cells[static_cast<std::size_t>(col)], row,
                                              static_cast<std::size_t>(col));
                if (label < 0 ||
                    (schema.num_classes > 0 && label >= schema.num_classes)) {
                    throw ParseError("csv row " + std::to_string(row) + ": label " +
                                     std::to_string(label) + " out of range");
                }
                s.label = static_cast<int>(label);
            } else if (col == schema.person_col) {
                const long person = parse_long(cells[static_cast<std::size_t>(col)], row,
                                               static_cast<std::size_t>(col));
                s.person = person < 0 ? kNoPerson : static_cast<int>(person);
            } else {
                s.features.push_back(parse_double(cells[static_cast<std::size_t>(col)], row,
                                                  static_cast<std::size_t>(col)));
            }
        }
        max_label = std::max(max_label, s.label);
        ds.samples.push_back(std::move(s));
    }

    ds.num_classes = schema.num_classes > 0 ? schema.num_classes : max_label + 1;
    ds.validate();
    return ds;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    char buf[64];
    for (const Sample& s : ds.samples) {
        for (double f : s.features) {
            std::snprintf(buf, sizeof(buf), "%.17g", f);
            out << buf << ',';
        }
        out << s.label << ',' << s.person << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

CsvSchema csv_schema_for(int feature_len, int num_classes) {
    CsvSchema schema;
    schema.feature_len = feature_len;
    schema.label_col = feature_len;
    schema.person_col = feature_len + 1;
    schema.num_classes = num_classes;
    schema.has_header = false;
    return schema;
}

} // namespace stackfuse
