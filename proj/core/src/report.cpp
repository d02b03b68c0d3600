#include "stackfuse/report.hpp"

#include "stackfuse/errors.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace stackfuse {
namespace {

std::string fmt(const char* format, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, value);
    return buf;
}

std::string render_text(const ComparisonReport& report) {
    std::ostringstream out;
    char buf[64];

    out << "person |";
    for (const auto& pr : report.per_person) {
        std::snprintf(buf, sizeof(buf), " %6d", pr.person);
        out << buf;
    }
    out << '\n';
    out << "stage1 |";
    for (const auto& pr : report.per_person) out << ' ' << fmt("%6.3f", pr.stage1_accuracy);
    out << '\n';
    out << "stage2 |";
    for (const auto& pr : report.per_person) out << ' ' << fmt("%6.3f", pr.stage2_accuracy);
    out << "\n\n";

    out << "class  |";
    for (Eigen::Index c = 0; c < report.per_class_delta.size(); ++c) {
        std::snprintf(buf, sizeof(buf), " %6lld", static_cast<long long>(c));
        out << buf;
    }
    out << '\n';
    out << "delta  |";
    for (Eigen::Index c = 0; c < report.per_class_delta.size(); ++c) {
        out << ' ' << fmt("%+6.1f", report.per_class_delta(c) * 100.0);
    }
    out << "\n\n";
    out << "overall delta: " << fmt("%+.1f", report.overall_delta * 100.0) << " pp\n";
    return out.str();
}

std::string render_csv(const ComparisonReport& report) {
    std::ostringstream out;
    out << "person,stage1_acc,stage2_acc\n";
    for (const auto& pr : report.per_person) {
        out << pr.person << ',' << fmt("%.17g", pr.stage1_accuracy) << ','
            << fmt("%.17g", pr.stage2_accuracy) << '\n';
    }
    out << "class,delta_pp\n";
    for (Eigen::Index c = 0; c < report.per_class_delta.size(); ++c) {
        out << c << ',' << fmt("%.17g", report.per_class_delta(c) * 100.0) << '\n';
    }
    return out.str();
}

double parse_number(const std::string& cell, std::size_t line_no) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ParseError("report csv line " + std::to_string(line_no) + ": bad number '" +
                         cell + "'");
    }
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

} // namespace

std::string render_report(const ComparisonReport& report, ReportFormat format) {
    return format == ReportFormat::TextTable ? render_text(report) : render_csv(report);
}

ComparisonReport parse_report_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line) || line != "person,stage1_acc,stage2_acc") {
        throw ParseError("report csv: missing person table header");
    }
    ++line_no;

    ComparisonReport report;
    std::vector<double> deltas;
    bool in_class_table = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line == "class,delta_pp") {
            in_class_table = true;
            continue;
        }
        const auto cells = split_csv_line(line);
        if (!in_class_table) {
            if (cells.size() != 3) {
                throw ParseError("report csv line " + std::to_string(line_no) +
                                 ": expected 3 columns");
            }
            PersonResult pr;
            pr.person = static_cast<int>(parse_number(cells[0], line_no));
            pr.stage1_accuracy = parse_number(cells[1], line_no);
            pr.stage2_accuracy = parse_number(cells[2], line_no);
            report.per_person.push_back(pr);
        } else {
            if (cells.size() != 2) {
                throw ParseError("report csv line " + std::to_string(line_no) +
                                 ": expected 2 columns");
            }
            deltas.push_back(parse_number(cells[1], line_no) / 100.0);
        }
    }
    if (!in_class_table) throw ParseError("report csv: missing class table");

    report.per_class_delta.resize(static_cast<Eigen::Index>(deltas.size()));
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        report.per_class_delta(static_cast<Eigen::Index>(i)) = deltas[i];
    }
    report.overall_delta = 0.0;
    for (const auto& pr : report.per_person) {
        report.overall_delta += pr.stage2_accuracy - pr.stage1_accuracy;
    }
    if (!report.per_person.empty()) {
        report.overall_delta /= static_cast<double>(report.per_person.size());
    }
    return report;
}

std::string render_confusion(const ConfusionMatrix& cm) {
    std::ostringstream out;
    char buf[64];
    out << "true\\pred";
    for (int p = 0; p < cm.num_classes(); ++p) {
        std::snprintf(buf, sizeof(buf), " %7d", p);
        out << buf;
    }
    out << '\n';
    for (int t = 0; t < cm.num_classes(); ++t) {
        std::snprintf(buf, sizeof(buf), "%9d", t);
        out << buf;
        for (int p = 0; p < cm.num_classes(); ++p) {
            std::snprintf(buf, sizeof(buf), " %7lld", cm.at(t, p));
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

} // namespace stackfuse
