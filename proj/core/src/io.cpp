#include "hdgc/io.hpp"

#include "hdgc/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace hdgc {
namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, sep)) out.push_back(trim(field));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_cell(const std::string& cell, const std::string& source, std::size_t line,
                  const std::string& label) {
    if (cell.empty()) throw ParseError(source, line, "missing value in column '" + label + "'");
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = cell.data() + cell.size();
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(source, line, "cannot parse '" + cell + "' in column '" + label + "' as a number");
    }
    if (!std::isfinite(value)) {
        throw ParseError(source, line, "non-finite value in column '" + label + "'");
    }
    return value;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file for reading");
    return in;
}

}  // namespace

TimeSeriesPanel parse_panel_csv(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> labels;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw ParseError(source, line_no, "empty file, expected a header row");
    labels = split(line, ',');
    for (const auto& label : labels) {
        if (label.empty()) throw ParseError(source, line_no, "empty column label in header");
    }
    {
        std::map<std::string, int> seen;
        for (const auto& label : labels) {
            if (++seen[label] > 1) throw ParseError(source, line_no, "duplicate column label '" + label + "'");
        }
    }

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != labels.size()) {
            throw ParseError(source, line_no, "expected " + std::to_string(labels.size()) +
                                                  " fields, found " + std::to_string(cells.size()));
        }
        std::vector<double> row(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j) row[j] = parse_cell(cells[j], source, line_no, labels[j]);
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw ParseError(source, line_no, "panel needs at least 2 data rows");

    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(labels.size()));
    for (std::size_t t = 0; t < rows.size(); ++t) {
        for (std::size_t j = 0; j < labels.size(); ++j) {
            values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = rows[t][j];
        }
    }
    return TimeSeriesPanel(std::move(values), std::move(labels));
}

TimeSeriesPanel read_panel_csv(const std::string& path) {
    auto in = open_input(path);
    return parse_panel_csv(in, path);
}

BlockStructure parse_block_map(std::istream& in, const std::string& source,
                               const std::vector<std::string>& labels) {
    std::map<std::string, std::size_t> index;
    for (std::size_t j = 0; j < labels.size(); ++j) index.emplace(labels[j], j);

    std::vector<Block> blocks;
    std::map<std::size_t, std::size_t> owner_line;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto colon = text.find(':');
        if (colon == std::string::npos) {
            throw ParseError(source, line_no, "expected 'block_name: label1,label2,...'");
        }
        Block block{trim(std::string_view(text).substr(0, colon)), {}};
        if (block.name.empty()) throw ParseError(source, line_no, "empty block name");
        for (const auto& b : blocks) {
            if (b.name == block.name) throw ParseError(source, line_no, "duplicate block '" + block.name + "'");
        }
        const std::string members = trim(std::string_view(text).substr(colon + 1));
        if (members.empty()) throw ParseError(source, line_no, "block '" + block.name + "' has no columns");
        for (const auto& label : split(members, ',')) {
            auto it = index.find(label);
            if (it == index.end()) {
                throw ParseError(source, line_no, "unknown column label '" + label + "'");
            }
            if (auto [pos, inserted] = owner_line.emplace(it->second, line_no); !inserted) {
                throw ParseError(source, line_no, "column '" + label + "' already assigned on line " +
                                                      std::to_string(pos->second));
            }
            block.columns.push_back(it->second);
        }
        blocks.push_back(std::move(block));
    }
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (!owner_line.contains(j)) {
            throw ParseError(source, line_no, "column '" + labels[j] + "' is not assigned to any block");
        }
    }
    return BlockStructure(std::move(blocks), labels.size());
}

BlockStructure read_block_map(const std::string& path, const std::vector<std::string>& labels) {
    auto in = open_input(path);
    return parse_block_map(in, path, labels);
}

std::string format_number(double value) {
    if (std::isnan(value)) return "NA";
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) return "NA";
    return std::string(buffer, ptr);
}

void write_panel_csv(std::ostream& out, const TimeSeriesPanel& panel) {
    const auto& labels = panel.labels();
    for (std::size_t j = 0; j < labels.size(); ++j) out << (j ? "," : "") << labels[j];
    out << '\n';
    const auto& v = panel.values();
    for (Eigen::Index t = 0; t < v.rows(); ++t) {
        for (Eigen::Index j = 0; j < v.cols(); ++j) out << (j ? "," : "") << format_number(v(t, j));
        out << '\n';
    }
}

void write_block_map(std::ostream& out, const BlockStructure& blocks,
                     const std::vector<std::string>& labels) {
    for (const auto& block : blocks.blocks()) {
        out << block.name << ": ";
        for (std::size_t i = 0; i < block.columns.size(); ++i) {
            out << (i ? "," : "") << labels.at(block.columns[i]);
        }
        out << '\n';
    }
}

}  // namespace hdgc
