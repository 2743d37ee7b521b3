#include "stratcorr/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace stratcorr {

std::vector<std::string> split_csv(std::string_view line, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string fmt_double(double x, int precision) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
    return buf;
}

TableWriter::TableWriter(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path.string());
}

void TableWriter::comment(const std::string& text) { out_ << "# " << text << '\n'; }

void TableWriter::header(const std::vector<std::string>& cols) { row(cols); }

void TableWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

}  // namespace stratcorr
