#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace stratcorr {

// Plain comma-separated fields, no quoting: instrument and institution codes
// never contain delimiters in this pipeline.
std::vector<std::string> split_csv(std::string_view line, char delim = ',');

std::string fmt_double(double x, int precision = 12);

// CSV emitter used for every artifact table. Writes '#'-prefixed comment
// lines first (config hash, seed), then a header row, then data rows.
class TableWriter {
  public:
    explicit TableWriter(const std::filesystem::path& path);

    void comment(const std::string& text);
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<std::string>& cells);

    static std::string cell(double x) { return fmt_double(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(long x) { return std::to_string(x); }
    static std::string cell(std::size_t x) { return std::to_string(x); }
    static std::string cell(const std::string& s) { return s; }

  private:
    std::ofstream out_;
};

}  // namespace stratcorr
