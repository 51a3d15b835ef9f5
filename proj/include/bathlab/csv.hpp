#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace bathlab {

// Shortest decimal string that parses back to the same double (std::to_chars).
std::string format_number(double x);

// Comma-separated writer; numbers use format_number, rows end with '\n'.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& cell(double x);
    CsvWriter& cell(long long x);
    CsvWriter& cell(int x) { return cell(static_cast<long long>(x)); }
    CsvWriter& cell(const std::string& s);
    void end_row();

private:
    std::ofstream out_;
    bool first_ = true;
};

} // namespace bathlab
