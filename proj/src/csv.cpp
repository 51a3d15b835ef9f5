#include "bathlab/csv.hpp"

#include "bathlab/types.hpp"

#include <charconv>
#include <cmath>

namespace bathlab {

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (x == 0.0)
        x = 0.0; // drop the sign of negative zero
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary)
{
    if (!out_)
        throw ConfigError("cannot open " + path.string() + " for writing");
    for (const auto& h : header)
        cell(h);
    end_row();
}

CsvWriter& CsvWriter::cell(double x) { return cell(format_number(x)); }

CsvWriter& CsvWriter::cell(long long x) { return cell(std::to_string(x)); }

CsvWriter& CsvWriter::cell(const std::string& s)
{
    if (!first_)
        out_ << ',';
    out_ << s;
    first_ = false;
    return *this;
}

void CsvWriter::end_row()
{
    out_ << '\n' << std::flush;
    first_ = true;
}

} // namespace bathlab
