#include "thzra/app/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "thzra/error.hpp"

namespace thzra::app {

std::string format_number(double v)
{
    if (std::isnan(v))
        return {};
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

CsvWriter::CsvWriter(const std::string& schema, std::vector<std::string> header) : columns_(header.size())
{
    text_ = "#schema: thzra." + schema + ".v1\n";
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields)
{
    if (fields.size() != columns_)
        throw Error(ErrorCode::IoError, "CSV row has " + std::to_string(fields.size()) + " fields, expected " +
                                            std::to_string(columns_));
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            text_ += ',';
        text_ += fields[i];
    }
    text_ += '\n';
}

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out)
            throw Error(ErrorCode::IoError, "short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw Error(ErrorCode::IoError, "cannot rename onto '" + path.string() + "': " + ec.message());
}

}  // namespace thzra::app
