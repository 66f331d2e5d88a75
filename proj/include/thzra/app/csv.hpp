#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace thzra::app {

/// Shortest round-trip decimal; empty for NaN so missing values stay blank.
std::string format_number(double v);

class CsvWriter
{
  public:
    /// First line is "#schema: thzra.<schema>.v1".
    CsvWriter(const std::string& schema, std::vector<std::string> header);

    void row(const std::vector<std::string>& fields);
    const std::string& str() const { return text_; }

  private:
    std::size_t columns_;
    std::string text_;
};

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace thzra::app
