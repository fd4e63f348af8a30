#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace liqarch {

// Shortest round-trip decimal text for a double ("0.9", not "0.90000000000000002").
std::string format_double(double v);

// Splits one CSV line on commas. No quoting: none of the emitted or ingested
// schemas contain embedded commas.
std::vector<std::string> split_csv_line(const std::string& line);

// Line-buffered CSV writer with deterministic formatting.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void row(const std::vector<std::string>& fields);
    bool good() const { return out_.good(); }

private:
    std::ofstream out_;
};

std::string read_file(const std::string& path);  // throws on missing file

}  // namespace liqarch
