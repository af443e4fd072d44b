#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hscaler {

// Shortest-exact decimal form of a double ("%.17g" trimmed); CSV output built
// from this is byte-stable run to run.
std::string format_double(double v);

// Write via temp file + rename so readers never observe partial output.
void write_text_atomic(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

std::uint64_t fnv1a64(const std::string& data);
std::string to_hex(std::uint64_t v);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(const std::vector<double>& values);
    void add_raw_row(const std::vector<std::string>& cells);
    const std::string& content() const { return buffer_; }
    void write(const std::string& path) const { write_text_atomic(path, buffer_); }

private:
    std::string buffer_;
    std::size_t columns_;
};

} // namespace hscaler
