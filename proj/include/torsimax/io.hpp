#pragma once

#include "torsimax/errors.hpp"

#include "json.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace torsimax {

inline constexpr const char* kToolVersion = "0.1.0";

/// Twelve significant digits, '.' decimal point regardless of locale.
inline std::string format_number(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(12) << v;
    return os.str();
}

/// Comma-separated table with a mandatory header row.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(const std::vector<double>& row) {
        std::vector<std::string> cells;
        cells.reserve(row.size());
        for (double v : row) cells.push_back(format_number(v));
        add_row(std::move(cells));
    }
    void add_row(std::vector<std::string> row) {
        require(row.size() == header_.size(), ErrorKind::InvalidParameters, "CSV row width differs from header");
        rows_.push_back(std::move(row));
    }

    std::string str() const {
        std::string out = join(header_);
        for (const auto& r : rows_) out += join(r);
        return out;
    }

private:
    static std::string join(const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) line += ',';
            line += cells[i];
        }
        return line + '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), ErrorKind::ParseError, "cannot open '" + path + "' for writing");
    f << text;
    require(static_cast<bool>(f), ErrorKind::ParseError, "write to '" + path + "' failed");
}

inline std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

/// Record of one CLI invocation, written next to its outputs.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> parameters;
    std::vector<std::string> outputs;
    std::string timestamp = utc_timestamp();
    std::string tool_version = kToolVersion;

    nlohmann::json to_json() const {
        return {{"command", command}, {"parameters", parameters}, {"outputs", outputs},
                {"timestamp", timestamp}, {"tool_version", tool_version}};
    }

    /// Writes `<first output>.manifest.json` and returns its path.
    std::string write() const {
        require(!outputs.empty(), ErrorKind::InvalidParameters, "manifest needs at least one output");
        const std::string path = outputs.front() + ".manifest.json";
        write_text(path, to_json().dump(2) + "\n");
        return path;
    }
};

} // namespace torsimax
