// output.hpp: deterministic CSV emission and run manifests

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace tpdicke::cli {

// Shortest round-trip-safe rendering: 17 significant digits.
std::string format_double(double x);

// Header row on construction, LF line endings, no locale dependence.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& cell(double x);
    CsvWriter& cell(long long x);
    CsvWriter& cell(std::size_t x) { return cell(static_cast<long long>(x)); }
    CsvWriter& cell(int x) { return cell(static_cast<long long>(x)); }
    CsvWriter& cell(const std::string& x);
    void end_row();
    void close();

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    void separator();

    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
    std::size_t filled_{0};
};

// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

class Manifest {
public:
    explicit Manifest(std::string command);

    nlohmann::ordered_json& params() { return doc_["params"]; }
    nlohmann::ordered_json& knobs() { return doc_["knobs"]; }
    nlohmann::ordered_json& results() { return doc_["results"]; }

    void add_output(const std::filesystem::path& file);
    // Writes <dir>/<command>.manifest.json; returns its path.
    std::filesystem::path write(const std::filesystem::path& dir);

private:
    nlohmann::ordered_json doc_;
};

} // namespace tpdicke::cli
