// output.cpp

#include "output.hpp"

#include "tpdicke/errors.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <memory>

namespace tpdicke::cli {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
    if (!out_) throw InvalidParameters("cannot open " + path.string() + " for writing");
    for (const auto& h : header) cell(h);
    end_row();
}

void CsvWriter::separator() {
    if (filled_ == columns_) throw InvalidParameters("too many cells in a row of " + path_.string());
    if (filled_++ > 0) out_ << ',';
}

CsvWriter& CsvWriter::cell(double x) {
    separator();
    out_ << format_double(x);
    return *this;
}

CsvWriter& CsvWriter::cell(long long x) {
    separator();
    out_ << x;
    return *this;
}

CsvWriter& CsvWriter::cell(const std::string& x) {
    separator();
    out_ << x;
    return *this;
}

void CsvWriter::end_row() {
    if (filled_ != columns_) throw InvalidParameters("incomplete row in " + path_.string());
    out_ << '\n';
    filled_ = 0;
}

void CsvWriter::close() {
    out_.close();
    if (!out_) throw InvalidParameters("failed writing " + path_.string());
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidParameters("cannot read " + path.string() + " for hashing");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw NumericalFailure("SHA-256 initialisation failed");
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md;
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    std::string hex;
    char byte[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(byte, sizeof byte, "%02x", md[i]);
        hex += byte;
    }
    return hex;
}

Manifest::Manifest(std::string command) {
    doc_["command"] = std::move(command);
    doc_["params"] = nlohmann::ordered_json::object();
    doc_["knobs"] = nlohmann::ordered_json::object();
    doc_["results"] = nlohmann::ordered_json::object();
    doc_["outputs"] = nlohmann::ordered_json::array();
}

void Manifest::add_output(const std::filesystem::path& file) {
    doc_["outputs"].push_back({{"path", file.filename().string()}, {"sha256", sha256_file(file)}});
}

std::filesystem::path Manifest::write(const std::filesystem::path& dir) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
    doc_["timestamp"] = stamp;
    const auto path = dir / (doc_["command"].get<std::string>() + ".manifest.json");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidParameters("cannot open " + path.string() + " for writing");
    out << doc_.dump(2) << '\n';
    return path;
}

} // namespace tpdicke::cli
