#include "output.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace sppal::cli {
namespace {

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    const std::string& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

nlohmann::ordered_json cell_json(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? nlohmann::ordered_json(*d) : nullptr;
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    return std::get<std::string>(c);
}

nlohmann::ordered_json metadata_json(const Metadata& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["version"] = m.version;
    j["config_hash"] = hash_hex(m.config_hash);
    j["seed"] = m.seed;
    j["status"] = m.partial ? "partial" : "complete";
    j["warnings"] = m.warnings;
    j["notes"] = m.notes;
    j["config"] = m.config;
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    return std::string(buf, r.ptr);
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    const auto r = std::to_chars(buf, buf + sizeof buf, h, 16);
    std::string s(buf, r.ptr);
    return std::string(16 - s.size(), '0') + s;
}

std::string to_csv(const Table& table, const Metadata& meta) {
    std::string out;
    out += "# sppal " + meta.version + "\n";
    out += "# command " + meta.command + (table.name.empty() ? "" : " (" + table.name + ")") + "\n";
    out += "# config_hash fnv1a64:" + hash_hex(meta.config_hash) + "\n";
    out += "# seed " + std::to_string(meta.seed) + "\n";
    out += std::string("# status ") + (meta.partial ? "partial" : "complete") + "\n";
    for (const auto& w : meta.warnings) out += "# warning " + w + "\n";
    for (const auto& n : meta.notes) out += "# note " + n + "\n";
    out += "# config " + meta.config.dump() + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
        out += "\n";
    }
    return out;
}

nlohmann::ordered_json to_json(const Table& table, const Metadata& meta) {
    nlohmann::ordered_json j;
    j["metadata"] = metadata_json(meta);
    j["table"] = table.name.empty() ? meta.command : table.name;
    j["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        auto r = nlohmann::ordered_json::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

std::vector<std::string> write_tables(const std::string& dir, const std::vector<Table>& tables, const Metadata& meta,
                                      const std::string& format) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> paths;
    for (const auto& t : tables) {
        const std::string stem = meta.command + (t.name.empty() ? "" : "-" + t.name);
        if (format == "csv" || format == "both") {
            const auto p = std::filesystem::path(dir) / (stem + ".csv");
            write_file(p, to_csv(t, meta));
            paths.push_back(p.string());
        }
        if (format == "json" || format == "both") {
            const auto p = std::filesystem::path(dir) / (stem + ".json");
            write_file(p, to_json(t, meta).dump(2) + "\n");
            paths.push_back(p.string());
        }
    }
    return paths;
}

}  // namespace sppal::cli
