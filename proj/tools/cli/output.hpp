#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace sppal::cli {

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::string name;  // file suffix; empty for the main table
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Metadata {
    std::string command;
    std::string version;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    bool partial = false;
    std::vector<std::string> warnings;
    std::vector<std::string> notes;
    nlohmann::ordered_json config;
};

// Scientific notation with 17 significant digits, independent of the locale.
std::string format_number(double v);

std::string hash_hex(std::uint64_t h);

// Comment lines (#) carry the metadata, including the resolved configuration as compact JSON.
std::string to_csv(const Table& table, const Metadata& meta);
nlohmann::ordered_json to_json(const Table& table, const Metadata& meta);

// Writes <dir>/<command>[-<name>].{csv,json}; returns the paths in write order.
std::vector<std::string> write_tables(const std::string& dir, const std::vector<Table>& tables, const Metadata& meta,
                                      const std::string& format);

}  // namespace sppal::cli
