#include "wva_app/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace wva::app {

std::string format12(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

double round12(double value) {
    if (!std::isfinite(value)) return value;
    return std::strtod(format12(value).c_str(), nullptr);
}

void Table::add(std::vector<double> row) {
    if (row.size() != columns.size()) throw std::logic_error("table row width does not match its header");
    rows.push_back(std::move(row));
}

nlohmann::json Table::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (std::isfinite(row[i])) {
                obj[columns[i]] = round12(row[i]);
            } else {
                obj[columns[i]] = nullptr;
            }
        }
        out.push_back(std::move(obj));
    }
    return out;
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format12(row[i]);
        }
        out += '\n';
    }
    return out;
}

OutputSink::OutputSink(std::filesystem::path directory) : directory_(std::move(directory)) {
    std::error_code ec;
    created_ = std::filesystem::create_directories(directory_, ec);
    if (ec) throw std::runtime_error(directory_.string() + ": cannot create output directory: " + ec.message());
}

OutputSink::~OutputSink() {
    if (committed_) return;
    for (const auto& p : written_) {
        std::error_code ec;
        std::filesystem::remove(p, ec);
    }
    std::error_code ec;
    if (created_ && std::filesystem::is_empty(directory_, ec)) std::filesystem::remove(directory_, ec);
}

void OutputSink::write_text(const std::string& name, const std::string& content) {
    const auto target = directory_ / name;
    const auto temp = directory_ / (name + ".partial");
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(temp.string() + ": cannot open for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error(temp.string() + ": write failed");
    }
    std::error_code ec;
    std::filesystem::rename(temp, target, ec);
    if (ec) {
        std::filesystem::remove(temp, ec);
        throw std::runtime_error(target.string() + ": cannot move output into place");
    }
    written_.push_back(target);
}

void OutputSink::write_table(const std::string& stem, const Table& table, bool csv, bool json) {
    if (csv) write_text(stem + ".csv", to_csv(table));
    if (json) write_json(stem + ".json", table.to_json());
}

void OutputSink::write_json(const std::string& name, const nlohmann::json& value) {
    write_text(name, value.dump(2) + "\n");
}

}  // namespace wva::app
