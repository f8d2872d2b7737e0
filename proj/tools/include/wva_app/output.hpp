#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace wva::app {

// Value rounded to 12 significant digits, the precision of every emitted number.
double round12(double value);
std::string format12(double value);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row);
    nlohmann::json to_json() const;
};

std::string to_csv(const Table& table);

// Files written through a sink are removed again unless commit() is called.
class OutputSink {
public:
    explicit OutputSink(std::filesystem::path directory);
    ~OutputSink();
    OutputSink(const OutputSink&) = delete;
    OutputSink& operator=(const OutputSink&) = delete;

    void write_text(const std::string& name, const std::string& content);
    void write_table(const std::string& stem, const Table& table, bool csv, bool json);
    void write_json(const std::string& name, const nlohmann::json& value);

    void commit() { committed_ = true; }
    const std::vector<std::filesystem::path>& written() const { return written_; }
    const std::filesystem::path& directory() const { return directory_; }

private:
    std::filesystem::path directory_;
    std::vector<std::filesystem::path> written_;
    bool committed_ = false;
    bool created_ = false;
};

}  // namespace wva::app
