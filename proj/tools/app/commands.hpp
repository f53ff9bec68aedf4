#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenario.hpp"

namespace ppcorr::app {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Result of one subcommand: tabular data plus a JSON summary for metadata.
struct CommandOutput {
    std::string command;
    Table table;
    nlohmann::json summary = nlohmann::json::object();
};

enum class Format { kCsv, kJson };

Format format_from_string(const std::string& name);

CommandOutput cmd_zeta(const Scenario& s);
CommandOutput cmd_weights(const Scenario& s);
CommandOutput cmd_split(const Scenario& s);
CommandOutput cmd_ccdf(const Scenario& s);
CommandOutput cmd_figure1(const Scenario& s);
CommandOutput cmd_figure2(const Scenario& s);
CommandOutput cmd_figure3(const Scenario& s);
CommandOutput cmd_mrc(const Scenario& s);
CommandOutput cmd_simulate(const Scenario& s);

/// Dispatch by subcommand name. Throws InvalidArgument on an unknown name.
CommandOutput run_command(const std::string& name, const Scenario& s);

/// Run metadata: command, library version and the resolved config.
nlohmann::json metadata(const CommandOutput& out, const Scenario& s);

/// Doubles use 12 significant digits; NaN is written as "nan".
void write_csv(std::ostream& os, const Table& table);

/// {"metadata": ..., "columns": [...], "rows": [[...], ...]}; NaN becomes null.
nlohmann::json to_json(const CommandOutput& out, const Scenario& s);

std::string render(const CommandOutput& out, const Scenario& s, Format format);

}  // namespace ppcorr::app
