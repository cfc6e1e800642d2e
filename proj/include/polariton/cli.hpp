// cli.hpp: run configuration, presets, and the subcommand drivers behind the
// polariton executable. This is the only layer that touches files.

#pragma once

#include "polariton/control.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace polariton::cli {

using Json = nlohmann::json;

enum ExitCode : int {
    ok = 0,
    failure = 1,
    invalid_config = 2,
    convergence_failure = 3,
    design_infeasible = 4
};

// Every recognised key with its default value.
Json default_config();

// Partial configuration for a named preset: fig2, fig3, fig4, fig5, bare.
Json preset(const std::string& name);
std::vector<std::string> preset_names();

// defaults <- preset <- user patch, then type-specific field defaults are filled in and
// the result is checked for unknown keys and invalid values. Throws InvalidParams.
Json resolve_config(const Json& user, const std::optional<std::string>& preset_name = std::nullopt);

SystemParams params_from_config(const Json& config);
PropagationSettings propagation_from_config(const Json& config);
ScanSettings scan_settings_from_config(const Json& config);
ModelBasis model_from_config(const Json& config);
std::vector<double> grid_from_config(const Json& grid);

// Field described by config["field"]; composite fields with phi_plus = "design" are solved.
FieldSpec field_from_config(const Json& config);

Json to_json(const FieldSpec& spec);
FieldSpec field_from_json(const Json& j);
Json to_json(const SystemParams& params);
Json to_json(const ConditionReport& report);

std::uint64_t fnv1a(const std::string& bytes);
std::string code_version();

struct Invocation {
    std::string command;  // simulate | scan | design | oracle
    std::optional<std::filesystem::path> config;
    std::optional<std::string> preset;
    std::filesystem::path out{"out"};
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
};

// Runs one subcommand and returns its exit code; diagnostics go to err.
int run(const Invocation& inv, std::ostream& out, std::ostream& err);

// Parses argv (CLI11) and dispatches to run().
int main_entry(int argc, char** argv);

}  // namespace polariton::cli
