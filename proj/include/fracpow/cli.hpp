#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracpow/stepper.hpp"

namespace fracpow::cli {

enum class Command { Roots, Spectrum, Gamma, ApproxError, Converge, Mesh };

std::string to_string(Command c);
Command parse_command(const std::string& name);  // ParameterError on unknown names

// Raw key=value settings as given in a run file or on the command line; keys
// are the long flag names without dashes.
using Settings = std::map<std::string, std::string>;

// Reads a run file: one key=value per line, '#' starts a comment, blank lines
// ignored. ParseError with the line number on malformed lines.
Settings read_settings(std::istream& in);
Settings read_settings(const std::filesystem::path& path);

struct ExperimentConfig {
  Command command = Command::Roots;
  std::vector<double> g;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::optional<double> mu;  // empty means auto
  std::vector<std::size_t> M;
  std::vector<std::size_t> N;
  std::vector<std::size_t> k;  // root indices (roots)
  std::vector<int> levels;
  double sigma = 1.0;
  double nu = 0.0;
  double final_time = 0.25;
  double zmin = 0.0;  // 0 means mu
  double zmax = 1e5;
  std::size_t samples = 200;
  SchemeKind scheme = SchemeKind::Explicit;
  std::string out;  // empty means stdout

  // Fully resolved configuration as key=value pairs, in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

// Applies the per-command defaults and validates every value; ParameterError
// on anything outside its domain or not applicable to the command.
ExperimentConfig resolve(Command command, const Settings& settings);

// Number formatting used in every CSV: 12 significant digits.
std::string fmt(double v);

// Each command writes CSV to `csv` (starting with '#' comment lines carrying
// the configuration) and progress or summary lines to `log`.
void cmd_roots(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);
void cmd_spectrum(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);
void cmd_gamma(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);
void cmd_approx_error(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);
void cmd_converge(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);
void cmd_mesh(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log);

void run(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

// Full command-line entry point: parses argv, merges --config, runs, writes to
// --out or `out`, reports errors on `err` and returns the exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracpow::cli
