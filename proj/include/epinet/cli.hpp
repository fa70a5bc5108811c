#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace epinet::cli {

/// Resolved settings of one invocation: defaults, then the --config file,
/// then flags. Keys use underscores (k_avg); flags use dashes (--k-avg).
struct Settings {
  std::string command;
  std::vector<std::pair<std::string, std::string>> values;  // table order

  const std::string& get(const std::string& key) const;
  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
};

/// Keys accepted by a subcommand, in output order. Empty for an unknown one.
std::vector<std::string> keys_for(const std::string& command);

/// Defaults of a subcommand, the reference experiment's values.
Settings defaults_for(const std::string& command);

/// Parses "key = value" lines; '#' starts a comment. Throws ConfigError on
/// a malformed line.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::istream& in);

/// Overlays file entries on `settings`, rejecting keys the command lacks.
void apply_config(Settings& settings, const std::vector<std::pair<std::string, std::string>>& entries);

/// "command=<name>" followed by every key=value, one per line.
std::string render_resolved(const Settings& settings);

/// Entry point; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace epinet::cli
