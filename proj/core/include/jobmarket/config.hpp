#pragma once

#include <string>
#include <utility>
#include <vector>

#include "jobmarket/mechanisms.hpp"
#include "jobmarket/types.hpp"

namespace jobmarket {

/// Market configuration plus the run-level settings that share the
/// config-file namespace.
struct RunOptions {
  MarketConfig market;
  std::string mechanism = "questionnaire";
  int signal_count = 2;
  std::string departments = "synthetic";  // or a CSV path
  std::string out = "out";
  bool diagnostics = false;

  MechanismSpec mechanism_spec() const;
};

/// Every settable key, in a stable order.
const std::vector<std::string>& setting_keys();

/// Sets one key from its textual value. Accepts the aliases reps
/// (replications) and bootstrap (B). Throws ConfigError on unknown keys or
/// malformed values.
void apply_setting(RunOptions& options, const std::string& key, const std::string& value);

/// Reads `key = value` lines; `[section]` headers group keys and do not
/// change their meaning. `#` starts a comment; strings may be quoted; lists
/// are written `[10, 25, 50]`. Throws ParseError with the line number.
void load_config_file(const std::string& path, RunOptions& options);

/// Resolved values as (key, text) pairs in setting_keys() order.
std::vector<std::pair<std::string, std::string>> describe(const RunOptions& options);

std::string learner_name(LearnerKind kind);
std::string ranking_name(RankingMode mode);

}  // namespace jobmarket
