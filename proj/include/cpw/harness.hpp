#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cpw/common.hpp"
#include "cpw/formulas.hpp"
#include "cpw/orders.hpp"
#include "cpw/power.hpp"

namespace cpw::harness {

using cpw::Nat;
using nlohmann::json;

struct ExperimentConfig {
  std::string experiment = "all";
  Nat window_bound = 2000;
  Nat step_budget = 100000;
  Nat tail_window = 8;
  Nat cut = 16;
  Nat stages = 2000;
  Nat seed = 1;
  std::string out_path;

  Horizon horizon() const;
  void validate() const;  // throws std::invalid_argument on a zero field
  json to_json() const;
};

/// key=value lines; '#' comments.  Keys: window, steps, tail, cut, stages,
/// seed, out.  Flags are applied after the file, so they win.
ExperimentConfig apply_config_file(ExperimentConfig base, const std::string& path);

struct CheckRecord {
  std::string name;
  Truth verdict = Truth::Unknown;
  std::string witness;
  bool has_horizon = false;
  Horizon horizon;
  double ms = 0.0;
  std::string error;  // the sub-check threw; never aborts the experiment
};

struct Report {
  int schema = 1;
  std::string experiment;
  ExperimentConfig config;
  std::vector<CheckRecord> checks;

  Nat passed() const;
  Nat failed() const;
  Nat unknown() const;
  Nat errored() const;
  bool all_passed() const { return failed() == 0 && errored() == 0; }
  json to_json() const;  // every Unknown record carries a horizon
};

/// Removes the wall-clock fields so reruns can be compared byte-for-byte.
json strip_timing(json j);

/// A machine whose low slots carry the residue-class halting sets
/// {n : n % k == r} for k = 2..5.  The bare bit numbering's first sixteen
/// c.e. sets are all empty or total, which makes the e-state construction
/// degenerate (nothing ever enumerated); these planted sets give it real
/// decisions, so the resulting complement approximation is genuinely sparse.
pcf::Machine probe_machine();

// --- the order registry ------------------------------------------------------

/// nat | int | rat | nqz | thm4:toy | thm4:simple | lemma5.  `stages` only
/// matters for lemma5, which replays the stage construction over the toy R.
orders::CompOrder order_by_name(const std::string& name, Nat stages = 400);
std::vector<std::string> order_names();

// --- element constructors for the CLI ---------------------------------------

/// const:<n> | id | 2id | prog:<i> | compose:<i>:<j>
power::PowerElement parse_element(power::PowerContext& ctx, const std::string& desc);

// --- the transfer corpus -----------------------------------------------------

struct CorpusEntry {
  std::string name;
  std::string text;
  formulas::FormulaPtr f;
};

/// 20 sentences at or below BC(Sigma1,Pi1) followed by 6 at level two.
std::vector<CorpusEntry> transfer_corpus();

// --- experiments -------------------------------------------------------------

Report exp_properties_lo(const ExperimentConfig& cfg);
Report exp_thm4(const ExperimentConfig& cfg);
Report exp_ma(const ExperimentConfig& cfg);
Report exp_lemma5(const ExperimentConfig& cfg);
Report exp_ftcp(const ExperimentConfig& cfg);

std::vector<std::string> experiment_names();
Report run_experiment(const std::string& name, const ExperimentConfig& cfg);

}  // namespace cpw::harness
