#ifndef NFFORGE_PIPELINE_HPP
#define NFFORGE_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nfforge/systemfile.hpp"

namespace nfforge {

struct PipelineOptions {
  std::optional<int> order;
  std::optional<std::vector<double>> radii;
  std::optional<std::uint64_t> seed;
};

// Exit codes: 0 success, 1 hypothesis violation or nonzero obstruction,
// 2 parse error (raised before the pipeline runs), 3 numeric failure.
struct PipelineResult {
  nlohmann::ordered_json report;
  int exit_code = 0;
  std::vector<std::string> warnings;
  // CSV sidecars (filename -> body) produced by verify/report scans.
  std::vector<std::pair<std::string, std::string>> csv_sidecars;
};

// command: classify | invariants | normalize | verify | report.
PipelineResult run_pipeline(const std::string& command, const SystemFile& sf,
                            const PipelineOptions& opts = {});

}  // namespace nfforge

#endif
