#pragma once

#include <string>

#include "fpmech/config.hpp"

namespace fpmech {

// File-in/file-out pipeline commands behind the CLI. Exit codes:
// 0 success, 1 fatal, 2 partial (some rows skipped).
int cmd_featurize(const RunConfig& cfg);
int cmd_split(const RunConfig& cfg);
int cmd_eval_random(const RunConfig& cfg, const std::string& condition);
int cmd_eval_homology(const RunConfig& cfg, const std::string& condition,
                      const std::string& bucket_filter = "");
int cmd_ablate(const RunConfig& cfg, const std::string& condition = "");
int cmd_stress(const RunConfig& cfg);
int cmd_report(const RunConfig& cfg);

}  // namespace fpmech
