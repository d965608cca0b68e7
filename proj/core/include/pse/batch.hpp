#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pse/jsonl.hpp"
#include "pse/pipeline.hpp"

namespace pse {

struct BatchOptions {
  EvalOptions eval;
  DepthConvention depth_convention = DepthConvention::Depth;
  /// Relative mask/depth paths resolve against this directory.
  std::filesystem::path base_dir;
  unsigned parallelism = 1;
};

/// Loads the files named by one manifest entry and scores it.
ScoreRecord evaluate_entry(const ManifestEntry& entry, const BatchOptions& options);

/// Scores every non-blank manifest line and returns the ScoreRecord JSON
/// lines in input order, whatever the parallelism. The first failing line
/// aborts the run with its error, prefixed by `origin:line`.
std::vector<std::string> run_batch(const std::vector<std::string>& manifest_lines,
                                   const BatchOptions& options,
                                   const std::string& origin = "<manifest>");

}  // namespace pse
