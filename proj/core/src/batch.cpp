#include "pse/batch.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "pse/error.hpp"
#include "pse/io.hpp"

namespace pse {

namespace {

std::filesystem::path resolve(const std::string& p, const std::filesystem::path& base) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

}  // namespace

ScoreRecord evaluate_entry(const ManifestEntry& entry, const BatchOptions& options) {
  const MassMap2D a = load_mask(resolve(entry.mask_a, options.base_dir));
  const MassMap2D b = load_mask(resolve(entry.mask_b, options.base_dir));
  std::optional<DepthMap> depth;
  if (entry.depth) {
    depth = load_depth(resolve(*entry.depth, options.base_dir), options.depth_convention);
  }
  ScoreRecord rec =
      evaluate_pair(a, b, entry.relation, depth ? &*depth : nullptr, options.eval);
  rec.prompt_id = entry.prompt_id;
  rec.candidate_id = entry.candidate_id;
  rec.seed = entry.seed;
  return rec;
}

std::vector<std::string> run_batch(const std::vector<std::string>& manifest_lines,
                                   const BatchOptions& options, const std::string& origin) {
  struct Job {
    std::size_t line_no;
    const std::string* text;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < manifest_lines.size(); ++i) {
    if (manifest_lines[i].find_first_not_of(" \t\r") != std::string::npos) {
      jobs.push_back({i + 1, &manifest_lines[i]});
    }
  }
  std::vector<std::string> out(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());

  auto work = [&](std::size_t k) {
    const std::string where = origin + ":" + std::to_string(jobs[k].line_no);
    try {
      out[k] = to_json_line(evaluate_entry(parse_manifest_line(*jobs[k].text, where), options));
    } catch (const Error& e) {
      const std::string msg = std::string(e.what()).starts_with(where)
                                  ? e.what()
                                  : where + ": " + e.what();
      errors[k] = std::make_exception_ptr(Error(msg));
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.parallelism, static_cast<unsigned>(jobs.size())));
  if (workers <= 1) {
    for (std::size_t k = 0; k < jobs.size(); ++k) work(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) work(k);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace pse
