#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pse/batch.hpp"
#include "pse/bench.hpp"
#include "pse/corruption.hpp"
#include "pse/error.hpp"
#include "pse/guidance.hpp"
#include "pse/io.hpp"
#include "pse/jsonl.hpp"
#include "pse/opse.hpp"
#include "pse/parser.hpp"
#include "pse/pipeline.hpp"

namespace pse::cli {

namespace {

struct RunConfig {
  double threshold = kDefaultThreshold;
  int depth_bins = 256;
  std::string depth_convention = "depth";
  std::string combine = "mean";
  double bin_width = 1.0;
  std::string output_path;
  unsigned parallelism = 1;
  std::string config_path;

  DepthConvention convention() const {
    return depth_convention == "disparity" ? DepthConvention::Disparity
                                           : DepthConvention::Depth;
  }

  EvalOptions eval() const {
    EvalOptions o;
    o.pse.combine = combine == "min" ? Combine::Min : Combine::Mean;
    o.pse.bin_width = bin_width;
    o.pse.depth_bins = depth_bins;
    return o;
  }
};

std::string read_text(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Writes to --output when given, otherwise to the data stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw IoError("cannot open '" + path + "' for writing");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }
  void line(const std::string& s) { *out_ << s << '\n'; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

void apply_config_file(RunConfig& cfg, CLI::App& app) {
  if (cfg.config_path.empty()) return;
  std::ifstream f(cfg.config_path);
  if (!f) throw IoError("cannot open config '" + cfg.config_path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(cfg.config_path + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) throw FormatError(cfg.config_path + ": expected a JSON object");
  // Explicit flags and environment variables win over the config file.
  auto unset = [&](const char* flag) { return app.get_option(flag)->count() == 0; };
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "threshold") {
        if (unset("--threshold")) cfg.threshold = value.get<double>();
      } else if (key == "depth_bins") {
        if (unset("--depth-bins")) cfg.depth_bins = value.get<int>();
      } else if (key == "depth_convention") {
        if (unset("--depth-convention")) cfg.depth_convention = value.get<std::string>();
      } else if (key == "combine") {
        if (unset("--combine")) cfg.combine = value.get<std::string>();
      } else if (key == "bin_width") {
        if (unset("--bin-width")) cfg.bin_width = value.get<double>();
      } else if (key == "output") {
        if (unset("--output")) cfg.output_path = value.get<std::string>();
      } else if (key == "parallelism") {
        if (unset("--parallelism")) cfg.parallelism = value.get<unsigned>();
      } else {
        throw FormatError(cfg.config_path + ": unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::type_error& e) {
    throw FormatError(cfg.config_path + ": " + e.what());
  }
}

void validate_config(const RunConfig& cfg) {
  if (!(cfg.threshold >= 0.0 && cfg.threshold <= 1.0)) {
    throw ContractError("threshold must lie in [0, 1]");
  }
  if (cfg.depth_bins < 2) throw ContractError("depth bins must be at least 2");
  if (cfg.depth_convention != "depth" && cfg.depth_convention != "disparity") {
    throw ContractError("depth convention must be 'depth' or 'disparity'");
  }
  if (cfg.combine != "mean" && cfg.combine != "min") {
    throw ContractError("combine must be 'mean' or 'min'");
  }
  if (!(cfg.bin_width > 0.0)) throw ContractError("bin width must be positive");
  if (cfg.parallelism < 1) throw ContractError("parallelism must be at least 1");
}

RelationSpec relation_from_flags(const std::string& kind, const std::string& subject,
                                 const std::string& object, std::optional<double> c) {
  auto kinds = parse_kind_list(kind);
  if (!kinds) throw FormatError("unknown relation '" + kind + "'");
  RelationSpec spec{subject, object, *kinds, c};
  spec.validate();
  return spec;
}

std::string opt_json(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string("null");
}

std::string report_json(const AggregateReport& r) {
  std::string visor = "[";
  for (std::size_t i = 0; i < r.visor.size(); ++i) {
    if (i) visor.push_back(',');
    visor += opt_json(r.visor[i]);
  }
  visor.push_back(']');
  JsonObject o;
  o.add("count", static_cast<std::int64_t>(r.count))
      .add("prompts", static_cast<std::int64_t>(r.prompt_count))
      .add("mean_pse", r.mean_pse)
      .add("mean_pse_conditional", r.mean_pse_conditional)
      .add("object_accuracy", r.object_accuracy)
      .add_raw("visor", visor);
  return o.str();
}

std::string text_cell(const std::optional<double>& v) {
  if (!v) return "undefined";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(4) << *v;
  return ss.str();
}

void print_table(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t w = 0;
  for (const auto& [k, v] : rows) w = std::max(w, k.size());
  for (const auto& [k, v] : rows) {
    os << std::left << std::setw(static_cast<int>(w) + 2) << k << v << '\n';
  }
}

struct Label {
  bool positive = false;
  std::optional<double> score;
};

std::map<std::pair<std::string, std::string>, Label> load_labels(const std::string& path,
                                                                  std::istream& in) {
  std::map<std::pair<std::string, std::string>, Label> labels;
  const auto lines = split_lines(read_text(path, in));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(i + 1);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(lines[i]);
      Label l;
      l.positive = j.at("label").get<bool>();
      if (j.contains("human_score") && !j["human_score"].is_null()) {
        l.score = j["human_score"].get<double>();
      }
      auto id = [&](const char* k) {
        const auto& v = j.at(k);
        return v.is_string() ? v.get<std::string>() : v.dump();
      };
      labels[{id("prompt_id"), id("candidate_id")}] = l;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
  return labels;
}

CorruptionKind corruption_kind(const std::string& s) {
  if (s == "dropout") return CorruptionKind::Dropout;
  if (s == "jitter") return CorruptionKind::Jitter;
  if (s == "opening") return CorruptionKind::Opening;
  throw ContractError("unknown corruption kind '" + s + "'");
}

// ---------------------------------------------------------------------------

struct ScoreArgs {
  std::string line;
  std::string manifest;
  std::string mask_a, mask_b, depth, relation, subject = "a", object = "b";
  std::string prompt_id, candidate_id;
  std::optional<double> c;
};

int cmd_score(const ScoreArgs& a, const RunConfig& cfg, std::istream& in, std::ostream& out) {
  BatchOptions opts{cfg.eval(), cfg.convention(), {}, 1};
  ManifestEntry entry;
  if (!a.line.empty() || !a.manifest.empty()) {
    std::string text = a.line;
    std::string origin = "--line";
    if (text.empty()) {
      origin = a.manifest;
      for (const auto& l : split_lines(read_text(a.manifest, in))) {
        if (l.find_first_not_of(" \t") != std::string::npos) {
          text = l;
          break;
        }
      }
      if (text.empty()) throw FormatError(a.manifest + ": no manifest line");
      if (a.manifest != "-") opts.base_dir = std::filesystem::path(a.manifest).parent_path();
    }
    entry = parse_manifest_line(text, origin);
  } else {
    if (a.mask_a.empty() || a.mask_b.empty() || a.relation.empty()) {
      throw ContractError("score: give --line, --manifest, or --mask-a/--mask-b/--relation");
    }
    entry.prompt_id = a.prompt_id;
    entry.candidate_id = a.candidate_id;
    entry.mask_a = a.mask_a;
    entry.mask_b = a.mask_b;
    if (!a.depth.empty()) entry.depth = a.depth;
    entry.relation = relation_from_flags(a.relation, a.subject, a.object, a.c);
  }
  Sink sink(cfg.output_path, out);
  sink.line(to_json_line(evaluate_entry(entry, opts)));
  return kExitOk;
}

int cmd_batch(const std::string& manifest, const RunConfig& cfg, std::istream& in,
              std::ostream& out) {
  BatchOptions opts{cfg.eval(), cfg.convention(), {}, cfg.parallelism};
  if (manifest != "-") opts.base_dir = std::filesystem::path(manifest).parent_path();
  const auto lines = split_lines(read_text(manifest, in));
  const auto records = run_batch(lines, opts, manifest);
  Sink sink(cfg.output_path, out);
  for (const auto& r : records) sink.line(r);
  return kExitOk;
}

struct GradArgs {
  std::string attn_a, attn_b, relation, out_a, out_b;
};

int cmd_grad(const GradArgs& a, const RunConfig& cfg, std::ostream& out) {
  std::map<std::string, MassMap2D> maps;
  maps.emplace("a", load_attention(a.attn_a));
  maps.emplace("b", load_attention(a.attn_b));
  const RelationSpec spec = relation_from_flags(a.relation, "a", "b", std::nullopt);
  const CombinedGradient g = combined_loss_grad(maps, {spec}, cfg.bin_width);
  if (!a.out_a.empty()) write_pfm(a.out_a, g.grads.at("a"));
  if (!a.out_b.empty()) write_pfm(a.out_b, g.grads.at("b"));
  auto max_abs = [](const RealGrid& grid) {
    double m = 0.0;
    for (double v : grid.values) m = std::max(m, std::abs(v));
    return m;
  };
  JsonObject o;
  o.add_raw("relation", to_json(spec))
      .add("loss", g.loss)
      .add("grad_a_max_abs", max_abs(g.grads.at("a")))
      .add("grad_b_max_abs", max_abs(g.grads.at("b")));
  if (!a.out_a.empty()) o.add("grad_a", a.out_a);
  if (!a.out_b.empty()) o.add("grad_b", a.out_b);
  Sink sink(cfg.output_path, out);
  sink.line(o.str());
  return kExitOk;
}

struct CorruptArgs {
  std::string mask, kind, out_path;
  double param = 0.0;
  std::uint64_t seed = 0;
};

int cmd_corrupt(const CorruptArgs& a, std::ostream& out) {
  const MassMap2D mask = load_mask(a.mask);
  const CorruptionSpec spec{corruption_kind(a.kind), a.param, a.seed};
  const MassMap2D result = corrupt_mask(mask, spec);
  write_mask_pgm(a.out_path, result);
  JsonObject o;
  o.add("kind", a.kind)
      .add("param", a.param)
      .add("seed", static_cast<std::int64_t>(a.seed))
      .add("members_in", static_cast<std::int64_t>(mask.member_count()))
      .add("members_out", static_cast<std::int64_t>(result.member_count()))
      .add("output", a.out_path);
  out << o.str() << '\n';
  return kExitOk;
}

struct ParseArgs {
  std::vector<std::string> prompts;
  std::string relations_file;
  bool from_stdin = false;
};

std::string relations_array(const std::vector<RelationSpec>& specs) {
  std::string arr = "[";
  for (const auto& s : specs) {
    if (arr.size() > 1) arr.push_back(',');
    arr += to_json(s);
  }
  return arr + "]";
}

int cmd_parse(const ParseArgs& a, const RunConfig& cfg, std::istream& in, std::ostream& out,
              std::ostream& err) {
  Sink sink(cfg.output_path, out);
  if (!a.relations_file.empty()) {
    sink.line(relations_array(load_relations(a.relations_file)));
    return kExitOk;
  }
  std::vector<std::string> prompts = a.prompts;
  if (a.from_stdin) {
    for (auto& l : split_lines(read_text("-", in))) {
      if (l.find_first_not_of(" \t") != std::string::npos) prompts.push_back(l);
    }
  }
  for (const auto& p : prompts) {
    const PromptParse parsed = parse_prompt(p);
    for (const auto& d : parsed.diagnostics) err << "parse: " << d << '\n';
    JsonObject o;
    o.add("prompt", p).add_raw("relations", relations_array(parsed.relations));
    sink.line(o.str());
  }
  return kExitOk;
}

struct MetricsArgs {
  std::string records, labels, format = "json";
};

int cmd_metrics(const MetricsArgs& a, const RunConfig& cfg, std::istream& in, std::ostream& out,
                std::ostream& err) {
  const auto records = records_from_jsonl(read_text(a.records, in), a.records);
  const AggregateReport report = aggregate(records, cfg.threshold);
  for (const auto& w : report.warnings) err << "metrics: " << w << '\n';

  std::optional<ClassificationMetrics> cls;
  std::optional<Correlations> cor;
  std::size_t matched = 0;
  if (!a.labels.empty()) {
    const auto labels = load_labels(a.labels, in);
    std::vector<bool> pred_v, truth_v;
    std::vector<double> scores, human;
    for (const auto& r : records) {
      const auto it = labels.find({r.prompt_id, r.candidate_id});
      if (it == labels.end()) continue;
      pred_v.push_back(r.both_present() && pse_binary(r.pse, cfg.threshold));
      truth_v.push_back(it->second.positive);
      scores.push_back(r.pse);
      human.push_back(it->second.score.value_or(it->second.positive ? 1.0 : 0.0));
    }
    matched = pred_v.size();
    if (matched == 0) throw ContractError("metrics: no record matches a label");
    const std::unique_ptr<bool[]> pred(new bool[matched]);
    const std::unique_ptr<bool[]> truth(new bool[matched]);
    std::copy(pred_v.begin(), pred_v.end(), pred.get());
    std::copy(truth_v.begin(), truth_v.end(), truth.get());
    cls = classification_metrics({pred.get(), matched}, {truth.get(), matched});
    if (matched >= 3) cor = correlations(scores, human);
  }

  Sink sink(cfg.output_path, out);
  if (a.format == "text") {
    std::vector<std::pair<std::string, std::string>> rows{
        {"records", std::to_string(report.count)},
        {"prompts", std::to_string(report.prompt_count)},
        {"mean_pse", text_cell(report.mean_pse)},
        {"mean_pse_conditional", text_cell(report.mean_pse_conditional)},
        {"object_accuracy", text_cell(report.object_accuracy)},
    };
    for (std::size_t i = 0; i < report.visor.size(); ++i) {
      rows.emplace_back("visor_" + std::to_string(i + 1), text_cell(report.visor[i]));
    }
    if (cls) {
      rows.emplace_back("labelled", std::to_string(matched));
      rows.emplace_back("precision", text_cell(cls->precision));
      rows.emplace_back("recall", text_cell(cls->recall));
      rows.emplace_back("accuracy", text_cell(cls->accuracy));
      rows.emplace_back("specificity", text_cell(cls->specificity));
      rows.emplace_back("f1", text_cell(cls->f1));
    }
    if (cor) {
      rows.emplace_back("pearson", text_cell(cor->pearson));
      rows.emplace_back("spearman", text_cell(cor->spearman));
      rows.emplace_back("kendall_tau_b", text_cell(cor->kendall));
    }
    print_table(sink.stream(), rows);
    return kExitOk;
  }
  JsonObject o;
  o.add_raw("aggregate", report_json(report)).add("threshold", cfg.threshold);
  if (cls) {
    JsonObject c;
    c.add("n", static_cast<std::int64_t>(matched))
        .add("tp", static_cast<std::int64_t>(cls->tp))
        .add("fp", static_cast<std::int64_t>(cls->fp))
        .add("tn", static_cast<std::int64_t>(cls->tn))
        .add("fn", static_cast<std::int64_t>(cls->fn))
        .add("precision", cls->precision)
        .add("recall", cls->recall)
        .add("accuracy", cls->accuracy)
        .add("specificity", cls->specificity)
        .add("f1", cls->f1);
    o.add_raw("classification", c.str());
  }
  if (cor) {
    JsonObject c;
    c.add("pearson", cor->pearson).add("spearman", cor->spearman).add("kendall", cor->kendall);
    o.add_raw("correlations", c.str());
  }
  sink.line(o.str());
  return kExitOk;
}

int cmd_best_of_n(const std::string& path, const RunConfig& cfg, std::istream& in,
                  std::ostream& out) {
  const auto records = records_from_jsonl(read_text(path, in), path);
  std::map<std::string, std::int64_t> group_size;
  for (const auto& r : records) ++group_size[r.prompt_id];
  Sink sink(cfg.output_path, out);
  if (records.empty()) return kExitOk;
  for (const auto& [prompt, rec] : best_of_n(records)) {
    JsonObject o;
    o.add("prompt_id", prompt)
        .add("candidate_id", rec.candidate_id)
        .add("pse", rec.pse)
        .add("n", group_size[prompt]);
    if (rec.seed) o.add("seed", *rec.seed);
    sink.line(o.str());
  }
  return kExitOk;
}

struct SimArgs {
  std::vector<double> means;
  std::int64_t rounds = 100;
  double alpha = kDefaultExplorationAlpha;
  std::int64_t seeds = 1;
  std::uint64_t seed_base = 0;
  std::string scores = "bernoulli";
  std::string format = "text";
  bool trace = false;
};

int cmd_opse_sim(const SimArgs& a, const RunConfig& cfg, std::ostream& out) {
  if (a.seeds < 1) throw ContractError("opse-sim: --seeds must be at least 1");
  if (a.scores != "bernoulli" && a.scores != "beta") {
    throw ContractError("opse-sim: --scores must be 'bernoulli' or 'beta'");
  }
  SimulationConfig sc;
  sc.arm_means = a.means;
  sc.rounds = a.rounds;
  sc.alpha = a.alpha;
  sc.model = a.scores == "beta" ? ScoreModel::Beta : ScoreModel::Bernoulli;

  Sink sink(cfg.output_path, out);
  std::vector<std::int64_t> plurality_wins(a.means.size(), 0);
  std::vector<double> mean_pulls(a.means.size(), 0.0);
  std::vector<std::vector<std::int64_t>> table;
  for (std::int64_t s = 0; s < a.seeds; ++s) {
    sc.seed = a.seed_base + static_cast<std::uint64_t>(s);
    const SimulationResult r = simulate(sc);
    if (const long p = r.plurality_arm(); p >= 0) ++plurality_wins[static_cast<std::size_t>(p)];
    for (std::size_t i = 0; i < r.pull_counts.size(); ++i) {
      mean_pulls[i] += static_cast<double>(r.pull_counts[i]) / static_cast<double>(a.seeds);
    }
    if (a.format == "json") {
      JsonObject o;
      std::string counts = "[";
      for (std::size_t i = 0; i < r.pull_counts.size(); ++i) {
        if (i) counts.push_back(',');
        counts += std::to_string(r.pull_counts[i]);
      }
      o.add("seed", static_cast<std::int64_t>(sc.seed)).add_raw("pull_counts", counts + "]");
      if (a.trace) {
        std::string tr = "[";
        for (std::size_t i = 0; i < r.trace.size(); ++i) {
          if (i) tr.push_back(',');
          tr += std::to_string(r.trace[i]);
        }
        o.add_raw("trace", tr + "]");
      }
      sink.line(o.str());
    } else {
      table.push_back(r.pull_counts);
    }
  }
  if (a.format == "json") return kExitOk;

  auto& os = sink.stream();
  os << std::left << std::setw(8) << "seed";
  for (std::size_t i = 0; i < a.means.size(); ++i) {
    os << std::right << std::setw(10) << ("arm" + std::to_string(i));
  }
  os << '\n';
  for (std::size_t s = 0; s < table.size(); ++s) {
    os << std::left << std::setw(8) << (a.seed_base + s);
    for (auto c : table[s]) os << std::right << std::setw(10) << c;
    os << '\n';
  }
  os << std::left << std::setw(8) << "mean";
  for (double m : mean_pulls) {
    os << std::right << std::setw(10) << std::fixed << std::setprecision(2) << m;
  }
  os << '\n' << std::left << std::setw(8) << "wins";
  for (auto w : plurality_wins) os << std::right << std::setw(10) << w;
  os << '\n';
  return kExitOk;
}

int cmd_opse_run(std::size_t arms, double alpha, std::istream& in, std::ostream& out) {
  BanditState state(arms, alpha);
  auto emit = [&] {
    JsonObject o;
    o.add("next_arm", static_cast<std::int64_t>(state.select_arm()))
        .add("t", static_cast<std::int64_t>(state.t()));
    out << o.str() << '\n' << std::flush;
  };
  emit();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "stdin:" + std::to_string(line_no);
    std::size_t arm = 0;
    double score = 0.0;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto a = j.at("arm").get<std::int64_t>();
      if (a < 0) throw ContractError(where + ": negative arm");
      arm = static_cast<std::size_t>(a);
      score = j.at("score").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + ": " + e.what());
    }
    try {
      state.update(arm, score);
    } catch (const ContractError& e) {
      throw ContractError(where + ": " + e.what());
    }
    emit();
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Probability-of-superiority spatial relation engine", "pse"};
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--config", cfg.config_path, "JSON file overriding defaults")
      ->envname("PSE_CONFIG");
  app.add_option("--threshold", cfg.threshold, "Binary PSE threshold (inclusive)")
      ->envname("PSE_THRESHOLD");
  app.add_option("--depth-bins", cfg.depth_bins, "Depth quantization levels")
      ->envname("PSE_DEPTH_BINS");
  app.add_option("--depth-convention", cfg.depth_convention, "depth | disparity")
      ->envname("PSE_DEPTH_CONVENTION");
  app.add_option("--combine", cfg.combine, "Composite relation merge: mean | min")
      ->envname("PSE_COMBINE");
  app.add_option("--bin-width", cfg.bin_width, "Projection bin width in pixels")
      ->envname("PSE_BIN_WIDTH");
  app.add_option("-o,--output", cfg.output_path, "Output file (default stdout)")
      ->envname("PSE_OUTPUT");
  app.add_option("--parallelism", cfg.parallelism, "Worker threads for batch")
      ->envname("PSE_PARALLELISM");

  ScoreArgs score_args;
  auto* score = app.add_subcommand("score", "Evaluate one manifest line");
  score->add_option("--line", score_args.line, "Manifest line as JSON text");
  score->add_option("--manifest", score_args.manifest, "Manifest file; its first line is scored");
  score->add_option("--mask-a", score_args.mask_a, "Subject mask (PGM/CSV)");
  score->add_option("--mask-b", score_args.mask_b, "Object mask (PGM/CSV)");
  score->add_option("--depth", score_args.depth, "Depth map (PFM/CSV)");
  score->add_option("--relation", score_args.relation, "Relation kind");
  score->add_option("--subject", score_args.subject);
  score->add_option("--object", score_args.object);
  score->add_option("--prompt-id", score_args.prompt_id);
  score->add_option("--candidate-id", score_args.candidate_id);
  score->add_option("--distance", score_args.c, "Distance constraint c in pixels");

  std::string batch_manifest;
  auto* batch = app.add_subcommand("batch", "Score a JSON-lines manifest");
  batch->add_option("manifest", batch_manifest, "Manifest path or '-' for stdin")->required();

  GradArgs grad_args;
  auto* grad = app.add_subcommand("grad", "-PoS^2 loss and attention-map gradients");
  grad->add_option("--attn-a", grad_args.attn_a, "Subject attention map (PFM/CSV)")->required();
  grad->add_option("--attn-b", grad_args.attn_b, "Object attention map (PFM/CSV)")->required();
  grad->add_option("--relation", grad_args.relation)->required();
  grad->add_option("--out-a", grad_args.out_a, "Write subject gradient (PFM)");
  grad->add_option("--out-b", grad_args.out_b, "Write object gradient (PFM)");

  CorruptArgs corrupt_args;
  auto* corrupt = app.add_subcommand("corrupt", "Apply a mask corruption");
  corrupt->add_option("--mask", corrupt_args.mask)->required();
  corrupt->add_option("--kind", corrupt_args.kind, "dropout | jitter | opening")->required();
  corrupt->add_option("--param", corrupt_args.param)->required();
  corrupt->add_option("--seed", corrupt_args.seed);
  corrupt->add_option("--out", corrupt_args.out_path, "Output PGM")->required();

  ParseArgs parse_args;
  auto* parse = app.add_subcommand("parse", "Extract relations from prompts");
  parse->add_option("prompts", parse_args.prompts, "Prompt texts");
  parse->add_option("--relations", parse_args.relations_file, "Pre-extracted relation file");
  parse->add_flag("--stdin", parse_args.from_stdin, "Read one prompt per stdin line");

  MetricsArgs metrics_args;
  auto* metrics = app.add_subcommand("metrics", "Aggregate ScoreRecords");
  metrics->add_option("records", metrics_args.records, "Records path or '-'")->required();
  metrics->add_option("--labels", metrics_args.labels, "Human labels (JSON-lines)");
  metrics->add_option("--format", metrics_args.format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));

  std::string bon_records;
  auto* bon = app.add_subcommand("best-of-n", "Select the best candidate per prompt");
  bon->add_option("records", bon_records, "Records path or '-'")->required();

  SimArgs sim_args;
  auto* sim = app.add_subcommand("opse-sim", "Simulate UCB model selection");
  sim->add_option("--means", sim_args.means, "Per-arm mean scores")->required()->delimiter(',');
  sim->add_option("--rounds", sim_args.rounds);
  sim->add_option("--alpha", sim_args.alpha);
  sim->add_option("--seeds", sim_args.seeds, "Number of seeds");
  sim->add_option("--seed-base", sim_args.seed_base);
  sim->add_option("--scores", sim_args.scores, "bernoulli | beta");
  sim->add_option("--format", sim_args.format, "text | json")
      ->check(CLI::IsMember({"json", "text"}));
  sim->add_flag("--trace", sim_args.trace, "Include per-round arm trace (json)");

  std::size_t run_arms = 0;
  double run_alpha = kDefaultExplorationAlpha;
  auto* opse_run = app.add_subcommand("opse-run", "Online UCB over a {arm, score} stream");
  opse_run->add_option("--arms", run_arms, "Number of models")->required();
  opse_run->add_option("--alpha", run_alpha);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "pse: " << e.what() << "\n\n" << app.help();
    return kExitInput;
  }

  try {
    apply_config_file(cfg, app);
    validate_config(cfg);
    if (score->parsed()) return cmd_score(score_args, cfg, in, out);
    if (batch->parsed()) return cmd_batch(batch_manifest, cfg, in, out);
    if (grad->parsed()) return cmd_grad(grad_args, cfg, out);
    if (corrupt->parsed()) return cmd_corrupt(corrupt_args, out);
    if (parse->parsed()) return cmd_parse(parse_args, cfg, in, out, err);
    if (metrics->parsed()) return cmd_metrics(metrics_args, cfg, in, out, err);
    if (bon->parsed()) return cmd_best_of_n(bon_records, cfg, in, out);
    if (sim->parsed()) return cmd_opse_sim(sim_args, cfg, out);
    if (opse_run->parsed()) return cmd_opse_run(run_arms, run_alpha, in, out);
  } catch (const Error& e) {
    err << "pse: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "pse: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  err << app.help();
  return kExitInput;
}

}  // namespace pse::cli
