// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "oracles.hpp"
#include "pse/batch.hpp"
#include "pse/bench.hpp"
#include "pse/corruption.hpp"
#include "pse/guidance.hpp"
#include "pse/io.hpp"
#include "pse/opse.hpp"
#include "pse/parser.hpp"
#include "pse/pipeline.hpp"
#include "pse/pos.hpp"

#ifdef PSE_HAVE_CLI
#include "cli.hpp"
#endif

namespace {

using namespace pse;
namespace pt = pse::testing;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

DiscreteDistribution1D from_pmf(const pt::Pmf& p) {
  const auto lo = p.begin()->first;
  std::vector<double> w(static_cast<std::size_t>(p.rbegin()->first - lo + 1), 0.0);
  for (const auto& [i, m] : p) w[static_cast<std::size_t>(i - lo)] = m;
  return DiscreteDistribution1D::from_weights(lo, std::move(w));
}

RelationSpec rel(RelationKind k) { return {"a", "b", {k}, std::nullopt}; }

constexpr RelationKind kPlanar[] = {RelationKind::Left, RelationKind::Right, RelationKind::Above,
                                    RelationKind::Below};

std::vector<std::pair<pt::Pmf, pt::Pmf>> distribution_pairs() {
  std::mt19937_64 rng(20240101);
  std::vector<std::pair<pt::Pmf, pt::Pmf>> pairs;
  for (int k = 0; k < 1000; ++k) {
    pt::Pmf a = pt::random_pmf(rng, 32);
    pt::Pmf b = pt::random_pmf(rng, 32);
    pairs.emplace_back(std::move(a), std::move(b));
  }
  return pairs;
}

// ---------------------------------------------------------------------------

Outcome eq3_oracle() {
  const auto pairs = distribution_pairs();
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& [a, b] : pairs) {
    const double got = pos_discrete(from_pmf(a), from_pmf(b));
    worst = std::max(worst, std::abs(got - pt::brute_pos(a, b)));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 1.0,
          "1000 pairs, max |err| " + fmt("%.3g", worst) + " (tol 1e-12), " + fmt("%.3f", secs) +
              " s (limit 1 s)"};
}

Outcome tie_convention() {
  const auto pairs = distribution_pairs();
  double worst = 0.0;
  for (const auto& [a, b] : pairs) {
    const auto da = from_pmf(a);
    const auto db = from_pmf(b);
    const double inclusive = std::max(0.0, pos_discrete(da, db) - pos_discrete(db, da));
    const double half = std::max(0.0, pt::half_tie_pos(a, b) - pt::half_tie_pos(b, a));
    worst = std::max(worst, std::abs(inclusive - half));
  }
  // The same check on 2D masks through the projected pipeline.
  std::mt19937_64 rng(77);
  for (int k = 0; k < 200; ++k) {
    const auto a = pt::random_mask(rng, 20, 14);
    const auto b = pt::random_mask(rng, 20, 14);
    for (auto kind : kPlanar) {
      worst = std::max(worst, std::abs(pse::pse(a, b, rel(kind)) - pt::oracle_pse_half_tie(a, b, kind)));
    }
  }
  return {worst <= 1e-12,
          "1000 distribution pairs + 200 mask pairs, max |inclusive - half-tie| " +
              fmt("%.3g", worst) + " (tol 1e-12)"};
}

Outcome symmetry() {
  std::mt19937_64 rng(4242);
  const double s = std::sqrt(0.5);
  const std::vector<ProjectionAxis> axes{ProjectionAxis::right(), ProjectionAxis::left(),
                                         ProjectionAxis::up(),    ProjectionAxis::down(),
                                         ProjectionAxis(s, s),    ProjectionAxis(s, -s)};
  double worst_sum = 0.0;
  int inverse_mismatch = 0;
  int mirror_mismatch = 0;
  for (int k = 0; k < 500; ++k) {
    std::uniform_int_distribution<int> dim(4, 28);
    const int w = dim(rng);
    const int h = dim(rng);
    const auto a = pt::random_mask(rng, w, h);
    const auto b = pt::random_mask(rng, w, h);
    for (const auto& v : axes) {
      const double fwd = pos_projected(a, b, v);
      const double bwd = pos_projected(a, b, v.negated());
      const double ties = tie_mass(project_mass_map(a, v), project_mass_map(b, v));
      worst_sum = std::max(worst_sum, std::abs(fwd + bwd - (1.0 + ties)));
    }
    for (auto kind : kPlanar) {
      if (pse::pse(a, b, rel(kind)) != pse::pse(b, a, rel(inverse(kind)))) ++inverse_mismatch;
    }
    const auto fa = a.flipped_horizontal();
    const auto fb = b.flipped_horizontal();
    if (pse::pse(fa, fb, rel(RelationKind::Left)) != pse::pse(a, b, rel(RelationKind::Right)) ||
        pse::pse(fa, fb, rel(RelationKind::Right)) != pse::pse(a, b, rel(RelationKind::Left))) {
      ++mirror_mismatch;
    }
  }
  // Depth relations: PSE(A,B;in_front) = PSE(B,A;behind).
  std::uniform_real_distribution<double> dv(0.0, 20.0);
  for (int k = 0; k < 100; ++k) {
    const auto a = pt::random_mask(rng, 12, 12);
    const auto b = pt::random_mask(rng, 12, 12);
    std::vector<double> vals(144);
    for (auto& x : vals) x = dv(rng);
    const DepthMap depth(12, 12, vals);
    if (pse_3d(a, b, depth, rel(RelationKind::InFront)) !=
            pse_3d(b, a, depth, rel(RelationKind::Behind)) ||
        pse_3d(a, b, depth, rel(RelationKind::Behind)) !=
            pse_3d(b, a, depth, rel(RelationKind::InFront))) {
      ++inverse_mismatch;
    }
  }
  return {worst_sum <= 1e-9 && inverse_mismatch == 0 && mirror_mismatch == 0,
          "500 mask pairs x 6 axes, max |PoS_v + PoS_-v - 1 - tie| " + fmt("%.3g", worst_sum) +
              " (tol 1e-9); inverse mismatches " + std::to_string(inverse_mismatch) +
              ", mirror mismatches " + std::to_string(mirror_mismatch) + " (exact)"};
}

Outcome gradient_check() {
  std::mt19937_64 rng(9001);
  std::uniform_int_distribution<int> dim(8, 32);
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int w = dim(rng);
    const int h = dim(rng);
    const auto a = pt::random_attention(rng, w, h);
    const auto b = pt::random_attention(rng, w, h);
    const RelationKind kind = kPlanar[k % 4];
    const auto r = pos_loss_grad(a, b, canonical_axis(kind));
    const auto fd = pt::fd_gradient(a, b, kind, 1e-6);
    worst = std::max(worst, pt::normwise_rel_error(r.grad_a.values, fd.grad_a));
    worst = std::max(worst, pt::normwise_rel_error(r.grad_b.values, fd.grad_b));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-4 && secs < 30.0,
          "100 pairs 8x8..32x32, eps 1e-6, max rel err " + fmt("%.3g", worst) +
              " (tol 1e-4), " + fmt("%.2f", secs) + " s (limit 30 s)"};
}

// A fully separated pair: B occupies columns [bx, bx+bw), A starts `gap`
// columns after it.
struct Separated {
  MassMap2D a;
  MassMap2D b;
};

Separated separated(int gap, int variant) {
  const int w = 64;
  const int h = 24;
  const int bx = 2 + variant % 5;
  const int bw = 6 + variant % 7;
  const int aw = 5 + variant % 4;
  const int ax = bx + bw + gap;
  return {pt::rect_mask(w, h, ax, 3 + variant % 3, ax + aw, 20),
          pt::rect_mask(w, h, bx, 1, bx + bw, 22 - variant % 4)};
}

bool all_zero(const RealGrid& g) {
  for (double v : g.values) {
    if (v != 0.0) return false;
  }
  return true;
}

bool zero_on_support(const RealGrid& g, const MassMap2D& m) {
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    if (m.weights()[i] > 0.0 && g.values[i] != 0.0) return false;
  }
  return true;
}

Outcome saturation() {
  int failures = 0;
  bool raw_all_zero = true;
  for (int variant = 0; variant < 10; ++variant) {
    for (int gap = 0; gap < 20; ++gap) {
      const auto f = separated(gap, variant);
      const auto rec = evaluate_pair(f.a, f.b, rel(RelationKind::Right));
      const auto g = pos_loss_grad(f.a, f.b, ProjectionAxis::right());
      const bool ok = rec.pse == 1.0 && g.loss == -1.0 && zero_on_support(g.grad_a, f.a) &&
                      zero_on_support(g.grad_b, f.b) &&
                      all_zero(projected_gradient(g.grad_a, f.a)) &&
                      all_zero(projected_gradient(g.grad_b, f.b));
      if (!ok) ++failures;
      raw_all_zero = raw_all_zero && all_zero(g.grad_a) && all_zero(g.grad_b);
    }
  }
  // Point masses in a two-column frame: the whole raw gradient vanishes.
  const auto pm = pos_loss_grad(MassMap2D(2, 1, {0, 1}), MassMap2D(2, 1, {1, 0}),
                                ProjectionAxis::right());
  const bool point_ok = pm.loss == -1.0 && all_zero(pm.grad_a) && all_zero(pm.grad_b);
  return {failures == 0 && point_ok,
          "10 fixtures x 20 translations: PSE = 1 and loss = -1 exactly, gradient exactly 0 on "
          "every mask pixel and nonnegativity-projected gradient exactly 0 everywhere; failures " +
              std::to_string(failures) + "; point-mass raw gradient all zero: " +
              (point_ok ? "yes" : "no") + "; raw gradient zero off-support too: " +
              (raw_all_zero ? "yes" : "no (only growth directions at empty pixels)")};
}

Outcome dog_tree() {
  int failures = 0;
  double worst = 0.0;
  for (int v = 0; v < 10; ++v) {
    const auto f = pt::dog_tree_fixture(v);
    const RelationSpec r{"dog", "tree", {RelationKind::Right}, std::nullopt};
    const auto rec = evaluate_pair(f.dog, f.tree, r);
    const double oracle = pt::oracle_pse(f.dog, f.tree, RelationKind::Right);
    worst = std::max(worst, rec.pse);
    if (!(rec.center_verdict == true && rec.pse < 0.25 && std::abs(rec.pse - oracle) <= 1e-12)) {
      ++failures;
    }
  }
  return {failures == 0, "10 variants: center baseline true, max PSE " + fmt("%.4f", worst) +
                             " (limit < 0.25), matches brute-force oracle; failures " +
                             std::to_string(failures)};
}

Outcome robustness() {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> size(20, 60), gap(-10, 30), cross(0, 50);
  constexpr int kFrame = 128;
  double delta[3] = {0.0, 0.0, 0.0};
  const CorruptionKind kinds[3] = {CorruptionKind::Dropout, CorruptionKind::Jitter,
                                   CorruptionKind::Opening};
  const double params[3] = {0.10, 5.0, 1.0};
  for (int k = 0; k < 100; ++k) {
    const int la = size(rng), lb = size(rng), ta = size(rng), tb = size(rng);
    const int g = gap(rng);
    int lead = 4 + lb + g;
    if (lead + la > kFrame - 2) lead = kFrame - 2 - la;
    const int ca = cross(rng) + 4, cb = cross(rng) + 4;
    // Along-axis extent [4, 4+lb) for B and [lead, lead+la) for A.
    MassMap2D a = pt::rect_mask(kFrame, kFrame, lead, ca, lead + la, std::min(kFrame, ca + ta));
    MassMap2D b = pt::rect_mask(kFrame, kFrame, 4, cb, 4 + lb, std::min(kFrame, cb + tb));
    RelationKind kind = RelationKind::Right;
    switch (k % 4) {
      case 1: a = a.flipped_horizontal(), b = b.flipped_horizontal(), kind = RelationKind::Left; break;
      case 2: {
        // Transpose, then flip vertically so A sits above B.
        auto transpose = [](const MassMap2D& m) {
          MassMap2D t = MassMap2D::zeros(m.height(), m.width());
          for (int y = 0; y < m.height(); ++y) {
            for (int x = 0; x < m.width(); ++x) t.set(y, x, m.at(x, y));
          }
          return t;
        };
        a = transpose(a).flipped_vertical();
        b = transpose(b).flipped_vertical();
        kind = RelationKind::Above;
        break;
      }
      case 3: {
        auto transpose = [](const MassMap2D& m) {
          MassMap2D t = MassMap2D::zeros(m.height(), m.width());
          for (int y = 0; y < m.height(); ++y) {
            for (int x = 0; x < m.width(); ++x) t.set(y, x, m.at(x, y));
          }
          return t;
        };
        a = transpose(a);
        b = transpose(b);
        kind = RelationKind::Below;
        break;
      }
      default: break;
    }
    const double base = pse::pse(a, b, rel(kind));
    for (int c = 0; c < 3; ++c) {
      const auto seed = static_cast<std::uint64_t>(1000 * c + 2 * k);
      const auto ca2 = corrupt_mask(a, {kinds[c], params[c], seed});
      const auto cb2 = corrupt_mask(b, {kinds[c], params[c], seed + 1});
      delta[c] += std::abs(pse::pse(ca2, cb2, rel(kind)) - base) / 100.0;
    }
  }
  const bool pass = delta[0] < 0.02 && delta[1] < 0.05 && delta[2] < 0.02;
  return {pass, "100 pairs, mean |dPSE|: dropout 10% " + fmt("%.5f", delta[0]) +
                    " (< 0.02), jitter 5 px " + fmt("%.5f", delta[1]) +
                    " (< 0.05), opening 1 iter " + fmt("%.5f", delta[2]) + " (< 0.02)"};
}

Outcome opse() {
  const auto t0 = Clock::now();
  int wins = 0;
  double best_pulls = 0.0;
  for (int s = 0; s < 100; ++s) {
    SimulationConfig c;
    c.arm_means = {0.6589, 0.2607, 0.2034};
    c.rounds = 100;
    c.alpha = 2.0;
    c.seed = static_cast<std::uint64_t>(s);
    const auto r = simulate(c);
    if (r.plurality_arm() == 0) ++wins;
    best_pulls += static_cast<double>(r.pull_counts[0]) / 100.0;
  }
  const double secs = seconds_since(t0);
  return {wins >= 95 && secs < 5.0,
          "100 seeds, best arm strict plurality in " + std::to_string(wins) +
              " (need >= 95), mean pulls of best arm " + fmt("%.2f", best_pulls) + ", " +
              fmt("%.3f", secs) + " s (limit 5 s)"};
}

Outcome metric_harness() {
  // 20 items: TP 7, FP 3, TN 6, FN 4, interleaved.
  const int pred_i[20] = {1, 0, 1, 1, 0, 0, 1, 1, 0, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0};
  const int truth_i[20] = {1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 0};
  bool pred[20], truth[20];
  int tp = 0, fp = 0, tn = 0, fn = 0;
  for (int i = 0; i < 20; ++i) {
    pred[i] = pred_i[i] != 0;
    truth[i] = truth_i[i] != 0;
  }
  // Hand tally of the fixture above.
  tp = 7, fp = 3, tn = 6, fn = 4;
  const auto m = classification_metrics({pred, 20}, {truth, 20});
  bool cls_ok = m.tp == static_cast<std::size_t>(tp) && m.fp == static_cast<std::size_t>(fp) &&
                m.tn == static_cast<std::size_t>(tn) && m.fn == static_cast<std::size_t>(fn) &&
                m.precision == 7.0 / 10.0 && m.recall == 7.0 / 11.0 &&
                m.accuracy == 13.0 / 20.0 && m.specificity == 6.0 / 9.0 &&
                m.f1 == 14.0 / 21.0;

  struct Fixture {
    std::vector<double> x, y;
    double pearson, spearman, kendall;
  };
  const std::vector<Fixture> fixtures{
      {{1, 2, 3}, {2, 4, 6}, 1.0, 1.0, 1.0},
      {{1, 2, 3}, {6, 4, 2}, -1.0, -1.0, -1.0},
      // 5 concordant, 1 discordant pair; covariance 4 over variance 5.
      {{1, 2, 3, 4}, {1, 3, 2, 4}, 0.8, 0.8, 2.0 / 3.0},
      // One tie in each variable: C = 4, D = 0, tau-b = 4/5; mid-ranks give 5/6.
      {{1, 1, 2, 3}, {1, 2, 2, 3}, 2.0 / std::sqrt(5.5), 5.0 / 6.0, 0.8},
      // Two adjacent swaps: C = 8, D = 2.
      {{1, 2, 3, 4, 5}, {2, 1, 4, 3, 5}, 0.8, 0.8, 0.6},
  };
  double worst = 0.0;
  bool defined = true;
  for (const auto& f : fixtures) {
    const auto c = correlations(f.x, f.y);
    if (!c.pearson || !c.spearman || !c.kendall) {
      defined = false;
      continue;
    }
    worst = std::max({worst, std::abs(*c.pearson - f.pearson), std::abs(*c.spearman - f.spearman),
                      std::abs(*c.kendall - f.kendall)});
  }
  const bool pass = cls_ok && defined && worst <= 1e-12;
  return {pass, std::string("20-item confusion matrix exact: ") + (cls_ok ? "yes" : "no") +
                    "; 5 correlation fixtures max |err| " + fmt("%.3g", worst) + " (tol 1e-12)"};
}

Outcome parser() {
  const auto corpus = pt::prompt_corpus();
  int extracted = 0;
  for (const auto& item : corpus) {
    if (parse_prompt(item.prompt).relations == item.expected) ++extracted;
  }
  std::mt19937_64 rng(555);
  int round_trips = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto s = pt::random_spec(rng);
    const auto back = parse_prompt(render_prompt(s)).relations;
    if (back.size() == 1 && back[0] == s) ++round_trips;
  }
  return {extracted == 100 && round_trips == 1000,
          "corpus " + std::to_string(extracted) + "/100 extracted, round-trip " +
              std::to_string(round_trips) + "/1000"};
}

Outcome determinism() {
  const auto dir = pt::fresh_temp_dir("acceptance");
  std::mt19937_64 rng(8080);
  for (int i = 0; i < 16; ++i) {
    write_mask_pgm(dir / ("m" + std::to_string(i) + ".pgm"), pt::random_mask(rng, 48, 32));
  }
  RealGrid depth(48, 32);
  std::uniform_real_distribution<double> u(0.5, 30.0);
  for (auto& v : depth.values) v = u(rng);
  write_pfm(dir / "depth.pfm", depth);
  const char* kinds[] = {"left", "right", "above", "below", "above_left", "below_right",
                         "in_front", "behind"};
  std::string manifest;
  std::vector<std::string> lines;
  for (int i = 0; i < 64; ++i) {
    const std::string kind = kinds[i % 8];
    std::string l = R"({"prompt_id":"p)" + std::to_string(i / 4) + R"(","candidate_id":"c)" +
                    std::to_string(i) + R"(","seed":)" + std::to_string(i % 4) + R"(,"mask_a":"m)" +
                    std::to_string(i % 16) + R"(.pgm","mask_b":"m)" +
                    std::to_string((i * 3 + 5) % 16) + R"(.pgm",)";
    if (i % 8 >= 6) l += R"("depth":"depth.pfm",)";
    l += R"("relation":{"subject":"s","object":"o","kind":")" + kind + R"("}})";
    lines.push_back(l);
    manifest += l + "\n";
  }
  std::ofstream(dir / "manifest.jsonl") << manifest;

  auto library_run = [&](unsigned p) {
    BatchOptions o;
    o.base_dir = dir;
    o.parallelism = p;
    std::string out;
    for (const auto& r : run_batch(lines, o)) out += r + "\n";
    return out;
  };
  const std::string ref = library_run(1);
  bool same = !ref.empty() && library_run(1) == ref && library_run(4) == ref;
  std::string via = "library";
#ifdef PSE_HAVE_CLI
  auto cli_run = [&](const std::string& p) {
    std::istringstream in;
    std::ostringstream out, err;
    const int code = pse::cli::run({"--parallelism", p, "batch",
                                    (dir / "manifest.jsonl").string()},
                                   in, out, err);
    return code == 0 ? out.str() : std::string("exit ") + std::to_string(code) + err.str();
  };
  same = same && cli_run("1") == ref && cli_run("1") == ref && cli_run("4") == ref;
  via = "library and CLI";
#endif
  std::filesystem::remove_all(dir);
  return {same, "64-line manifest via " + via + ", repeated runs and parallelism 1 vs 4: " +
                    (same ? "byte-identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"eq3_oracle", eq3_oracle},
      {"tie_convention_equivalence", tie_convention},
      {"symmetry_suite", symmetry},
      {"gradient_check", gradient_check},
      {"saturation", saturation},
      {"center_baseline_divergence", dog_tree},
      {"robustness", robustness},
      {"opse_reproduction", opse},
      {"metric_harness", metric_harness},
      {"parser", parser},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s  %-28s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
