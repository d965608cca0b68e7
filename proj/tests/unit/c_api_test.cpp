#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pse/c_api.h"
#include "pse/guidance.hpp"
#include "pse/pipeline.hpp"

namespace {
char err[256];
}

TEST(CApi, ScoreSeparatedRectangles) {
  // 2 rows x 4 columns: A on the right half, B on the left half.
  const std::vector<double> a{0, 0, 1, 1, 0, 0, 1, 1};
  const std::vector<double> b{1, 1, 0, 0, 1, 1, 0, 0};
  pse_score_result r{};
  ASSERT_EQ(pse_score_buffers(a.data(), b.data(), 2, 4, "right", nullptr, PSE_DEPTH,
                              PSE_COMBINE_MEAN, 256, &r, err, sizeof err),
            PSE_OK)
      << err;
  EXPECT_EQ(r.pse, 1.0);
  EXPECT_EQ(r.pos_forward, 1.0);
  EXPECT_EQ(r.pos_backward, 0.0);
  EXPECT_EQ(r.present_a, 1);
  EXPECT_EQ(r.center_verdict, 1);
}

TEST(CApi, MatchesCoreOnRandomMasks) {
  std::mt19937_64 rng(601);
  for (int k = 0; k < 20; ++k) {
    const auto a = pse::testing::random_mask(rng, 9, 7);
    const auto b = pse::testing::random_mask(rng, 9, 7);
    pse_score_result r{};
    ASSERT_EQ(pse_score_buffers(a.weights().data(), b.weights().data(), 7, 9, "above_left",
                                nullptr, PSE_DEPTH, PSE_COMBINE_MIN, 256, &r, err, sizeof err),
              PSE_OK);
    pse::EvalOptions o;
    o.pse.combine = pse::Combine::Min;
    const auto core = pse::evaluate_pair(
        a, b, {"a", "b", {pse::RelationKind::Above, pse::RelationKind::Left}, std::nullopt},
        nullptr, o);
    EXPECT_EQ(r.pse, core.pse);
    EXPECT_EQ(r.pos_forward, core.pos_forward);
  }
}

TEST(CApi, EmptyMaskFlagsAbsence) {
  const std::vector<double> a(4, 0.0), b{1, 0, 0, 0};
  pse_score_result r{};
  ASSERT_EQ(pse_score_buffers(a.data(), b.data(), 2, 2, "left", nullptr, PSE_DEPTH,
                              PSE_COMBINE_MEAN, 256, &r, err, sizeof err),
            PSE_OK);
  EXPECT_EQ(r.pse, 0.0);
  EXPECT_EQ(r.present_a, 0);
  EXPECT_EQ(r.present_b, 1);
  EXPECT_EQ(r.center_verdict, -1);
}

TEST(CApi, DepthRelation) {
  const std::vector<double> a{1, 0}, b{0, 1}, depth{0.9, 0.1};
  pse_score_result r{};
  ASSERT_EQ(pse_score_buffers(a.data(), b.data(), 1, 2, "behind", depth.data(), PSE_DEPTH,
                              PSE_COMBINE_MEAN, 256, &r, err, sizeof err),
            PSE_OK);
  EXPECT_EQ(r.pse, 1.0);
  ASSERT_EQ(pse_score_buffers(a.data(), b.data(), 1, 2, "behind", depth.data(), PSE_DISPARITY,
                              PSE_COMBINE_MEAN, 256, &r, err, sizeof err),
            PSE_OK);
  EXPECT_EQ(r.pse, 0.0);
}

TEST(CApi, InputErrors) {
  const std::vector<double> a{1, 0}, b{0, 1};
  pse_score_result r{};
  EXPECT_EQ(pse_score_buffers(a.data(), b.data(), 1, 2, "sideways", nullptr, PSE_DEPTH,
                              PSE_COMBINE_MEAN, 256, &r, err, sizeof err),
            PSE_ERR_INPUT);
  EXPECT_NE(std::string(err).find("sideways"), std::string::npos);
  EXPECT_EQ(pse_score_buffers(a.data(), b.data(), 1, 2, "in_front", nullptr, PSE_DEPTH,
                              PSE_COMBINE_MEAN, 256, &r, err, sizeof err),
            PSE_ERR_INPUT);
  EXPECT_EQ(pse_score_buffers(nullptr, b.data(), 1, 2, "left", nullptr, PSE_DEPTH,
                              PSE_COMBINE_MEAN, 256, &r, err, sizeof err),
            PSE_ERR_INPUT);
  const std::vector<double> nan{std::nan(""), 1.0};
  EXPECT_EQ(pse_score_buffers(nan.data(), b.data(), 1, 2, "left", nullptr, PSE_DEPTH,
                              PSE_COMBINE_MEAN, 256, &r, err, sizeof err),
            PSE_ERR_INPUT);
  // A tiny buffer truncates the message without overflow.
  char small[8];
  EXPECT_EQ(pse_score_buffers(a.data(), b.data(), 1, 2, "sideways", nullptr, PSE_DEPTH,
                              PSE_COMBINE_MEAN, 256, &r, small, sizeof small),
            PSE_ERR_INPUT);
  EXPECT_EQ(std::string(small).size(), 7u);
}

TEST(CApi, PointMassGradient) {
  const std::vector<double> a{0, 1}, b{1, 0};
  double loss = 0.0;
  std::vector<double> ga(2, 9.0), gb(2, 9.0);
  ASSERT_EQ(pse_loss_grad_buffers(a.data(), b.data(), 1, 2, "right", &loss, ga.data(), gb.data(),
                                  err, sizeof err),
            PSE_OK)
      << err;
  EXPECT_EQ(loss, -1.0);
  for (double v : ga) EXPECT_EQ(v, 0.0);
  for (double v : gb) EXPECT_EQ(v, 0.0);
}

TEST(CApi, GradientMatchesCore) {
  std::mt19937_64 rng(607);
  const auto a = pse::testing::random_attention(rng, 6, 5);
  const auto b = pse::testing::random_attention(rng, 6, 5);
  double loss = 0.0;
  std::vector<double> ga(30), gb(30);
  ASSERT_EQ(pse_loss_grad_buffers(a.weights().data(), b.weights().data(), 5, 6, "below", &loss,
                                  ga.data(), gb.data(), err, sizeof err),
            PSE_OK);
  const auto core = pse::pos_loss_grad(a, b, pse::ProjectionAxis::down());
  EXPECT_EQ(loss, core.loss);
  EXPECT_EQ(ga, core.grad_a.values);
  EXPECT_EQ(gb, core.grad_b.values);
}

TEST(CApi, Bandit) {
  double v = 0.0;
  ASSERT_EQ(pse_ucb_value(4, 2.0, 100, 2.0, &v, err, sizeof err), PSE_OK);
  EXPECT_NEAR(v, 0.5 + 2.0 * std::sqrt(std::log(100.0) / 4.0), 1e-15);
  EXPECT_EQ(pse_ucb_value(0, 0.0, 100, 2.0, &v, err, sizeof err), PSE_ERR_INPUT);

  const std::int64_t counts[] = {2, 2};
  const double sums[] = {1.8, 0.2};
  std::size_t arm = 99;
  ASSERT_EQ(pse_select_arm(counts, sums, 2, 2.0, &arm, err, sizeof err), PSE_OK);
  EXPECT_EQ(arm, 0u);
  const std::int64_t fresh[] = {3, 0, 1};
  const double fsums[] = {1.0, 0.0, 1.0};
  ASSERT_EQ(pse_select_arm(fresh, fsums, 3, 2.0, &arm, err, sizeof err), PSE_OK);
  EXPECT_EQ(arm, 1u);
  EXPECT_EQ(pse_select_arm(counts, sums, 0, 2.0, &arm, err, sizeof err), PSE_ERR_INPUT);
}
