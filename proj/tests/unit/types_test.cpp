#include <gtest/gtest.h>

#include <cmath>

#include "codingsim/types.hpp"

namespace codingsim {
namespace {

TEST(MemoryParamsTest, ReferenceConstantsAreValid) {
  const MemoryParams p{0.3, 0.2, 0.005631, Forgetting::Exponential};
  EXPECT_FALSE(params_error(p));
  EXPECT_NO_THROW(validate(p));
  EXPECT_EQ(p, MemoryParams{});
}

TEST(MemoryParamsTest, ThetaEqualToMuRejected) {
  const auto err = params_error({0.3, 0.3, 0.01, Forgetting::Exponential});
  ASSERT_TRUE(err);
  EXPECT_NE(err->find("theta must be < mu"), std::string::npos) << *err;
  EXPECT_THROW(validate({0.3, 0.3, 0.01, Forgetting::Exponential}), ConfigError);
}

TEST(MemoryParamsTest, TenDayLifetimeParamsValid) {
  EXPECT_FALSE(params_error({0.4, 0.1, 0.005776, Forgetting::Exponential}));
}

TEST(MemoryParamsTest, EachConstraintReported) {
  EXPECT_NE(params_error({0.0, 0.1, 0.1, {}})->find("mu"), std::string::npos);
  EXPECT_NE(params_error({1.5, 0.1, 0.1, {}})->find("mu"), std::string::npos);
  EXPECT_NE(params_error({0.3, 0.0, 0.1, {}})->find("theta must be > 0"), std::string::npos);
  EXPECT_NE(params_error({0.3, 0.2, 0.0, {}})->find("lambda"), std::string::npos);
  EXPECT_NE(params_error({0.3, 0.2, -1.0, {}})->find("lambda"), std::string::npos);
  EXPECT_TRUE(params_error({0.3, 0.2, std::nan(""), {}}));
  EXPECT_FALSE(params_error({1.0, 0.999, 5.0, {}}));
}

TEST(GammaTest, Domain) {
  EXPECT_NO_THROW(Gamma(0.0));
  EXPECT_NO_THROW(Gamma(0.999));
  EXPECT_THROW(Gamma(1.0), ConfigError);
  EXPECT_THROW(Gamma(-0.01), ConfigError);
  EXPECT_THROW(Gamma(std::nan("")), ConfigError);
}

TEST(OpinionTest, LabelsAndMirror) {
  for (Opinion o : {Opinion::A, Opinion::B, Opinion::AB}) {
    EXPECT_EQ(parse_opinion(to_string(o)), o);
    EXPECT_EQ(mirror(mirror(o)), o);
    EXPECT_EQ(to_opinion(to_answer(o)), o);
  }
  EXPECT_EQ(mirror(Opinion::AB), Opinion::AB);
  EXPECT_FALSE(parse_opinion("BA"));
  EXPECT_EQ(to_opinion(Answer::Agree), Opinion::A);
  EXPECT_EQ(to_opinion(Answer::Disagree), Opinion::B);
  EXPECT_EQ(to_opinion(Answer::NotSure), Opinion::AB);
}

TEST(AgentRegistryTest, DenseFirstSeenOrder) {
  AgentRegistry reg;
  EXPECT_EQ(reg.intern("17"), 0u);
  EXPECT_EQ(reg.intern("alice"), 1u);
  EXPECT_EQ(reg.intern("17"), 0u);
  EXPECT_EQ(reg.size(), 2u);
  EXPECT_EQ(reg.name(1), "alice");
  EXPECT_EQ(reg.find("alice"), 1u);
  EXPECT_FALSE(reg.find("bob"));
  EXPECT_THROW(reg.name(2), SimulationError);
}

}  // namespace
}  // namespace codingsim
