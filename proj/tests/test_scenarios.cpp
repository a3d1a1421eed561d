#include <gtest/gtest.h>

#include <map>
#include <string>
#include <vector>

#include "somas/error.hpp"
#include "somas/scenarios.hpp"
#include "test_util.hpp"

namespace somas {
namespace {

using Registrations = std::map<std::string, std::string>;  // user -> middle

Registrations registrations(const Somas& m, const CommunityConfig& cfg, StateId q) {
  Registrations out;
  for (const auto& u : cfg.users) {
    for (const auto& mid : cfg.middles) {
      auto p = m.find_prop("reg(" + u + "," + mid + ")");
      if (p && m.labeled(q, *p)) out[u] = mid;
    }
  }
  return out;
}

// Registration maps the protocol passes through: a query between users at
// different middles first drops the target, then re-registers it with the
// requester's middle.
std::vector<Registrations> protocol_oracle(const CommunityConfig& cfg) {
  std::vector<Registrations> out{Registrations(cfg.initial.begin(), cfg.initial.end())};
  for (const auto& step : cfg.schedule) {
    Registrations r = out.back();
    if (r[step.requester] == r[step.target]) continue;
    std::string home = r[step.requester];
    r.erase(step.target);
    out.push_back(r);
    r[step.target] = home;
    out.push_back(r);
  }
  return out;
}

std::vector<Registrations> along_star(const Somas& m, const CommunityConfig& cfg, StateId q) {
  Lasso l = star_computation(m, q);
  std::vector<StateId> path = l.prefix;
  path.insert(path.end(), l.cycle.begin(), l.cycle.end());
  std::vector<Registrations> out;
  for (StateId s : path) {
    Registrations r = registrations(m, cfg, s);
    if (out.empty() || out.back() != r) out.push_back(r);
  }
  return out;
}

TEST(Scenarios, AllValidate) {
  for (std::int64_t u1 = 0; u1 < 4; ++u1) {
    for (std::int64_t u2 = 0; u2 < 4; ++u2) {
      EXPECT_TRUE(validate(two_trains(u1, u2)).empty());
      EXPECT_TRUE(validate(two_trains_strict(u1, u2)).empty());
    }
  }
  EXPECT_TRUE(validate(task_delegation()).empty());
  EXPECT_TRUE(validate(community_model(example_community_config())).empty());
  EXPECT_TRUE(validate(testing::two_train_pairs()).empty());
  EXPECT_TRUE(validate(testing::overlapping_contributors()).empty());
}

TEST(Scenarios, TwoTrainsStarComputationByUrgency) {
  for (std::int64_t u1 = 0; u1 < 4; ++u1) {
    for (std::int64_t u2 = 0; u2 < 4; ++u2) {
      Somas m = two_trains(u1, u2);
      Lasso l = star_computation(m, m.state("q0"));
      ASSERT_EQ(l.prefix.size(), 2u);
      EXPECT_EQ(m.state_name(l.prefix[1]), u1 >= u2 ? "q2" : "q1");
      EXPECT_EQ(m.state_name(l.cycle.front()), "q3");

      Somas strict = two_trains_strict(u1, u2);
      Lasso s = star_computation(strict, strict.state("q0"));
      EXPECT_EQ(strict.state_name(s.cycle.front()), u1 == u2 ? "q0" : "q3");
    }
  }
}

TEST(Scenarios, TaskDelegationStarComputationFinishes) {
  Somas m = task_delegation();
  Lasso l = star_computation(m, m.state("q0"));
  ASSERT_EQ(l.cycle.size(), 1u);
  EXPECT_EQ(m.state_name(l.cycle.front()), "q31");
  // a and e in round one, then b and d, then c.
  std::vector<std::string> prefix;
  for (StateId s : l.prefix) prefix.push_back(m.state_name(s));
  EXPECT_EQ(prefix, (std::vector<std::string>{"q0", "q17", "q27"}));
}

TEST(Community, StarComputationFollowsProtocol) {
  CommunityConfig cfg = example_community_config();
  Somas m = community_model(cfg);
  auto got = along_star(m, cfg, m.state("q0"));
  auto expected = protocol_oracle(cfg);
  EXPECT_EQ(got, expected);
  ASSERT_EQ(expected.size(), 5u);
  EXPECT_EQ(expected.back(), (Registrations{{"u1", "m1"}, {"u2", "m1"}, {"u3", "m3"}, {"u4", "m3"}}));
}

TEST(Community, OtherSchedulesFollowProtocol) {
  CommunityConfig cfg = example_community_config();
  cfg.schedule = {{"u4", "u1", false}, {"u2", "u3", true}, {"u3", "u2", false}, {"u1", "u2", false}};
  cfg.interests = {{"u1", {"u2"}}, {"u4", {"u1"}}, {"u2", {"u3"}}, {"u3", {"u2"}}};
  Somas m = community_model(cfg);
  EXPECT_TRUE(validate(m).empty());
  EXPECT_EQ(along_star(m, cfg, m.state("q0")), protocol_oracle(cfg));
}

TEST(Community, EvalCom) {
  CommunityConfig cfg = example_community_config();
  Somas m = community_model(cfg);
  Lasso l = star_computation(m, m.state("q0"));
  StateId first = m.state("q0");
  StateId last = l.cycle.front();
  ComAtom pair12{{"u1", "u2"}, {"m1"}};
  ComAtom pair34{{"u3", "u4"}, {"m3"}};
  EXPECT_FALSE(eval_com(m, cfg, first, pair12));
  EXPECT_FALSE(eval_com(m, cfg, first, pair34));
  EXPECT_TRUE(eval_com(m, cfg, last, pair12));
  EXPECT_TRUE(eval_com(m, cfg, last, pair34));
  EXPECT_FALSE(eval_com(m, cfg, last, ComAtom{{"u1", "u2"}, {"m2"}}));
  EXPECT_TRUE(eval_com(m, cfg, last, ComAtom{{}, {"m2"}}));
  EXPECT_THROW(eval_com(m, cfg, last, ComAtom{{"u9"}, {"m1"}}), InputError);
  EXPECT_THROW(eval_com(m, cfg, last, ComAtom{{"u1"}, {"m9"}}), InputError);

  ComHook hook = make_com_hook(m, cfg);
  EXPECT_TRUE(check(m, first, parse_formula("<u1,u2,m1,m2> F com({u1,u2},{m1})"), hook));
  EXPECT_TRUE(check(m, first, parse_formula("<m1,m2,m3,u1,u2,u3,u4> F (com({u1,u2},{m1}) && com({u3,u4},{m3}))"), hook));
  EXPECT_FALSE(check(m, first, parse_formula("<> F com({u1,u2},{m1})"), hook));
  EXPECT_FALSE(check(m, first, parse_formula("com({u1,u2},{m1})"), hook));
}

TEST(Community, EmptyScheduleIsOneAbsorbingState) {
  CommunityConfig cfg = example_community_config();
  cfg.schedule.clear();
  Somas m = community_model(cfg);
  EXPECT_TRUE(validate(m).empty());
  EXPECT_EQ(m.state_count(), 1u);
  Lasso l = star_computation(m, StateId(0));
  EXPECT_TRUE(l.prefix.empty());
  EXPECT_EQ(registrations(m, cfg, l.cycle.front()), Registrations(cfg.initial.begin(), cfg.initial.end()));
}

TEST(Community, BadConfigsAreRejected) {
  auto broken = [](auto edit) {
    CommunityConfig cfg = example_community_config();
    edit(cfg);
    return cfg;
  };
  const std::vector<CommunityConfig> bad = {
      broken([](CommunityConfig& c) { c.users.clear(); }),
      broken([](CommunityConfig& c) { c.middles.clear(); }),
      broken([](CommunityConfig& c) { c.users.push_back("u1"); }),
      broken([](CommunityConfig& c) { c.middles.push_back("u1"); }),
      broken([](CommunityConfig& c) { c.interests["u1"] = {"u1"}; }),
      broken([](CommunityConfig& c) { c.interests["u1"] = {"zz"}; }),
      broken([](CommunityConfig& c) { c.initial["u1"] = "m9"; }),
      broken([](CommunityConfig& c) { c.initial.erase("u1"); }),
      broken([](CommunityConfig& c) { c.schedule.push_back({"u1", "nobody", false}); }),
      broken([](CommunityConfig& c) { c.schedule.push_back({"u1", "u1", false}); }),
  };
  for (std::size_t i = 0; i < bad.size(); ++i) {
    EXPECT_THROW(validate_config(bad[i]), InputError) << i;
    EXPECT_THROW(community_model(bad[i]), InputError) << i;
  }
  EXPECT_NO_THROW(validate_config(example_community_config()));
}

}  // namespace
}  // namespace somas
