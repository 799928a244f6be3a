#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

namespace dpocl {
namespace {

using testing::c;
using testing::lit;
using testing::v;

TEST(Separate, BlocksLaterUnification) {
  auto b = add_noncodesignation({}, v("x"), c("a"));
  ASSERT_TRUE(b);
  EXPECT_FALSE(unify(lit("(p ?x)"), lit("(p a)"), *b));
  EXPECT_TRUE(unify(lit("(p ?x)"), lit("(p b)"), *b));
}

TEST(Separate, FailsWhenAlreadyCodesignated) {
  auto b = BindingSet{}.unify(v("x"), c("a"));
  ASSERT_TRUE(b);
  EXPECT_FALSE(add_noncodesignation(*b, v("x"), c("a")));
  EXPECT_FALSE(add_noncodesignation({}, c("a"), c("a")));
  EXPECT_FALSE(add_noncodesignation({}, v("x"), v("x")));
  EXPECT_TRUE(add_noncodesignation({}, c("a"), c("b")));
}

TEST(Separate, ThroughVariableChains) {
  auto b = add_noncodesignation({}, v("x"), v("y"));
  ASSERT_TRUE(b);
  auto b2 = b->unify(v("x"), v("z"));
  ASSERT_TRUE(b2);
  EXPECT_FALSE(b2->unify(v("z"), v("y")));
  EXPECT_FALSE(b2->unify(v("y"), v("x")));
}

TEST(Separate, DistinctValuesStayConsistent) {
  auto b = add_noncodesignation({}, v("x"), v("y"));
  ASSERT_TRUE(b);
  b = b->unify(v("x"), c("a"));
  ASSERT_TRUE(b);
  b = b->unify(v("y"), c("b"));
  ASSERT_TRUE(b);

  std::size_t models = 0;
  testing::for_each_assignment({key_of(v("x")), key_of(v("y"))}, testing::objects({"a", "b", "c"}),
                               [&](const testing::Assignment& g) {
                                 if (testing::satisfies(*b, g)) ++models;
                               });
  EXPECT_EQ(models, 1u);
}

TEST(BindingSet, IsAPersistentValue) {
  const BindingSet root;
  auto left = root.unify(v("x"), c("a"));
  auto right = root.unify(v("x"), c("b"));
  ASSERT_TRUE(left && right);
  EXPECT_TRUE(root.empty());
  EXPECT_EQ(left->apply(v("x")), c("a"));
  EXPECT_EQ(right->apply(v("x")), c("b"));
}

TEST(BindingSet, ClassHoldsOneGroundValue) {
  auto b = BindingSet{}.unify(v("x"), v("y"));
  ASSERT_TRUE(b);
  b = b->unify(v("y"), c("a"));
  ASSERT_TRUE(b);
  EXPECT_EQ(b->apply(v("x")), c("a"));
  EXPECT_FALSE(b->unify(v("x"), c("b")));
  EXPECT_FALSE(b->unify(v("x"), Term::compound("f", {c("a")})));
}

// Random constraint sequences over three variables and three constants. With
// three extra fresh constants the finite universe has a model iff the store
// does, since each variable needs at most one value nobody else mentions.
TEST(BindingSetProperty, ConsistencyMatchesEnumeration) {
  std::mt19937_64 rng(3);
  const std::vector<Term> terms = {v("x"), v("y"), v("z"), c("a"), c("b"), c("c")};
  const auto universe = testing::objects({"a", "b", "c", "d1", "d2", "d3"});
  const std::vector<VarKey> vars = {key_of(v("x")), key_of(v("y")), key_of(v("z"))};
  auto pick = [&] { return terms[std::uniform_int_distribution<std::size_t>(0, terms.size() - 1)(rng)]; };

  for (int trial = 0; trial < 300; ++trial) {
    BindingSet store;
    std::vector<std::tuple<bool, Term, Term>> constraints;  // equal?, lhs, rhs
    for (int step = 0; step < 5; ++step) {
      const bool equal = std::bernoulli_distribution(0.5)(rng);
      const Term l = pick(), r = pick();
      auto next = equal ? store.unify(l, r) : store.separate(l, r);

      auto models = [&](bool with_new) {
        std::size_t n = 0;
        testing::for_each_assignment(vars, universe, [&](const testing::Assignment& g) {
          for (const auto& [eq, x, y] : constraints)
            if ((testing::substitute(x, g) == testing::substitute(y, g)) != eq) return;
          if (with_new && (testing::substitute(l, g) == testing::substitute(r, g)) != equal) return;
          ++n;
        });
        return n;
      };
      const std::size_t with = models(true);
      EXPECT_EQ(next.has_value(), with > 0) << "trial " << trial << " step " << step;
      if (!next) continue;
      constraints.emplace_back(equal, l, r);
      store = *next;
      // The store's own constraints admit exactly the same models.
      std::size_t own = 0;
      testing::for_each_assignment(vars, universe, [&](const testing::Assignment& g) {
        if (testing::satisfies(store, g)) ++own;
      });
      EXPECT_EQ(own, with);
    }
  }
}

TEST(BindingSetProperty, MonotoneWithinABranch) {
  std::mt19937_64 rng(8);
  const std::vector<Term> terms = {v("x"), v("y"), v("z"), c("a"), c("b")};
  auto pick = [&] { return terms[std::uniform_int_distribution<std::size_t>(0, terms.size() - 1)(rng)]; };
  for (int trial = 0; trial < 200; ++trial) {
    BindingSet store;
    for (int step = 0; step < 6; ++step) {
      const Term l = pick(), r = pick();
      auto next = std::bernoulli_distribution(0.5)(rng) ? store.unify(l, r) : store.separate(l, r);
      if (!next) continue;
      for (const auto& [var, value] : store.codesignations())
        EXPECT_TRUE(next->codesignate(var, value));
      EXPECT_GE(next->noncodesignations().size(), store.noncodesignations().size());
      store = *next;
    }
  }
}

}  // namespace
}  // namespace dpocl
