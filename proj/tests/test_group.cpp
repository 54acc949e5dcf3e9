#include <lcapr/subgroup.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace lcapr;

namespace {

GroupSpec z(std::int64_t n) { return GroupSpec({Factor::cyclic(n)}); }

std::vector<Element> elems(std::initializer_list<std::int64_t> v) {
  std::vector<Element> out;
  for (auto x : v) out.push_back(Element{x});
  return out;
}

}  // namespace

TEST(GroupSpec, ParsesFactors) {
  const auto g = GroupSpec::parse({"Z/4", "Z/9", "Z"});
  ASSERT_EQ(g.arity(), 3u);
  EXPECT_EQ(g[0], Factor::cyclic(4));
  EXPECT_EQ(g[2], Factor::integer_line());
  EXPECT_FALSE(g.finite());
  EXPECT_EQ(g.finite_order(), 36);
  EXPECT_THROW(GroupSpec::parse({"Z/0"}), Error);
  EXPECT_THROW(GroupSpec::parse({"Q"}), Error);
  EXPECT_THROW(GroupSpec::parse({"Z/x"}), Error);
  EXPECT_THROW(GroupSpec(std::vector<Factor>{}), Error);
}

TEST(GroupOp, Examples) {
  const auto g4 = z(4);
  EXPECT_EQ(group_op(g4, Element{3}, Element{2}), Element{1});
  const auto g = GroupSpec::parse({"Z/4", "Z"});
  EXPECT_EQ(group_op(g, Element{1, -3}, Element{3, 5}), (Element{0, 2}));
  EXPECT_THROW(group_op(g, Element{1}, Element{3, 5}), Error);

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> d(-50, 50);
  for (int i = 0; i < 20; ++i) {
    const auto a = make_element(g, {d(rng), d(rng)});
    EXPECT_EQ(group_op(g, a, zero(g)), a);
    EXPECT_EQ(subtract(g, a, a), zero(g));
  }
}

TEST(Pairing, Examples) {
  const auto g4 = z(4);
  const cplx i1 = pairing(g4, Element{1}, dual_from_residues(g4, {1}));
  EXPECT_NEAR(i1.real(), 0.0, 1e-15);
  EXPECT_NEAR(i1.imag(), 1.0, 1e-15);
  const cplx one = pairing(g4, Element{2}, dual_from_residues(g4, {2}));
  EXPECT_NEAR(std::abs(one - cplx{1.0, 0.0}), 0.0, 1e-15);

  const GroupSpec zl({Factor::integer_line()});
  const cplx w = pairing(zl, Element{2}, make_dual(zl, {{1, 3}}));
  EXPECT_NEAR(std::abs(w - std::polar(1.0, 4.0 * std::numbers::pi / 3.0)), 0.0, 1e-14);
  EXPECT_THROW(pairing(zl, Element{1, 2}, make_dual(zl, {{1, 3}})), Error);
}

TEST(Pairing, IsBicharacter) {
  const auto g = GroupSpec::parse({"Z/6", "Z"});
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> d(-40, 40);
  std::uniform_int_distribution<std::int64_t> q(1, 17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = make_element(g, {d(rng), d(rng)});
    const auto b = make_element(g, {d(rng), d(rng)});
    const auto xi = make_dual(g, {{d(rng), 1}, {d(rng), q(rng)}});
    const auto zeta = make_dual(g, {{d(rng), 1}, {d(rng), q(rng)}});
    EXPECT_NEAR(std::abs(pairing(g, group_op(g, a, b), xi) - pairing(g, a, xi) * pairing(g, b, xi)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(pairing(g, a, group_op(g, xi, zeta)) - pairing(g, a, xi) * pairing(g, a, zeta)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(pairing(g, a, xi)), 1.0, 1e-14);
  }
}

TEST(DualArithmetic, TorusRationalsStayReduced) {
  const GroupSpec zl({Factor::integer_line()});
  const auto a = make_dual(zl, {{1, 6}});
  const auto b = make_dual(zl, {{1, 3}});
  const auto s = group_op(zl, a, b);
  EXPECT_EQ(s[0], (DualCoord{1, 2}));
  EXPECT_EQ(group_op(zl, s, s), dual_zero(zl));
  EXPECT_EQ(make_dual(zl, {{4, 6}})[0], (DualCoord{2, 3}));
  EXPECT_EQ(make_dual(zl, {{-1, 4}})[0], (DualCoord{3, 4}));
}

TEST(SubgroupClosure, Examples) {
  EXPECT_EQ(subgroup_closure(z(4), {Element{2}}).elements, elems({0, 2}));
  EXPECT_EQ(subgroup_closure(z(4), {}).elements, elems({0}));

  // Brute-force oracle: multiples of (2,3) in Z/4 x Z/9.
  const auto g = GroupSpec::parse({"Z/4", "Z/9"});
  std::set<Element> multiples;
  for (std::int64_t k = 0; k < 36; ++k) multiples.insert(make_element(g, {2 * k, 3 * k}));
  const auto h = subgroup_closure(g, {Element{2, 3}});
  EXPECT_EQ(h.elements.size(), 6u);
  EXPECT_EQ(std::set<Element>(h.elements.begin(), h.elements.end()), multiples);

  const auto gz = GroupSpec::parse({"Z/4", "Z"});
  EXPECT_THROW(subgroup_closure(gz, {Element{0, 1}}), Error);
  const auto full = subgroup_closure(gz, {Element{2, 0}}, {1});
  EXPECT_FALSE(full.finite());
  EXPECT_TRUE(full.contains(Element{2, -17}));
  EXPECT_FALSE(full.contains(Element{1, 0}));
}

TEST(Annihilator, Examples) {
  const auto g4 = z(4);
  const auto perp = annihilator(g4, subgroup_closure(g4, {Element{2}}));
  ASSERT_EQ(perp.elements.size(), 2u);
  EXPECT_EQ(perp.elements[0], dual_from_residues(g4, {0}));
  EXPECT_EQ(perp.elements[1], dual_from_residues(g4, {2}));

  for (const auto& g : {z(6), GroupSpec::parse({"Z/4", "Z/9"})}) {
    EXPECT_EQ(annihilator(g, trivial_subgroup(g)).elements.size(), static_cast<std::size_t>(g.finite_order()));
    const auto top = annihilator(g, whole_group(g));
    ASSERT_EQ(top.elements.size(), 1u);
    EXPECT_EQ(top.elements[0], dual_zero(g));
  }
}

TEST(Annihilator, OrderProductAndDoubleDual) {
  for (const auto& g : {z(8), z(12), GroupSpec::parse({"Z/4", "Z/6"}), GroupSpec::parse({"Z/4", "Z/9"})}) {
    for (const auto& h : all_subgroups(g)) {
      const auto perp = annihilator(g, h);
      EXPECT_EQ(h.elements.size() * perp.elements.size(), static_cast<std::size_t>(g.finite_order()));
      EXPECT_EQ(annihilator(g, perp).elements, h.elements);
    }
  }
}

TEST(Annihilator, IntegerLineFactors) {
  const auto g = GroupSpec::parse({"Z/4", "Z"});
  const auto h = subgroup_closure(g, {Element{2, 0}});
  const auto perp = annihilator(g, h);
  EXPECT_FALSE(perp.finite());
  EXPECT_TRUE(perp.full[1]);
  EXPECT_TRUE(perp.contains(make_dual(g, {{2, 1}, {1, 7}})));
  EXPECT_FALSE(perp.contains(make_dual(g, {{1, 1}, {0, 1}})));
  EXPECT_EQ(annihilator(g, perp).elements, h.elements);
  EXPECT_FALSE(annihilator(g, perp).full[1]);

  const auto hz = subgroup_closure(g, {Element{2, 0}}, {1});
  const auto perp_z = annihilator(g, hz);
  EXPECT_FALSE(perp_z.full[1]);
  EXPECT_FALSE(perp_z.contains(make_dual(g, {{0, 1}, {1, 2}})));
}

TEST(CosetSection, Examples) {
  const auto g4 = z(4);
  EXPECT_EQ(coset_section(g4, subgroup_closure(g4, {Element{2}})).representatives, elems({0, 1}));
  const auto g6 = z(6);
  EXPECT_EQ(coset_section(g6, subgroup_closure(g6, {Element{3}})).representatives, elems({0, 1, 2}));
  EXPECT_EQ(coset_section(g6, whole_group(g6)).representatives, elems({0}));

  const auto gz = GroupSpec::parse({"Z/4", "Z"});
  EXPECT_THROW(coset_section(gz, subgroup_closure(gz, {Element{2, 0}})), Error);
  const auto s = coset_section(gz, subgroup_closure(gz, {Element{2, 0}}, {1}));
  EXPECT_EQ(s.representatives, (std::vector<Element>{Element{0, 0}, Element{1, 0}}));
  EXPECT_EQ(s.coset_index(Element{3, -5}), 1u);
}

TEST(CosetSection, OnePointPerCoset) {
  const auto g = GroupSpec::parse({"Z/4", "Z/6"});
  for (const auto& h : all_subgroups(g)) {
    const auto sec = coset_section(g, h);
    ASSERT_EQ(sec.size() * h.elements.size(), 24u);
    for (std::size_t i = 0; i < sec.size(); ++i)
      for (std::size_t j = i + 1; j < sec.size(); ++j)
        EXPECT_FALSE(h.contains(subtract(g, sec.representatives[i], sec.representatives[j])));
    // canonical: minimal within its coset, identical on a second run
    for (const auto& r : sec.representatives)
      for (const auto& y : h.elements) EXPECT_FALSE(group_op(g, r, y) < r);
    EXPECT_EQ(coset_section(g, h).representatives, sec.representatives);
    EXPECT_TRUE(is_section(g, h, sec.representatives));
  }
}

TEST(MinimalChainMember, Examples) {
  const auto g4 = z(4);
  const std::vector<SubgroupData> c1{subgroup_closure(g4, {Element{2}})};
  EXPECT_EQ(minimal_chain_member(c1, {Element{0}}).elements, elems({0, 2}));

  const auto g27 = z(27);
  const std::vector<SubgroupData> chain{subgroup_closure(g27, {Element{9}}), subgroup_closure(g27, {Element{3}}),
                                        whole_group(g27)};
  // membership scan oracle
  const std::vector<Element> s{Element{0}, Element{3}, Element{24}};
  std::size_t expected = 0;
  while (!std::all_of(s.begin(), s.end(), [&](const Element& x) { return chain[expected].contains(x); })) ++expected;
  EXPECT_EQ(expected, 1u);
  EXPECT_EQ(minimal_chain_member(chain, s).elements, chain[1].elements);

  EXPECT_THROW(minimal_chain_member(c1, {Element{1}}), Error);
  const std::vector<SubgroupData> bad{chain[1], chain[0]};
  EXPECT_THROW(minimal_chain_member(bad, {Element{0}}), Error);
}

TEST(HaarWeights, Normalisation) {
  const auto g = GroupSpec::parse({"Z/4", "Z/9"});
  const auto h = subgroup_closure(g, {Element{2, 0}, Element{0, 3}});
  const auto w = haar_weights(g, h);
  EXPECT_DOUBLE_EQ(w.primal_weight * 6.0, 1.0);
  EXPECT_DOUBLE_EQ(w.dual_weight * static_cast<double>(annihilator(g, h).elements.size()), 1.0);

  const GroupSpec zl({Factor::integer_line()});
  const auto wz = haar_weights(zl, trivial_subgroup(zl));
  EXPECT_DOUBLE_EQ(wz.primal_weight, 1.0);
  EXPECT_DOUBLE_EQ(wz.dual_weight, 1.0);
  EXPECT_THROW(haar_weights(zl, whole_group(zl)), Error);
}

TEST(SpiralEnumeration, IntegerLineOrder) {
  const GroupSpec zl({Factor::integer_line()});
  const auto e = spiral_enumeration(zl, 3);
  EXPECT_EQ(e, elems({0, 1, -1, 2, -2, 3, -3}));
}

TEST(AllSubgroups, Counts) {
  // number of subgroups of Z/n is the number of divisors of n
  EXPECT_EQ(all_subgroups(z(8)).size(), 4u);
  EXPECT_EQ(all_subgroups(z(12)).size(), 6u);
  EXPECT_EQ(all_subgroups(GroupSpec::parse({"Z/4", "Z/9"})).size(), 9u);
  // Z/2 x Z/2 has five subgroups
  EXPECT_EQ(all_subgroups(GroupSpec::parse({"Z/2", "Z/2"})).size(), 5u);
}
