#include <catch2/catch.hpp>

#include <numbers>
#include <set>

#include "heod/encoding.hpp"
#include "heod/models.hpp"

using namespace heod;

namespace {

EncodingMatrix simple_codes(int dim, long n) {
  EncodingMatrix g;
  g.codes = Eigen::MatrixXi::Zero(dim, dim);
  g.samples = n;
  return g;
}

Generator two_channel_toy_generator() {
  Generator g(3);
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(3, 3);
  c(0, 0) = Complex(0.0, -0.5);
  c(1, 0) = Complex(0.3, 0.1);
  c(2, 1) = Complex(-0.2, 0.0);
  g.add_channel(c);
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(3, 3);
  x(0, 1) = 1.0;
  x(1, 2) = Complex(0.0, 0.7);
  g.add_channel(x, [](double t) { return Complex(std::cos(t), 0.0); });
  return g;
}

}  // namespace

TEST_CASE("modulation at s = 0 is the identity") {
  const auto g = two_channel_toy_generator();
  auto codes = simple_codes(3, 16);
  codes.codes(1, 0) = codes.codes(0, 1) = 5;
  const auto mod = modulate(g, codes, 0);
  for (double t : {0.0, 0.4, 2.0})
    CHECK((mod.at(t) - g.at(t)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("modulation multiplies encoded entries by the exact phase") {
  const auto g = two_channel_toy_generator();
  auto codes = simple_codes(3, 1024);
  codes.codes(1, 0) = codes.codes(0, 1) = 17;
  const auto mod = modulate(g, codes, 1);
  const Complex expected =
      std::polar(1.0, 2.0 * std::numbers::pi * 17.0 / 1024.0) * g.at(0.7)(1, 0);
  CHECK(std::abs(mod.at(0.7)(1, 0) - expected) < 1e-15);

  SECTION("unencoded entries are untouched for every s") {
    for (long s : {1L, 9L, 1023L}) {
      const auto m = modulate(g, codes, s);
      CHECK(m.at(0.3)(2, 1) == g.at(0.3)(2, 1));
      CHECK(m.at(0.3)(0, 0) == g.at(0.3)(0, 0));
    }
  }
}

TEST_CASE("modulation preserves support and unit modulus") {
  const auto g = two_channel_toy_generator();
  auto codes = simple_codes(3, 64);
  codes.codes(1, 0) = codes.codes(0, 1) = 3;
  codes.codes(2, 1) = codes.codes(1, 2) = 7;
  for (long s : {1L, 30L, 63L}) {
    const auto mod = modulate(g, codes, s);
    const auto a = g.at(1.1);
    const auto b = mod.at(1.1);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        if (a(r, c) == Complex(0.0, 0.0)) CHECK(b(r, c) == Complex(0.0, 0.0));
        else CHECK(std::abs(std::abs(b(r, c)) - std::abs(a(r, c))) < 1e-15);
      }
  }
}

TEST_CASE("modulating with s1 then s2 equals a single pass at s1 + s2") {
  const auto g = two_channel_toy_generator();
  auto codes = simple_codes(3, 64);
  codes.codes(1, 0) = codes.codes(0, 1) = 3;
  codes.codes(2, 1) = codes.codes(1, 2) = 11;
  const long s1 = 13, s2 = 29;
  const auto twice = modulate(modulate(g, codes, s1), codes, s2);
  const auto once = modulate(g, codes, (s1 + s2) % 64);
  CHECK((twice.at(0.9) - once.at(0.9)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("adding two code matrices multiplies their phases") {
  const auto g = two_channel_toy_generator();
  auto a = simple_codes(3, 64);
  a.codes(1, 0) = a.codes(0, 1) = 3;
  auto b = simple_codes(3, 64);
  b.codes(1, 0) = b.codes(0, 1) = 11;
  auto sum = simple_codes(3, 64);
  sum.codes(1, 0) = sum.codes(0, 1) = 14;
  const long s = 21;
  const auto chained = modulate(modulate(g, a, s), b, s);
  const auto direct = modulate(g, sum, s);
  CHECK((chained.at(0.4) - direct.at(0.4)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("modulate rejects out-of-range sweep indices") {
  const auto g = two_channel_toy_generator();
  const auto codes = simple_codes(3, 16);
  CHECK_THROWS_AS(modulate(g, codes, -1), std::domain_error);
  CHECK_THROWS_AS(modulate(g, codes, 16), std::domain_error);
}

TEST_CASE("encoding matrix validation") {
  auto g = simple_codes(2, 8);
  SECTION("asymmetric codes rejected") {
    g.codes(0, 1) = 3;
    CHECK_THROWS_AS(g.validate(), invalid_model_error);
  }
  SECTION("negative codes rejected") {
    g.codes(0, 1) = g.codes(1, 0) = -2;
    CHECK_THROWS_AS(g.validate(), invalid_model_error);
  }
  SECTION("non power-of-two sample count rejected") {
    g.samples = 48;
    CHECK_THROWS_AS(g.validate(), invalid_model_error);
  }
}

TEST_CASE("benchmark pathway frequencies match the reference table") {
  const auto b = benchmark_three_level();
  const auto& gamma = b.offdiag_scheme;

  CHECK(pathway_frequency(Pathway{{1, 2, 3, 6, 9}}, gamma).raw == 172);
  CHECK(pathway_frequency(Pathway{{1, 5, 9}}, gamma).raw == 118);
  CHECK(pathway_frequency(Pathway{{1, 2}}, gamma).raw == 1);
  for (const auto& row : b.reference)
    CHECK(pathway_frequency(row.pathway, gamma).raw == row.feature_frequency);
}

TEST_CASE("pathway frequency returns both raw sum and bin") {
  auto gamma = simple_codes(2, 8);
  gamma.codes(0, 1) = gamma.codes(1, 0) = 5;
  const auto f = pathway_frequency(Pathway{{1, 2, 1, 2}}, gamma);
  CHECK(f.raw == 15);
  CHECK(f.bin == 7);
}

TEST_CASE("pathway frequency is additive under concatenation") {
  const auto b = benchmark_three_level();
  const auto& gamma = b.offdiag_scheme;
  const Pathway head{{1, 2, 5}};
  const Pathway tail{{5, 6, 9}};
  const Pathway joined{{1, 2, 5, 6, 9}};
  CHECK(pathway_frequency(joined, gamma).raw ==
        pathway_frequency(head, gamma).raw + pathway_frequency(tail, gamma).raw);
}

TEST_CASE("pathway frequency rejects edges outside a given support") {
  const auto b = benchmark_three_level();
  const auto support = liouvillian_generator(b.system, b.field).support();
  CHECK_NOTHROW(pathway_frequency(Pathway{{1, 5, 9}}, b.offdiag_scheme, &support));
  CHECK_THROWS_AS(pathway_frequency(Pathway{{1, 9}}, b.offdiag_scheme, &support),
                  invalid_pathway_error);
}

TEST_CASE("pathway enumeration over the benchmark support") {
  const auto b = benchmark_three_level();
  const auto support = liouvillian_generator(b.system, b.field).support();

  SECTION("no direct edge from rho_11 to rho_33") {
    CHECK(enumerate_pathways(support, 1, 9, 1, false).empty());
  }
  SECTION("exactly one order-2 pathway, the dissipation ladder") {
    const auto paths = enumerate_pathways(support, 1, 9, 2, false);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0] == Pathway{{1, 5, 9}});
  }
  SECTION("the six dipole-induced order-4 pathways all appear") {
    const auto paths = enumerate_pathways(support, 1, 9, 4, false);
    for (const auto& states :
         {std::vector<int>{1, 2, 3, 6, 9}, {1, 4, 7, 8, 9}, {1, 2, 5, 8, 9},
          {1, 4, 5, 6, 9}, {1, 2, 5, 6, 9}, {1, 4, 5, 8, 9}})
      CHECK(std::find(paths.begin(), paths.end(), Pathway{states}) != paths.end());
  }
  SECTION("self steps appear only when requested") {
    const auto without = enumerate_pathways(support, 1, 9, 3, false);
    const auto with = enumerate_pathways(support, 1, 9, 3, true);
    CHECK(with.size() > without.size());
    CHECK(std::find(with.begin(), with.end(), Pathway{{1, 1, 5, 9}}) != with.end());
    CHECK(std::find(without.begin(), without.end(), Pathway{{1, 1, 5, 9}}) == without.end());
  }
}

TEST_CASE("enumeration order guard") {
  const auto b = benchmark_three_level();
  const auto support = liouvillian_generator(b.system, b.field).support();
  CHECK_THROWS_AS(enumerate_pathways(support, 1, 9, 9, false), limit_error);
}

TEST_CASE("all-equal codes collapse every order onto one bin") {
  // fully connected 3-state support, all codes 1
  SupportMatrix support(3, 3);
  support.setConstant(true);
  for (int i = 0; i < 3; ++i) support(i, i) = false;
  auto gamma = simple_codes(3, 64);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (r != c) gamma.codes(r, c) = 1;

  const auto report = validate_encoding(gamma, support, 1, 3, 3);
  // every order-3 walk sums to 3; there are several, so bin 3 must collide
  bool found = false;
  for (const auto& col : report.collisions)
    if (col.bin == 3) {
      found = true;
      CHECK(col.pathways.size() >= 2);
      for (const auto& p : col.pathways) CHECK(p.order() == 3);
    }
  CHECK(found);
}

TEST_CASE("benchmark scheme analysis at order 2") {
  const auto b = benchmark_three_level();
  const auto support = liouvillian_generator(b.system, b.field).support();
  const auto report = validate_encoding(b.offdiag_scheme, support, 1, 9, 2);
  CHECK(report.max_composite == 118);
  CHECK(report.min_samples == 256);
  CHECK(report.collisions.empty());
}

TEST_CASE("the eleven reference frequencies are pairwise distinct at order 4") {
  const auto b = benchmark_three_level();
  const auto support = liouvillian_generator(b.system, b.field).support();
  const auto report = validate_encoding(b.offdiag_scheme, support, 1, 9, 4);

  std::set<long> reference_bins;
  for (const auto& row : b.reference) reference_bins.insert(row.feature_frequency);
  CHECK(reference_bins.size() == 11);
  for (const auto& col : report.collisions) CHECK(reference_bins.count(col.bin) == 0);
}

TEST_CASE("empty support yields an empty report") {
  SupportMatrix support(3, 3);
  support.setConstant(false);
  const auto report = validate_encoding(simple_codes(3, 8), support, 1, 3, 4);
  CHECK(report.max_composite == 0);
  CHECK(report.collisions.empty());
}
