#include "doctest.h"
#include "oracle/order_oracle.hpp"
#include "trapeze/errors.hpp"
#include "trapeze/random_gen.hpp"

using trapeze::Lattice;
using trapeze::LatticeError;

TEST_CASE("diamond order and joins") {
  const Lattice lat = Lattice::diamond();
  const auto bot = lat.at("bot"), b = lat.at("b"), e = lat.at("e"), top = lat.at("top");
  CHECK(lat.leq(b, b));
  CHECK_FALSE(lat.leq(b, e));
  CHECK_FALSE(lat.leq(e, b));
  CHECK(lat.leq(bot, top));
  CHECK(lat.join(b, e) == top);
  CHECK(lat.join(e, e) == e);
  CHECK(lat.join(bot, e) == e);
  CHECK(lat.bottom() == bot);
  CHECK(lat.top() == top);

  int below_both = 0;
  for (auto l : lat.labels()) below_both += lat.leq(l, b) && lat.leq(l, e);
  CHECK(below_both == 1);
}

TEST_CASE("two point chain") {
  const Lattice lat = Lattice::two_point();
  CHECK(lat.size() == 2);
  CHECK(lat.leq(lat.bottom(), lat.top()));
  CHECK_FALSE(lat.leq(lat.top(), lat.bottom()));
}

TEST_CASE("validation errors name the offending labels") {
  SUBCASE("missing join") {
    try {
      Lattice({"bot", "x", "y", "p", "q"}, {{"bot", "x"}, {"bot", "y"}, {"x", "p"}, {"y", "p"}, {"x", "q"}, {"y", "q"}});
      FAIL("accepted");
    } catch (const LatticeError& err) {
      CHECK(std::string(err.what()).find("missing join") != std::string::npos);
      CHECK(std::string(err.what()).find("'x'") != std::string::npos);
    }
  }
  SUBCASE("no upper bound at all") {
    CHECK_THROWS_WITH_AS(Lattice({"bot", "x", "y"}, {{"bot", "x"}, {"bot", "y"}}),
                         doctest::Contains("missing join"), LatticeError);
  }
  SUBCASE("cycle") {
    CHECK_THROWS_WITH_AS(Lattice({"bot", "a", "c", "top"}, {{"bot", "a"}, {"a", "c"}, {"c", "a"}, {"c", "top"}}),
                         doctest::Contains("cycle"), LatticeError);
  }
  SUBCASE("missing bottom") {
    CHECK_THROWS_WITH_AS(Lattice({"a", "c", "top"}, {{"a", "top"}, {"c", "top"}}), doctest::Contains("bottom"),
                         LatticeError);
  }
  SUBCASE("unknown edge label") {
    CHECK_THROWS_AS(Lattice({"bot", "top"}, {{"bot", "nope"}}), LatticeError);
  }
  SUBCASE("duplicate label") { CHECK_THROWS_AS(Lattice({"bot", "bot"}, {}), LatticeError); }
  SUBCASE("unknown label lookup") { CHECK_THROWS_WITH(Lattice::diamond().at("zz"), doctest::Contains("'zz'")); }
}

TEST_CASE("random lattices agree with the closure oracle") {
  trapeze::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Lattice lat = trapeze::random_lattice(rng, 8);
    std::vector<std::string> names;
    for (auto l : lat.labels()) names.push_back(lat.name(l));
    const auto o = oracle::order_from_edges(names, lat.edges());
    const int n = static_cast<int>(lat.size());
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const trapeze::Label la{static_cast<std::uint16_t>(a)}, lb{static_cast<std::uint16_t>(b)};
        REQUIRE(lat.leq(la, lb) == o.le[a][b]);
        const auto j = oracle::join(o, a, b);
        REQUIRE(j.has_value());
        REQUIRE(lat.join(la, lb).id == *j);
        // Least upper bound law.
        for (int c = 0; c < n; ++c) {
          const trapeze::Label lc{static_cast<std::uint16_t>(c)};
          REQUIRE((lat.leq(la, lc) && lat.leq(lb, lc)) == lat.leq(lat.join(la, lb), lc));
        }
      }
    }
  }
}
