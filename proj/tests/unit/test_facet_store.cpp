#include <map>

#include "doctest.h"
#include "helpers.hpp"
#include "oracle/order_oracle.hpp"
#include "oracle/store_oracle.hpp"
#include "trapeze/errors.hpp"
#include "trapeze/facet_store.hpp"
#include "trapeze/store_io.hpp"

using namespace trapeze;

namespace {

const Lattice& lat() { return *testing::diamond(); }
Label L(const char* name) { return lat().at(name); }

oracle::Matrix matrix(const Lattice& lattice) {
  std::vector<std::string> names;
  for (auto l : lattice.labels()) names.push_back(lattice.name(l));
  return oracle::order_from_edges(names, lattice.edges()).le;
}

oracle::Seq to_oracle(const LabeledValueSeq& s) {
  oracle::Seq out;
  for (const auto& f : s) out.push_back({encode_value(f.value), f.label.id});
  return out;
}

}  // namespace

TEST_CASE("write_seq examples") {
  CHECK(write_seq(lat(), {{"a", L("b")}}, "x", L("bot")) == LabeledValueSeq{{"x", L("bot")}});
  CHECK(write_seq(lat(), {{"a", L("bot")}}, "x", L("b")) == LabeledValueSeq{{"a", L("bot")}, {"x", L("b")}});

  // Oracle first, then the frozen expectation.
  const auto le = matrix(lat());
  const oracle::Seq expected = oracle::write(le, {{"s:a", L("b").id}, {"s:c", L("e").id}}, "s:x", L("b").id);
  REQUIRE(expected == oracle::Seq{{"s:c", L("e").id}, {"s:x", L("b").id}});
  CHECK(write_seq(lat(), {{"a", L("b")}, {"c", L("e")}}, "x", L("b")) ==
        LabeledValueSeq{{"c", L("e")}, {"x", L("b")}});
}

TEST_CASE("project_seq examples") {
  CHECK(project_seq(lat(), {{"a", L("e")}, {"c", L("b")}}, L("b")) == LabeledValueSeq{{"c", L("b")}});
  CHECK(project_seq(lat(), {}, L("e")).empty());
  CHECK(project_seq(lat(), {{"a", L("bot")}, {"c", L("top")}}, L("e")) == LabeledValueSeq{{"a", L("bot")}});
}

TEST_CASE("read examples") {
  Store s = write(lat(), Store{}, "100", 42, L("b"));
  CHECK_FALSE(read(lat(), s, "100", L("e")).has_value());

  Store t;
  t.set("k", {{"a", L("bot")}, {"c", L("b")}});
  CHECK(read(lat(), t, "k", L("b")) == LabeledValue{"c", L("b")});

  Store u;
  u.set("k", {{1234, L("e")}, {1, L("b")}});
  CHECK(read(lat(), u, "k", L("e")) == LabeledValue{1234, L("e")});
  CHECK(read(lat(), u, "k", L("b")) == LabeledValue{1, L("b")});
  CHECK_FALSE(read(lat(), u, "missing", L("top")).has_value());
}

TEST_CASE("write examples") {
  const Store one = write(lat(), Store{}, "k", 7, L("b"));
  CHECK(one.get("k") == LabeledValueSeq{{7, L("b")}});

  const Store two = write(lat(), one, "k", 8, L("e"));
  CHECK(two.get("k") == LabeledValueSeq{{7, L("b")}, {8, L("e")}});

  const Store same = write(lat(), one, "k", 9, L("b"));
  CHECK(same.get("k") == LabeledValueSeq{{9, L("b")}});
  CHECK(gc_invariant_holds(lat(), two.get("k")));
}

TEST_CASE("project_store, del and keys") {
  CHECK(project_store(lat(), Store{}, L("e")) == Store{});
  const Store high = write(lat(), Store{}, "k", 1, L("top"));
  CHECK(project_store(lat(), high, L("e")) == Store{});
  CHECK(project_store(lat(), project_store(lat(), high, L("top")), L("top")) == project_store(lat(), high, L("top")));
  CHECK(keys(lat(), high, L("e")).empty());
  CHECK(keys(lat(), high, L("top")) == std::set<Key>{"k"});

  Store s;
  s.set("k", {{1, L("bot")}, {2, L("top")}});
  const auto le = matrix(lat());
  const oracle::Seq expected = oracle::del(le, to_oracle(s.get("k")), L("b").id);
  REQUIRE(expected == oracle::Seq{{"i:1", L("bot").id}});
  CHECK(del(lat(), s, "k", L("b")).get("k") == LabeledValueSeq{{1, L("bot")}});

  Store with_e;
  with_e.set("k", {{1, L("e")}});
  CHECK(del(lat(), with_e, "k", L("b")) == with_e);
  CHECK(del(lat(), s, "absent", L("b")) == s);
}

TEST_CASE("empty cells are indistinguishable from unmapped keys") {
  Store a;
  a.set("k", {{1, L("top")}});
  a.set("k", {});
  CHECK(a == Store{});
  CHECK(a.hash() == Store{}.hash());
}

TEST_CASE("store operations agree with the comprehension oracle on random lattices") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Lattice lattice = random_lattice(rng, 8);
    const auto le = matrix(lattice);
    Store store;
    std::map<std::string, oracle::Seq> model;
    for (int op = 0; op < 12; ++op) {
      const Key k = random_key(rng, 3);
      const Label l = random_label(rng, lattice);
      const Value v = random_value(rng);
      switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
        case 0:
        case 1:
          store = write(lattice, store, k, v, l);
          model[k] = oracle::write(le, model[k], encode_value(v), l.id);
          break;
        case 2:
          store = del(lattice, store, k, l);
          model[k] = oracle::del(le, model[k], l.id);
          break;
        default: {
          const auto got = read(lattice, store, k, l);
          const auto want = oracle::read(le, model[k], l.id);
          REQUIRE(got.has_value() == want.has_value());
          if (got) REQUIRE(oracle::Facet{encode_value(got->value), got->label.id} == *want);
        }
      }
      REQUIRE(to_oracle(store.get(k)) == model[k]);
      REQUIRE(keys(lattice, store, l) == oracle::keys(le, model, l.id));
    }
  }
}

TEST_CASE("value encoding") {
  CHECK(encode_value(Value(-5)) == "i:-5");
  CHECK(encode_value(Value(true)) == "b:true");
  CHECK(encode_value(Value("a\tb\\c\n")) == "s:a\\tb\\\\c\\n");
  CHECK(decode_value("s:a\\tb\\\\c\\n") == Value("a\tb\\c\n"));
  CHECK(decode_value("i:9223372036854775807") == Value(std::int64_t{9223372036854775807}));
  CHECK_THROWS_AS(decode_value("i:12x"), std::invalid_argument);
  CHECK_THROWS_AS(decode_value("b:yes"), std::invalid_argument);
  CHECK_THROWS_AS(decode_value("q:1"), std::invalid_argument);
  // Same printed form, different types.
  CHECK(encode_value(Value(1)) != encode_value(Value("1")));
}

TEST_CASE("dump format and load errors") {
  Store s = write(lat(), Store{}, "k", 1, L("b"));
  s = write(lat(), s, "k", "two", L("e"));
  s = write(lat(), s, "a", false, L("bot"));
  CHECK(dump_store(lat(), s) == "a\tb:false\tbot\nk\ti:1\tb\nk\ts:two\te\n");
  CHECK(load_store(lat(), dump_store(lat(), s)) == s);

  auto line_of = [](const std::string& text) {
    try {
      load_store(lat(), text);
    } catch (const StoreFormatError& err) {
      return std::pair{err.line(), std::string(err.what())};
    }
    return std::pair{std::size_t{0}, std::string()};
  };
  auto [l1, m1] = line_of("k\ti:1\tb\nk\ti:2\tmystery\n");
  CHECK(l1 == 2);
  CHECK(m1.find("mystery") != std::string::npos);
  CHECK(line_of("k\ti:1\n").first == 1);
  CHECK(line_of("k\tz:1\tb\n").first == 1);
  CHECK(line_of("k\ti:1\tb\nk\ti:2\tbot\n").first == 2);  // bot below b cannot follow it
  CHECK(load_store(lat(), "").empty());
}
