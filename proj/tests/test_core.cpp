#include <random>
#include <set>

#include "doctest.h"
#include "gll/parse_state.hpp"
#include "gll/slot.hpp"
#include "support.hpp"

using namespace gll;

namespace {

const SymbolId E = SymbolId::applied("E");
const SymbolId A = SymbolId::token("'a'");

Slot eslot(std::initializer_list<SymbolId> pre, std::initializer_list<SymbolId> post) { return Slot::make(E, pre, post); }

}  // namespace

TEST_CASE("symbol ids are interned and structural") {
  auto x = SymbolId::applied("CSV", {SymbolId::token("alpha")});
  auto y = SymbolId::applied("CSV", {SymbolId::token("alpha")});
  CHECK(x == y);
  CHECK(x.str() == "CSV(alpha)");
  CHECK(SymbolId::token("E") != SymbolId::applied("E"));
  CHECK(SymbolId::applied("F", {A, A}).str() == "F('a','a')");
  CHECK(x.args().size() == 1);
  CHECK(x.args()[0].name() == "alpha");
}

TEST_CASE("symbol id order is total") {
  std::vector<SymbolId> ids = {E,
                               A,
                               SymbolId::token("b"),
                               SymbolId::applied("E", {A}),
                               SymbolId::applied("E", {A, A}),
                               SymbolId::applied("D", {E}),
                               SymbolId::applied("E", {E})};
  for (auto a : ids)
    for (auto b : ids) {
      int lt = (a < b), gt = (a > b);
      if (a == b)
        CHECK(lt + gt == 0);
      else
        CHECK(lt + gt == 1);
    }
}

TEST_CASE("slot_advance") {
  CHECK(slot_advance(eslot({}, {E, E, E})) == eslot({E}, {E, E}));
  CHECK(slot_advance(eslot({E, E}, {E})) == eslot({E, E, E}, {}));

  auto csv = SymbolId::applied("CSV", {SymbolId::applied("x")});
  auto comma = SymbolId::token("','");
  CHECK(slot_advance(Slot::make(csv, {csv}, {comma, csv})) == Slot::make(csv, {csv, comma}, {csv}));
  CHECK(slot_advance(Slot::make(csv, {csv}, {comma, csv})).lhs() == csv);

  CHECK_THROWS_AS(slot_advance(eslot({}, {})), std::invalid_argument);
  CHECK_THROWS_AS(slot_advance(eslot({E, E, E}, {})), std::invalid_argument);
}

TEST_CASE("advancing through a whole alternate") {
  Slot s = eslot({}, {E, A, E});
  for (int i = 0; i < 3; ++i) s = slot_advance(s);
  CHECK(s.at_end());
  CHECK(s == eslot({E, A, E}, {}));
}

TEST_CASE("render_slot") {
  CHECK(render_slot(eslot({E}, {E, E})) == "E ::= E . E E");
  CHECK(render_slot(eslot({}, {})) == "E ::= .");
  auto csv = SymbolId::applied("CSV", {SymbolId::token("a")});
  CHECK(render_slot(Slot::make(csv, {}, {csv, SymbolId::token("comma"), csv})) == "CSV(a) ::= . CSV(a) comma CSV(a)");
}

TEST_CASE("render_slot is injective over one grammar's slots") {
  std::vector<std::vector<SymbolId>> alts = {{E, E, E}, {A}, {}, {E, A}, {A, E}};
  std::set<std::string> seen;
  std::size_t n = 0;
  for (auto& alt : alts)
    for (std::size_t d = 0; d <= alt.size(); ++d, ++n) seen.insert(render_slot(Slot::at(E, alt, d)));
  CHECK(seen.size() == n);
}

TEST_CASE("descriptor set") {
  ParseState st({Token("a")});
  Descriptor d{eslot({}, {E, E, E}), 0, 0};
  CHECK_FALSE(st.has_descriptor(d));
  CHECK(st.add_descriptor(d));
  CHECK(st.has_descriptor(d));
  CHECK_FALSE(st.add_descriptor(d));
  CHECK(st.uset().size() == 1);
  CHECK_FALSE(st.has_descriptor({eslot({}, {E, E, E}), 0, 1}));
  CHECK_FALSE(st.has_descriptor({eslot({}, {E, E, E}), 1, 0}));
}

TEST_CASE("continuation relation") {
  ParseState st({});
  ContinuationPoint p1{eslot({E}, {E, E})};
  ContinuationPoint p2{eslot({E, E}, {E})};
  Commencement c{E, 0};
  CHECK(st.continuations_for(c).empty());
  CHECK(st.add_continuation(c, Continuation(p1, 0)));
  REQUIRE(st.continuations_for(c).size() == 1);
  CHECK(st.continuations_for(c)[0].id() == ContinuationId{eslot({E}, {E, E}), 0});
  CHECK_FALSE(st.add_continuation(c, Continuation(p1, 0)));
  CHECK(st.add_continuation(c, Continuation(p2, 0)));
  CHECK(st.continuations_for(c).size() == 2);
  CHECK(st.continuations_for({E, 1}).empty());
  // first write wins in cmap
  ContinuationPoint p1b{eslot({E}, {E, E})};
  st.add_continuation({E, 1}, Continuation(p1b, 0));
  CHECK(&st.continuations_for({E, 1})[0].point() == &p1);
  CHECK(st.grel().cmap_size() == 2);
}

TEST_CASE("extent relation") {
  ParseState st({});
  CHECK(st.extents_for({E, 0}).empty());
  st.add_extent({E, 0}, 1);
  st.add_extent({E, 0}, 0);
  auto ext = st.extents_for({E, 0});
  CHECK(std::vector<Index>(ext.begin(), ext.end()) == std::vector<Index>{0, 1});
  st.add_extent({E, 1}, 1);
  CHECK_FALSE(st.add_extent({E, 1}, 1));
  CHECK(st.extents_for({E, 1}).size() == 1);
  CHECK(st.prel().size() == 3);
}

TEST_CASE("bsr set loaded with the single-token E forest") {
  ParseState st({});
  CHECK(st.pivots(eslot({E, E, E}, {}), 0, 1).empty());
  const Slot end = eslot({E, E, E}, {}), one = eslot({E}, {E, E}), two = eslot({E, E}, {E}), eps = eslot({}, {});
  const Slot tok = Slot::make(E, {A}, {});
  std::vector<BsrElement> golden = {{eps, 0, 0, 0}, {one, 0, 0, 0}, {two, 0, 0, 0}, {end, 0, 0, 0}, {tok, 0, 0, 1},
                                  {one, 0, 0, 1}, {two, 0, 0, 1}, {two, 0, 1, 1}, {end, 0, 0, 1}, {end, 0, 1, 1},
                                  {eps, 1, 1, 1}, {one, 1, 1, 1}, {two, 1, 1, 1}, {end, 1, 1, 1}};
  // insertion order must not matter
  std::mt19937 rng(7);
  std::shuffle(golden.begin(), golden.end(), rng);
  for (const auto& b : golden) st.add_bsr(b);
  for (const auto& b : golden) CHECK_FALSE(st.add_bsr(b));
  CHECK(st.bsrs().size() == 14);
  auto ks = st.pivots(end, 0, 1);
  CHECK(std::vector<Index>(ks.begin(), ks.end()) == std::vector<Index>{0, 1});
  ks = st.pivots(one, 0, 0);
  CHECK(std::vector<Index>(ks.begin(), ks.end()) == std::vector<Index>{0});
  for (const auto& b : golden) CHECK(st.bsrs().contains(b));
  CHECK_FALSE(st.bsrs().contains({end, 0, 1, 0}));

  auto sorted = st.bsrs().sorted();
  CHECK(std::is_sorted(sorted.begin(), sorted.end(), bsr_dump_less));
  CHECK(sorted.front() == BsrElement{tok, 0, 0, 1});  // "'" sorts before "."
}

TEST_CASE("fuel") {
  ParseState st({}, 2);
  st.consume_fuel();
  st.consume_fuel();
  CHECK_THROWS_AS(st.consume_fuel(), ResourceExhausted);
}

TEST_CASE("furthest failure keeps only the maximal position") {
  ParseState st({Token("a"), Token("b")});
  Slot s1 = eslot({}, {A});
  Slot s2 = eslot({E}, {A});
  st.note_failure(s1, 0);
  st.note_failure(s1, 1);
  st.note_failure(s2, 1);
  st.note_failure(s2, 1);
  st.note_failure(s2, 0);
  const auto& f = st.stats().furthest_failure;
  CHECK(f.position == 1u);
  CHECK(f.slots.size() == 2);
  CHECK(f.got == Token("b"));
  st.note_failure(s1, 2);
  CHECK(f.slots.size() == 1);
  CHECK_FALSE(f.got.has_value());
}
