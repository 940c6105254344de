// Prints one [PASS]/[FAIL] line per acceptance criterion; exits non-zero if
// any criterion fails.

#include <algorithm>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "support.hpp"
#include "umt/resolve.hpp"

namespace umt {
namespace {

using testing::end_of;
using testing::Loaded;
using testing::refs_of;

struct Check {
  std::ostringstream why;
  bool ok = true;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

Value count_of(const ModelState& st, const char* query) {
  const auto r = testing::result_named(st, query);
  return r ? st.get(*r, "num") : Value::integer(-1);
}

struct QueryCounts {
  std::int64_t nodes = 0, looping = 0, dangling = 0, isolated = 0, cycles = 0;
};

// Direct enumeration over the model API.
QueryCounts query_oracle(const ModelState& st, ObjectId g) {
  QueryCounts c;
  const auto nodes = refs_of(st, g, "nodes");
  std::set<ObjectId> touched;
  c.nodes = static_cast<std::int64_t>(nodes.size());
  for (ObjectId e : refs_of(st, g, "edges")) {
    const auto s = end_of(st, e, "src");
    const auto t = end_of(st, e, "trg");
    if (s && t && *s == *t) ++c.looping;
    if (!s || !t) ++c.dangling;
    if (s) touched.insert(*s);
    if (t) touched.insert(*t);
  }
  for (ObjectId n : nodes) c.isolated += touched.count(n) == 0;
  c.cycles = static_cast<std::int64_t>(testing::three_cycle_oracle(st, g));
  return c;
}

void expect_counts(Check& c, const ModelState& out, const QueryCounts& q) {
  c.expect(count_of(out, "nodes") == Value::integer(q.nodes), "node count");
  c.expect(count_of(out, "looping") == Value::integer(q.looping), "looping count");
  c.expect(count_of(out, "dangling") == Value::integer(q.dangling), "dangling count");
  c.expect(count_of(out, "isolated") == Value::integer(q.isolated), "isolated count");
  c.expect(count_of(out, "cycles") == Value::integer(q.cycles), "cycle count");
  c.expect(out.extent("IntResult").size() == 5, "five IntResults");
}

bool ac1(Check& c) {
  const Loaded l("hello-world");
  const RunResult r = l.run();
  const ModelState& st = r.final_state;
  c.expect(st.size() == 2, "exactly two objects");
  c.expect(st.extent("Greeting").size() == 1 && st.extent("Person").size() == 1, "one each");
  if (!c.ok) return false;
  const ObjectId g = st.extent("Greeting")[0];
  const ObjectId p = st.extent("Person")[0];
  c.expect(st.get(g, "text") == Value::string("Hello"), "text");
  c.expect(st.get(p, "name") == Value::string("World"), "name");
  c.expect(refs_of(st, g, "whom") == std::vector<ObjectId>{p}, "whom");
  c.expect(testing::all_pass(verify_cons(l.spec, r, l.params)), "verify_cons");
  return c.ok;
}

bool ac2(Check& c) {
  const Loaded l("graph-queries");
  const ModelState out = l.run().final_state;
  const QueryCounts q = query_oracle(l.input, *l.input.find_label("g"));
  c.expect(q.nodes == 2 && q.looping == 0 && q.dangling == 0 && q.isolated == 0 && q.cycles == 0,
           "oracle disagrees with the listing");
  expect_counts(c, out, q);
  return c.ok;
}

bool ac3(Check& c) {
  const Loaded l("graph-queries-stress");
  const RunResult r = l.run();
  const QueryCounts q = query_oracle(l.input, *l.input.find_label("g"));
  c.expect(q.looping == 1 && q.dangling == 1 && q.isolated == 1 && q.cycles == 1,
           "stress model shape");
  expect_counts(c, r.final_state, q);
  c.expect(r.final_state.extent("ThreeCycle").size() == 1, "one ThreeCycle");
  const auto c1 = std::find_if(r.phases.begin(), r.phases.end(),
                               [](const PhaseStats& p) { return p.label == "C1"; });
  c.expect(c1 != r.phases.end() && c1->applied == 3, "three rotational bindings");
  return c.ok;
}

bool ac4(Check& c) {
  const Loaded l("reverse-edges");
  auto twice = [&](const ModelState& in) {
    return isomorphic(l.run_on(l.run_on(in).final_state).final_state, in);
  };
  c.expect(twice(l.input), "sample graph");
  std::mt19937 rng(4);
  for (int i = 0; i < 20; ++i) c.expect(twice(testing::random_graph(l.schema, rng)), "random graph");
  return c.ok;
}

std::vector<std::string> constraint_blocks(const std::string& text) {
  std::vector<std::string> blocks;
  std::size_t at = text.find("\nconstraint ");
  blocks.push_back(text.substr(0, at + 1));
  while (at != std::string::npos) {
    const std::size_t next = text.find("\nconstraint ", at + 1);
    blocks.push_back(text.substr(at + 1, next == std::string::npos ? next : next - at));
    at = next;
  }
  return blocks;
}

bool ac5(Check& c) {
  const Loaded l("migration");
  const std::map<std::string, std::string> creates{{"C1", "Node2"}, {"C2", "Edge2"}, {"C3", "Graph2"}};
  std::vector<std::string> blocks = constraint_blocks(testing::read_file(l.fixture.spec));
  const std::string header = blocks.front();
  blocks.erase(blocks.begin());
  c.expect(blocks.size() == 3, "three constraints");
  std::sort(blocks.begin(), blocks.end());
  do {
    std::string text = header;
    for (const auto& b : blocks) text += b + "\n";
    const Plan plan = derive_plan(parse_spec(text, l.schema));
    std::vector<std::string> order;
    for (const auto& ph : plan.phases) order.push_back(creates.at(ph.constraint.label));
    c.expect(order == std::vector<std::string>{"Node2", "Edge2", "Graph2"}, "phase order");
  } while (std::next_permutation(blocks.begin(), blocks.end()));

  const RunResult r = l.run();
  const ModelState& st = r.final_state;
  for (auto [from, to] : {std::pair{"Node1", "Node2"}, std::pair{"Edge1", "Edge2"},
                          std::pair{"Graph1", "Graph2"}}) {
    c.expect(st.extent(from).size() == st.extent(to).size(), "entity counts");
    for (ObjectId s : st.extent(from)) {
      std::size_t matches = 0;
      for (ObjectId t : st.extent(to)) matches += st.get(t, "id2") == st.get(s, "id1");
      c.expect(matches == 1, "id preserved");
    }
  }
  auto by_id = [&](const std::string& entity, const Value& id) -> std::optional<ObjectId> {
    for (ObjectId o : st.extent(entity)) {
      if (st.get(o, entity == "Node1" ? "id1" : "id2") == id) return o;
    }
    return std::nullopt;
  };
  for (ObjectId e1 : st.extent("Edge1")) {
    const ObjectId e2 = *by_id("Edge2", st.get(e1, "id1"));
    c.expect(st.get(e2, "text") == Value::string("") && st.is_set(e2, "text"), "Edge2.text");
    for (auto [f1, f2] : {std::pair{"src1", "src2"}, std::pair{"trg1", "trg2"}}) {
      const auto n1 = end_of(st, e1, f1);
      const auto n2 = end_of(st, e2, f2);
      c.expect(n1.has_value() == n2.has_value(), "endpoint presence");
      if (n1 && n2) c.expect(by_id("Node2", st.get(*n1, "id1")) == n2, "endpoint by key");
    }
  }
  c.expect(testing::all_pass(verify_cons(l.spec, r, l.params)), "verify_cons");
  return c.ok;
}

bool ac6(Check& c) {
  const Loaded l("delete-nodes");
  const ModelState st = l.run().final_state;
  c.expect(st.extent("Node").size() == 1, "one node");
  c.expect(st.extent("Edge").empty(), "no edges");
  // full scan: every reference must name a live object
  for (ObjectId id : st.objects()) {
    for (const auto& [feature, value] : st.slots(id)) {
      if (!value.is_collection()) continue;
      for (const auto& item : value.as_collection().items) {
        c.expect(st.contains(item.as_ref()), "dangling reference in " + feature);
      }
    }
  }
  return c.ok;
}

bool ac7(Check& c) {
  const Loaded l("transitive-edges");
  Scope scope;
  scope.schema = l.schema.get();
  const ExprPtr q = resolve(parse_expr(
      "Edge@pre->select(e1, e2 | e1 /= e2 & e1.trg = e2.src & e1.src /= {} & e1.trg /= {} & "
      "e2.trg /= {} & Edge->select(e3 | e3.src = e1.src & e3.trg = e2.trg)->size() = 0)->size()"),
      scope);
  auto check = [&](const ModelState& input) {
    const RunResult r = l.run_on(input);
    const ModelState& st = r.final_state;
    const ObjectId g = *input.find_label("g");
    std::set<testing::Pair> created;
    std::size_t fresh = 0;
    for (ObjectId e : st.extent("Edge")) {
      if (input.contains(e)) continue;
      ++fresh;
      created.emplace(*end_of(st, e, "src"), *end_of(st, e, "trg"));
    }
    c.expect(fresh == created.size() && created == testing::composition_oracle(input, g),
             "created edges");
    std::set<testing::Pair> seen;
    for (ObjectId e : st.extent("Edge")) {
      const auto s = end_of(st, e, "src");
      const auto t = end_of(st, e, "trg");
      if (s && t) c.expect(seen.emplace(*s, *t).second, "duplicate edge");
    }
    c.expect(eval_query(*q, st, &input) == Value::integer(0), "Q = 0");
    return created;
  };
  const auto path = check(l.input);
  c.expect(path == std::set<testing::Pair>{{*l.input.find_label("a"), *l.input.find_label("c")}},
           "a -> c");
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) {
    const ModelState input = testing::random_graph(l.schema, rng, {10, 20, true, false});
    c.expect(check_assumptions(l.spec, input)[0].passed, "Asm2");
    check(input);
  }
  return c.ok;
}

bool ac8(Check& c) {
  for (const auto& name : testing::fixture_names()) {
    const Plan plan = derive_plan(Loaded(name).spec);
    if (name != "transitive-closure") {
      c.expect(plan.all_ok(), name + " rejected");
      continue;
    }
    c.expect(!plan.all_ok(), "closure accepted");
    bool names_edges = false;
    for (const auto& ph : plan.phases) {
      for (const auto& reason : ph.verdict.reasons) {
        names_edges = names_edges || describe(reason).find("(Graph, edges") != std::string::npos;
      }
    }
    c.expect(names_edges, "no (Graph, edges) conflict");
  }
  return c.ok;
}

bool ac9(Check& c) {
  std::mt19937 rng(9);
  for (const auto& name : testing::fixture_names()) {
    const Loaded l(name);
    RunResult r = l.run(RunOptions{true});
    c.expect(testing::all_pass(verify_cons(l.spec, r, l.params)), name + " run output");
    ModelState& st = r.final_state;
    if (name == "reverse-edges") {
      const ObjectId e = st.extent("Edge")[0];
      const Value s = st.get(e, "src");
      st.set(e, "src", st.get(e, "trg"));
      st.set(e, "trg", s);
    } else if (name == "delete-nodes") {
      std::uniform_int_distribution<std::size_t> pick(0, st.extent("Node").size() - 1);
      st.set(st.extent("Node")[pick(rng)], "name", Value::string("n1"));
    } else {
      std::vector<ObjectId> created;
      for (ObjectId id : st.objects()) {
        if (!r.pre_state.state().contains(id)) created.push_back(id);
      }
      c.expect(!created.empty(), name + " created nothing");
      if (created.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, created.size() - 1);
      const ObjectId victim[] = {created[pick(rng)]};
      st.remove(victim);
    }
    const auto verdicts = verify_cons(l.spec, r, l.params);
    const bool caught = std::any_of(verdicts.begin(), verdicts.end(), [](const auto& v) {
      return !v.passed && v.witness.has_value();
    });
    c.expect(caught, name + " perturbation not caught");
  }
  return c.ok;
}

// Random model over the graph-query metamodel, strings drawn from a
// quote-free alphabet.
ModelState random_model(std::shared_ptr<const Schema> schema, std::mt19937& rng) {
  ModelState st = testing::random_graph(schema, rng);
  const std::string alphabet = "abcXYZ019 _-+*/.:;(){}[]<>=!?#@$%&|~'";
  std::uniform_int_distribution<std::size_t> letter(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 12);
  std::uniform_int_distribution<std::int64_t> num(-1000000, 1000000);
  auto word = [&] {
    std::string s;
    for (int i = len(rng); i > 0; --i) s += alphabet[letter(rng)];
    return s;
  };
  const ObjectId g = *st.find_label("g");
  const auto nodes = refs_of(st, g, "nodes");
  for (ObjectId n : nodes) {
    if (len(rng) % 3 == 0) st.set(n, "name", Value::string(word()));
  }
  std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
  for (int i = len(rng) % 4; i > 0; --i) {
    const ObjectId tc = st.create("ThreeCycle");
    for (int k = 0; k < 3; ++k) st.insert(tc, "elements", nodes[pick(rng)]);
    st.insert(g, "cycles", tc);
  }
  for (int i = len(rng) % 4; i > 0; --i) {
    const ObjectId r = st.create("IntResult");
    st.set(r, "query", Value::string(word()));
    if (i % 2) st.set(r, "num", Value::integer(num(rng)));
  }
  return st;
}

bool ac10(Check& c) {
  std::set<std::string> seen_mm;
  for (const auto& name : testing::fixture_names()) {
    const auto f = testing::load_fixture(name);
    for (const auto& path : f.metamodels) {
      const Metamodel mm = parse_metamodel(testing::read_file(path), path.stem().string());
      const std::string printed = print_metamodel(mm);
      c.expect(parse_metamodel(printed, mm.name) == mm, "metamodel " + path.string());
      c.expect(print_metamodel(parse_metamodel(printed, mm.name)) == printed, "metamodel text");
    }
    const Loaded l(name);
    std::vector<const ModelState*> models{&l.input};
    std::optional<ModelState> expected;
    if (f.expected) models.push_back(&expected.emplace(
        parse_model(testing::read_file(*f.expected), l.schema)));
    for (const ModelState* m : models) {
      const std::string text = serialize_model(*m);
      const ModelState back = parse_model(text, l.schema);
      c.expect(isomorphic(back, *m) && serialize_model(back) == text, "model " + name);
    }
  }
  const Loaded l("graph-queries");
  std::mt19937 rng(10);
  for (int i = 0; i < 50; ++i) {
    const ModelState m = random_model(l.schema, rng);
    const std::string text = serialize_model(m);
    const ModelState back = parse_model(text, l.schema);
    c.expect(isomorphic(back, m) && serialize_model(back) == text, "random model");
  }
  return c.ok;
}

}  // namespace
}  // namespace umt

int main() {
  using Criterion = std::pair<const char*, std::function<bool(umt::Check&)>>;
  const std::vector<Criterion> criteria{
      {"hello world", umt::ac1},
      {"graph queries on the example graph", umt::ac2},
      {"graph queries on the stress graph", umt::ac3},
      {"reverse edges is an involution", umt::ac4},
      {"migration phase order and mapping", umt::ac5},
      {"delete nodes", umt::ac6},
      {"transitive edges", umt::ac7},
      {"interference verdicts", umt::ac8},
      {"verification by construction", umt::ac9},
      {"parse/serialize round trips", umt::ac10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    umt::Check check;
    bool ok = false;
    try {
      ok = criteria[i].second(check);
    } catch (const std::exception& e) {
      check.why << "exception: " << e.what();
    }
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "AC" << (i + 1) << " " << criteria[i].first;
    if (!ok) std::cout << " (" << check.why.str() << ")";
    std::cout << "\n";
    failed += !ok;
  }
  return failed == 0 ? 0 : 1;
}
