#pragma once

// Shared helpers for the test binaries: fixture loading, random graph
// generation and brute-force oracles that read models through the
// ModelState API only (never through the expression evaluator).

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "umt/engine.hpp"
#include "umt/metamodel.hpp"
#include "umt/model.hpp"
#include "umt/planner.hpp"
#include "umt/spec.hpp"

namespace umt::testing {

inline std::filesystem::path fixtures_dir() { return UMT_FIXTURES_DIR; }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Fixture {
  std::string name;
  std::filesystem::path dir;
  std::vector<std::filesystem::path> metamodels;
  std::filesystem::path spec;
  std::optional<std::filesystem::path> input;
  std::optional<std::filesystem::path> expected;
  int exit = 0;
  std::map<std::string, std::string> params;

  std::vector<std::string> cli_args(const std::string& command) const {
    std::vector<std::string> args{command};
    for (const auto& m : metamodels) {
      args.push_back("-m");
      args.push_back(m.string());
    }
    args.push_back("-s");
    args.push_back(spec.string());
    if (input) {
      args.push_back("-i");
      args.push_back(input->string());
    }
    for (const auto& [k, v] : params) {
      args.push_back("--param");
      args.push_back(k + "=" + v);
    }
    return args;
  }
};

inline Fixture load_fixture(const std::string& name) {
  Fixture f;
  f.name = name;
  f.dir = fixtures_dir() / name;
  const auto j = nlohmann::json::parse(read_file(f.dir / "fixture.json"));
  for (const auto& m : j.at("metamodels")) f.metamodels.push_back(f.dir / m.get<std::string>());
  f.spec = f.dir / j.at("spec").get<std::string>();
  if (!j.at("input").is_null()) f.input = f.dir / j.at("input").get<std::string>();
  if (!j.at("expected").is_null()) f.expected = f.dir / j.at("expected").get<std::string>();
  f.exit = j.at("exit").get<int>();
  for (const auto& [k, v] : j.at("params").items()) f.params[k] = v.get<std::string>();
  return f;
}

inline std::vector<std::string> fixture_names() {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(fixtures_dir())) {
    if (std::filesystem::exists(entry.path() / "fixture.json")) {
      names.push_back(entry.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

// Everything needed to run a fixture in-process.
struct Loaded {
  Fixture fixture;
  std::shared_ptr<const Schema> schema;
  TransformationSpec spec;
  ModelState input;
  std::map<std::string, Value> params;

  explicit Loaded(const std::string& name)
      : fixture(load_fixture(name)),
        schema(load_schema(fixture)),
        spec(parse_spec(read_file(fixture.spec), schema)),
        input(fixture.input ? parse_model(read_file(*fixture.input), schema)
                            : ModelState(schema)),
        params(bind_parameters(spec, fixture.params)) {}

  static std::shared_ptr<const Schema> load_schema(const Fixture& f) {
    std::vector<Metamodel> mms;
    for (const auto& m : f.metamodels) {
      mms.push_back(parse_metamodel(read_file(m), m.stem().string()));
    }
    return std::make_shared<const Schema>(std::move(mms));
  }

  RunResult run(RunOptions options = {}) const { return run_on(input, options); }

  RunResult run_on(const ModelState& state, RunOptions options = {}) const {
    return umt::run(derive_plan(spec), state, params, options);
  }
};

inline std::shared_ptr<const Schema> schema_from(const std::string& text) {
  return std::make_shared<const Schema>(std::vector<Metamodel>{parse_metamodel(text, "mm")});
}

inline const char* kGraphMetamodel = R"(
entity Graph {
  nodes : set(Node);
  edges : set(Edge);
}
entity Node {
  name : String;
}
entity Edge {
  src : opt(Node);
  trg : opt(Node);
}
)";

inline const char* kSampleGraph = R"(g : Graph
n1 : Node
n1.name = "n1"
n1 : g.nodes
n2 : Node
n2.name = "n2"
n2 : g.nodes
e : Edge
n1 : e.src
n2 : e.trg
e : g.edges
)";

struct GraphShape {
  int max_nodes = 10;
  int max_edges = 20;
  bool dangling = true;    // edges may lack src or trg
  bool parallel = true;    // several edges with the same (src, trg), missing ends included
};

// A single Graph with up to max_nodes nodes n0.. and max_edges edges.
inline ModelState random_graph(std::shared_ptr<const Schema> schema, std::mt19937& rng,
                               GraphShape shape = {}) {
  ModelState st(std::move(schema));
  const ObjectId g = st.declare("Graph", "g");
  std::uniform_int_distribution<int> node_count(1, shape.max_nodes);
  const int n = node_count(rng);
  std::vector<ObjectId> nodes;
  for (int i = 0; i < n; ++i) {
    const ObjectId id = st.declare("Node", "n" + std::to_string(i));
    st.set(id, "name", Value::string("n" + std::to_string(i)));
    st.insert(g, "nodes", id);
    nodes.push_back(id);
  }
  std::uniform_int_distribution<int> edge_count(0, shape.max_edges);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::bernoulli_distribution missing(0.1);
  std::set<std::pair<int, int>> used;
  const int m = edge_count(rng);
  int made = 0;
  for (int attempt = 0; attempt < 4 * m && made < m; ++attempt) {
    int s = pick(rng);
    int t = pick(rng);
    if (shape.dangling && missing(rng)) s = -1;
    if (shape.dangling && missing(rng)) t = -1;
    if (!shape.parallel && !used.insert({s, t}).second) continue;
    const ObjectId e = st.declare("Edge", "e" + std::to_string(made++));
    if (s >= 0) st.insert(e, "src", nodes[s]);
    if (t >= 0) st.insert(e, "trg", nodes[t]);
    st.insert(g, "edges", e);
  }
  return st;
}

// Endpoint of an opt end, if set.
inline std::optional<ObjectId> end_of(const ModelState& st, ObjectId obj, const char* feature) {
  const Value v = st.get(obj, feature);
  const auto& items = v.as_collection().items;
  if (items.empty()) return std::nullopt;
  return items.front().as_ref();
}

inline std::vector<ObjectId> refs_of(const ModelState& st, ObjectId obj, const char* feature) {
  std::vector<ObjectId> out;
  const Value v = st.get(obj, feature);
  for (const auto& item : v.as_collection().items) out.push_back(item.as_ref());
  return out;
}

using Pair = std::pair<ObjectId, ObjectId>;

// (src, trg) of every non-dangling edge in g.edges.
inline std::set<Pair> edge_pairs(const ModelState& st, ObjectId g) {
  std::set<Pair> out;
  for (ObjectId e : refs_of(st, g, "edges")) {
    auto s = end_of(st, e, "src");
    auto t = end_of(st, e, "trg");
    if (s && t) out.emplace(*s, *t);
  }
  return out;
}

// Compositions e1;e2 of non-dangling pre edges with no direct edge.
inline std::set<Pair> composition_oracle(const ModelState& pre, ObjectId g) {
  const std::set<Pair> direct = edge_pairs(pre, g);
  std::set<Pair> out;
  for (const auto& [a, b] : direct) {
    for (const auto& [c, d] : direct) {
      if (b == c && !direct.count({a, d})) out.emplace(a, d);
    }
  }
  return out;
}

// Number of 3-element node sets {a, b, c} with edges a->b, b->c, c->a in
// some orientation.
inline std::size_t three_cycle_oracle(const ModelState& st, ObjectId g) {
  const std::set<Pair> edges = edge_pairs(st, g);
  const std::vector<ObjectId> nodes = refs_of(st, g, "nodes");
  std::size_t count = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      for (std::size_t k = j + 1; k < nodes.size(); ++k) {
        const ObjectId a = nodes[i], b = nodes[j], c = nodes[k];
        const bool forward = edges.count({a, b}) && edges.count({b, c}) && edges.count({c, a});
        const bool backward = edges.count({a, c}) && edges.count({c, b}) && edges.count({b, a});
        if (forward || backward) ++count;
      }
    }
  }
  return count;
}

// Objects whose slots reference something outside the state.
inline std::vector<std::string> dangling_references(const ModelState& st) {
  std::vector<std::string> out;
  for (ObjectId id : st.objects()) {
    for (const auto& [feature, value] : st.slots(id)) {
      if (!value.is_collection()) continue;
      for (const auto& item : value.as_collection().items) {
        if (item.is_ref() && !st.contains(item.as_ref())) {
          out.push_back(st.label_of(id) + "." + feature);
        }
      }
    }
  }
  return out;
}

inline std::optional<ObjectId> result_named(const ModelState& st, const std::string& query) {
  for (ObjectId r : st.extent("IntResult")) {
    if (st.get(r, "query").as_string() == query) return r;
  }
  return std::nullopt;
}

inline bool all_pass(const std::vector<ConstraintVerdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const ConstraintVerdict& v) { return v.passed; });
}

}  // namespace umt::testing
