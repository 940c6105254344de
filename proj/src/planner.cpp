#include "umt/planner.hpp"

#include <map>
#include <sstream>

#include "umt/eval.hpp"

namespace umt {

std::string describe(const Conflict& c) {
  return to_string(c.write) + " conflicts with read " + to_string(c.read) + " [" + c.rule + "]";
}

bool Plan::all_ok() const {
  for (const auto& p : phases) {
    if (!p.verdict.ok()) return false;
  }
  return true;
}

namespace {

void add_use(const Expr& e, std::set<std::string>& out) {
  switch (e.kind) {
    case ExprKind::TypeExtent:
    case ExprKind::KeyLookup:
      out.insert(e.name);
      break;
    case ExprKind::Nav:
      if (e.type.is_object_valued()) out.insert(e.type.entity);
      break;
    default:
      break;
  }
}

void collect_uses(const Expr& e, std::set<std::string>& out) {
  add_use(e, out);
  for (const auto& a : e.args) collect_uses(*a, out);
}

// Entities read on the value side of a postcondition. Assignment and
// insertion targets and the receivers of creation quantifiers are skipped.
void collect_post_uses(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::Binary && e.op == BinaryOp::And) {
    collect_post_uses(e.arg(0), out);
    collect_post_uses(e.arg(1), out);
  } else if (is_creation_quantifier(e)) {
    collect_post_uses(e.arg(1), out);
  } else if (e.kind == ExprKind::Binary && e.op == BinaryOp::Eq) {
    if (is_assignable(e.arg(0))) {
      collect_uses(e.arg(1), out);
    } else if (is_assignable(e.arg(1))) {
      collect_uses(e.arg(0), out);
    }
  } else if (e.kind == ExprKind::Binary && e.op == BinaryOp::In) {
    collect_uses(e.arg(0), out);
  } else {
    collect_uses(e, out);
  }
}

std::set<std::string> uses_of(const Constraint& c) {
  std::set<std::string> out;
  if (c.context) out.insert(*c.context);
  collect_uses(*c.antecedent, out);
  for (const auto& it : c.iterators) collect_uses(*it.domain, out);
  collect_post_uses(*c.succedent, out);
  return out;
}

std::set<std::string> creates_of(const Constraint& c) {
  std::set<std::string> out;
  for (const auto& w : write_footprint(*c.succedent)) {
    if (w.kind == WriteKind::CreateExtent) out.insert(w.entity);
  }
  return out;
}

bool creates_related(const Schema& schema, const std::set<std::string>& created,
                     const std::string& entity) {
  for (const auto& e : created) {
    if (schema.related(e, entity)) return true;
  }
  return false;
}

[[noreturn]] void report_cycle(const std::vector<std::string>& path, const std::string& closing,
                               const char* what) {
  std::string text;
  bool started = false;
  for (const auto& n : path) {
    if (n == closing) started = true;
    if (started) text += n + " < ";
  }
  throw PlanError(std::string("cyclic ") + what + ": " + text + closing);
}

// Depth-first search over a graph given as adjacency lists.
void find_cycle(const std::map<std::string, std::vector<std::string>>& graph, const char* what) {
  std::map<std::string, int> colour;
  std::vector<std::string> path;
  auto visit = [&](auto& self, const std::string& n) -> void {
    colour[n] = 1;
    path.push_back(n);
    auto it = graph.find(n);
    if (it != graph.end()) {
      for (const auto& m : it->second) {
        if (colour[m] == 1) report_cycle(path, m, what);
        if (colour[m] == 0) self(self, m);
      }
    }
    path.pop_back();
    colour[n] = 2;
  };
  for (const auto& [n, _] : graph) {
    if (colour[n] == 0) visit(visit, n);
  }
}

struct LiveRead {
  ReadItem item;
  bool deletion_operand = false;
};

}  // namespace

EntityOrder entity_order(const TransformationSpec& spec) {
  const Schema& schema = *spec.schema;
  std::vector<std::set<std::string>> creates;
  for (const auto& c : spec.constraints) creates.push_back(creates_of(c));

  EntityOrder order;
  for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
    if (creates[i].empty()) continue;
    for (const auto& used : uses_of(spec.constraints[i])) {
      bool made_elsewhere = false;
      for (std::size_t j = 0; j < spec.constraints.size(); ++j) {
        if (j != i && creates_related(schema, creates[j], used)) made_elsewhere = true;
      }
      if (!made_elsewhere) continue;
      for (const auto& made : creates[i]) {
        if (made != used) order.relation.emplace(used, made);
      }
    }
  }
  std::map<std::string, std::vector<std::string>> graph;
  for (const auto& [a, b] : order.relation) graph[a].push_back(b);
  find_cycle(graph, "entity order");
  return order;
}

Verdict non_interference(const Constraint& c, const Schema& schema) {
  std::vector<LiveRead> reads;
  auto add_reads = [&](const std::set<ReadItem>& items, bool deletion_operand) {
    for (const auto& r : items) {
      if (!r.at_pre) reads.push_back({r, deletion_operand});
    }
  };
  if (c.context) reads.push_back({{*c.context, kExtent, false}, false});
  for (const auto& it : c.iterators) {
    add_reads(read_footprint(*it.domain), false);
    if (it.domain->kind != ExprKind::AtPre && it.domain->type.element == Type::Kind::Object) {
      reads.push_back({{it.domain->type.entity, kExtent, false}, false});
    }
  }
  add_reads(read_footprint(*c.antecedent), false);
  const PostReads post = post_read_footprint(*c.succedent);
  for (const auto& r : post.reads) {
    if (!r.at_pre) reads.push_back({r, post.deletion_operand_reads.count(r) != 0});
  }

  std::set<std::tuple<std::string, ReadItem, WriteItem>> found;
  for (const auto& w : write_footprint(*c.succedent)) {
    if (w.kind == WriteKind::AssignFeature && w.new_object_only) continue;
    if (c.context && (w.kind == WriteKind::CreateExtent || w.kind == WriteKind::DeleteFrom) &&
        schema.related(w.entity, *c.context)) {
      found.emplace("context-extent", ReadItem{*c.context, kExtent, false}, w);
    }
    for (const auto& r : reads) {
      if (!schema.related(r.item.entity, w.entity)) continue;
      switch (w.kind) {
        case WriteKind::CreateExtent:
          if (r.item.feature == kExtent) found.emplace("create-vs-extent", r.item, w);
          break;
        case WriteKind::InsertInto:
          if (r.item.feature == w.feature) found.emplace("insert-vs-read", r.item, w);
          break;
        case WriteKind::AssignFeature:
          if (r.item.feature == w.feature) found.emplace("assign-vs-read", r.item, w);
          break;
        case WriteKind::DeleteFrom:
          if (!r.deletion_operand) found.emplace("delete-vs-read", r.item, w);
          break;
      }
    }
  }
  Verdict v;
  for (const auto& [rule, r, w] : found) v.reasons.push_back({rule, r, w});
  return v;
}

Plan derive_plan(const TransformationSpec& spec) {
  const Schema& schema = *spec.schema;
  Plan plan;
  plan.order = entity_order(spec);

  const std::size_t n = spec.constraints.size();
  std::vector<std::set<std::string>> creates;
  for (const auto& c : spec.constraints) creates.push_back(creates_of(c));

  // q -> p when q creates something below T1 and p something below T2.
  std::vector<std::set<std::size_t>> succ(n);
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& [t1, t2] : plan.order.relation) {
    for (std::size_t q = 0; q < n; ++q) {
      if (!creates_related(schema, creates[q], t1)) continue;
      for (std::size_t p = 0; p < n; ++p) {
        if (p == q || !creates_related(schema, creates[p], t2)) continue;
        if (succ[q].insert(p).second) ++indegree[p];
      }
    }
  }

  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.insert(i);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const std::size_t i = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(i);
    for (std::size_t p : succ[i]) {
      if (--indegree[p] == 0) ready.insert(p);
    }
  }
  if (order.size() != n) {
    std::map<std::string, std::vector<std::string>> graph;
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t p : succ[q]) {
        graph[spec.constraints[q].label].push_back(spec.constraints[p].label);
      }
    }
    find_cycle(graph, "phase order");
    throw PlanError("cyclic phase order");
  }

  for (std::size_t i : order) {
    const Constraint& c = spec.constraints[i];
    plan.phases.push_back({i, c, non_interference(c, schema)});
  }
  return plan;
}

std::string print_plan(const Plan& plan) {
  std::ostringstream out;
  for (std::size_t i = 0; i < plan.phases.size(); ++i) {
    const Phase& p = plan.phases[i];
    const Constraint& c = p.constraint;
    out << "phase " << i + 1 << ": " << c.label << " (" << to_string(c.kind) << ")";
    out << " on " << (c.context ? *c.context : "-");
    out << " iterators [";
    for (std::size_t k = 0; k < c.iterators.size(); ++k) {
      if (k) out << ", ";
      out << c.iterators[k].variable << " : " << print_expr(*c.iterators[k].domain);
    }
    out << "] ";
    if (p.verdict.ok()) {
      out << "Ok\n";
    } else {
      out << "Rejected\n";
      for (const auto& r : p.verdict.reasons) out << "  " << describe(r) << "\n";
    }
  }
  for (const auto& [a, b] : plan.order.relation) out << a << " < " << b << "\n";
  return out.str();
}

}  // namespace umt
