#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "umt/expr.hpp"
#include "umt/model.hpp"
#include "umt/value.hpp"

namespace umt {

// Query mode rejects effectful forms (creation quantifiers over a type
// extent, ->isDeleted()). Verify mode reads them declaratively: existence of
// a matching instance, and absence of the objects to delete.
enum class EvalMode { Query, Verify };

struct Env {
  std::vector<std::pair<std::string, Value>> bindings;
  std::optional<ObjectId> self;
  const std::map<std::string, Value>* params = nullptr;
  const ModelState* pre = nullptr;

  void push(std::string name, Value v) { bindings.emplace_back(std::move(name), std::move(v)); }
  void pop() { bindings.pop_back(); }
  const Value* lookup(const std::string& name) const;
};

// Evaluates a resolved expression. Never mutates `state`.
Value eval(const Expr& e, Env& env, const ModelState& state,
           EvalMode mode = EvalMode::Query);

// Whether an Exists/Exists1 node is a creation form (quantifies over a type
// extent that is not under @pre).
bool is_creation_quantifier(const Expr& e);

}  // namespace umt
