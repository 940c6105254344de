#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "umt/expr.hpp"
#include "umt/metamodel.hpp"

namespace umt {

// Static environment for name resolution. Names resolve in this order:
// innermost binder (an implicit select binder contributes its element's
// features), outer binders, parameters, features of the context entity,
// then entity names (as type extents).
struct Scope {
  struct Binder {
    std::string name;
    Type type;
    bool implicit = false;
  };

  const Schema* schema = nullptr;
  std::optional<std::string> context;
  std::map<std::string, ValueType> params;
  std::vector<Binder> binders;

  // Whether a bare identifier would resolve to something in this scope.
  bool resolves(const std::string& name) const;
};

// Produces a resolved, typed copy of `raw`; throws SpecError on unresolved
// names or ill-typed operands. A navigation whose receiver is an otherwise
// unresolvable identifier is read as a navigation from the context object.
ExprPtr resolve(const ExprPtr& raw, Scope& scope);

}  // namespace umt
