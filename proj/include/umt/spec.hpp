#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "umt/eval.hpp"
#include "umt/expr.hpp"
#include "umt/metamodel.hpp"
#include "umt/model.hpp"

namespace umt {

enum class ConstraintKind { Creation, UpdateInPlace, Deletion, Static };

const char* to_string(ConstraintKind kind);

// `v : domain` conjunct lifted out of an antecedent.
struct Iterator {
  std::string variable;
  ExprPtr domain;
};

// Universally quantified rule: for each context object and each iterator
// binding, antecedent implies succedent.
struct Quantified {
  std::string label;
  std::optional<std::string> context;
  std::vector<Iterator> iterators;
  ExprPtr antecedent;  // residual, `true` when absent
  ExprPtr succedent;
  std::string text;    // source text, for reporting
};

struct Constraint : Quantified {
  ConstraintKind kind = ConstraintKind::Creation;
  // Shape of the succedent; equals `kind` except for Static constraints.
  ConstraintKind shape = ConstraintKind::Creation;
};

struct Assumption : Quantified {};

struct Parameter {
  std::string name;
  ValueType type = ValueType::String;
};

struct TransformationSpec {
  std::string name;
  std::vector<Parameter> parameters;
  std::vector<Assumption> assumptions;
  std::vector<Constraint> constraints;
  std::shared_ptr<const Schema> schema;
};

// Parses, resolves against `schema`, extracts iterators and classifies each
// constraint. Throws ParseError or SpecError.
TransformationSpec parse_spec(std::string_view text, std::shared_ptr<const Schema> schema);

// Classifies a resolved constraint; throws SpecError when the succedent has
// no constructive reading.
ConstraintKind classify(const Constraint& c);

// First binding (context object, then iterator values) under which the
// antecedent holds and the body does not.
struct Witness {
  std::vector<std::pair<std::string, Value>> binding;
};

struct AssumptionVerdict {
  std::string label;
  std::string text;
  bool passed = true;
  std::optional<Witness> witness;
};

std::vector<AssumptionVerdict> check_assumptions(
    const TransformationSpec& spec, const ModelState& state,
    const std::map<std::string, Value>& params = {});

// Converts `name=value` strings to typed parameter values. Throws SpecError
// for unknown or missing parameters.
std::map<std::string, Value> bind_parameters(const TransformationSpec& spec,
                                             const std::map<std::string, std::string>& raw);

// Enumerates every binding of a quantified rule in extent order: the
// context extent and each iterator domain are copied when their loop is
// entered. `visit` receives the environment with all variables bound and
// returns false to stop early. Domains are evaluated in `mode` against
// `state` (and env.pre for @pre).
template <typename Visit>
void for_each_binding(const Quantified& q, Env& env, const ModelState& state, EvalMode mode,
                      Visit&& visit);

std::string describe_binding(const ModelState& state, const Witness& w);

}  // namespace umt

#include "umt/spec_inl.hpp"
