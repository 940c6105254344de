#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "umt/model.hpp"
#include "umt/planner.hpp"
#include "umt/spec.hpp"

namespace umt {

enum class EffectKind { Create, Assign, Insert, Delete };

const char* to_string(EffectKind kind);

// One state change made while establishing a postcondition.
struct Effect {
  std::size_t phase = 0;  // 1-based
  std::string binding;    // e.g. "self = g1, e1 = e2"
  EffectKind kind = EffectKind::Create;
  std::string entity;     // entity of `target`
  ObjectId target;
  std::string label;      // label of `target`
  std::string feature;    // Assign / Insert
  Value value;            // assigned value or inserted member
};

struct PhaseStats {
  std::string label;
  std::size_t iterations = 0;  // bindings enumerated
  std::size_t applied = 0;     // bindings whose antecedent held
};

struct RunResult {
  ModelState final_state;
  Snapshot pre_state;
  std::vector<Effect> trace;
  std::map<std::string, std::size_t> created;
  std::map<std::string, std::size_t> deleted;
  std::vector<PhaseStats> phases;
};

struct RunOptions {
  // Execute phases whose interference verdict is Rejected.
  bool force = false;
};

// Executes the plan against `state`. Throws PlanError for rejected phases
// (unless forced) and EvalError on runtime failures.
RunResult run(const Plan& plan, ModelState state, const std::map<std::string, Value>& params,
              RunOptions options = {});

struct ConstraintVerdict {
  std::string label;
  std::string text;
  bool passed = true;
  std::optional<Witness> witness;
};

// Declarative check of every constraint over (final, pre).
std::vector<ConstraintVerdict> verify_cons(const TransformationSpec& spec,
                                           const ModelState& final_state,
                                           const ModelState& pre_state,
                                           const std::map<std::string, Value>& params);
std::vector<ConstraintVerdict> verify_cons(const TransformationSpec& spec,
                                           const RunResult& result,
                                           const std::map<std::string, Value>& params);

// Side-effect free evaluation; @pre reads `pre` when given.
Value eval_query(const Expr& e, const ModelState& state, const ModelState* pre,
                 const std::map<std::string, Value>& params = {});

// Re-applies a trace to a copy of the pre-state.
ModelState replay(const ModelState& pre, const std::vector<Effect>& trace);

}  // namespace umt
