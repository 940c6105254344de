#include "umt/engine.hpp"

#include <algorithm>

#include "umt/footprint.hpp"

namespace umt {

const char* to_string(EffectKind kind) {
  switch (kind) {
    case EffectKind::Create: return "create";
    case EffectKind::Assign: return "assign";
    case EffectKind::Insert: return "insert";
    case EffectKind::Delete: return "delete";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(const Expr& at, const std::string& message) {
  throw EvalError("line " + std::to_string(at.pos.line) + ", column " +
                  std::to_string(at.pos.column) + ": " + message);
}

bool mentions_var(const Expr& e, const std::string& name) {
  if (e.kind == ExprKind::Var && e.name == name) return true;
  for (const auto& a : e.args) {
    if (mentions_var(*a, name)) return true;
  }
  return false;
}

bool has_creation(const Expr& e) {
  if (is_creation_quantifier(e)) return true;
  for (const auto& a : e.args) {
    if (has_creation(*a)) return true;
  }
  return false;
}

// `v.f = rhs` with rhs creation-free and independent of v.
struct IdentityAtom {
  std::string feature;
  const Expr* value = nullptr;
};

std::optional<IdentityAtom> identity_atom(const Expr& atom, const std::string& var) {
  if (atom.kind != ExprKind::Binary || atom.op != BinaryOp::Eq) return std::nullopt;
  for (int side = 0; side < 2; ++side) {
    const Expr& target = atom.arg(side);
    const Expr& value = atom.arg(1 - side);
    if (target.kind == ExprKind::Nav && target.arg(0).kind == ExprKind::Var &&
        target.arg(0).name == var && !has_creation(value) && !mentions_var(value, var)) {
      return IdentityAtom{target.name, &value};
    }
  }
  return std::nullopt;
}

class Executor {
 public:
  Executor(RunResult& result, const std::map<std::string, Value>& params)
      : result_(result), st_(result.final_state) {
    env_.params = &params;
    env_.pre = &result.pre_state.state();
  }

  void run_phase(std::size_t index, const Phase& phase) {
    const Constraint& c = phase.constraint;
    phase_ = index;
    PhaseStats stats;
    stats.label = c.label;
    try {
      for_each_binding(c, env_, st_, EvalMode::Query, [&](Env& env) {
        ++stats.iterations;
        if (!bound_objects_exist(env)) return true;
        if (!eval(*c.antecedent, env, st_, EvalMode::Query).truthy()) return true;
        ++stats.applied;
        binding_ = describe(env);
        establish_top(*c.succedent);
        return true;
      });
    } catch (const ModelError& e) {
      throw EvalError(c.label + ": " + e.what());
    } catch (const EvalError& e) {
      throw EvalError(c.label + ": " + e.what());
    }
    result_.phases.push_back(std::move(stats));
  }

 private:
  bool bound_objects_exist(const Env& env) const {
    if (env.self && !st_.contains(*env.self)) return false;
    for (const auto& [_, v] : env.bindings) {
      if (v.is_ref() && !st_.contains(v.as_ref())) return false;
    }
    return true;
  }

  std::string describe(const Env& env) const {
    Witness w;
    if (env.self) w.binding.emplace_back("self", Value::ref(*env.self));
    for (const auto& b : env.bindings) w.binding.push_back(b);
    return describe_binding(st_, w);
  }

  Value query(const Expr& e) { return eval(e, env_, st_, EvalMode::Query); }

  void record(EffectKind kind, ObjectId target, std::string feature = {}, Value value = {}) {
    Effect fx;
    fx.phase = phase_ + 1;
    fx.binding = binding_;
    fx.kind = kind;
    fx.entity = st_.entity_of(target);
    fx.target = target;
    fx.label = st_.label_of(target);
    fx.feature = std::move(feature);
    fx.value = std::move(value);
    result_.trace.push_back(std::move(fx));
  }

  void establish_top(const Expr& post) {
    const auto parts = conjuncts(std::make_shared<const Expr>(post));
    const bool deletion = std::all_of(parts.begin(), parts.end(), [](const ExprPtr& p) {
      return p->kind == ExprKind::IsDeleted;
    });
    if (deletion && !parts.empty()) {
      // Every operand is evaluated before anything is deleted.
      std::vector<ObjectId> doomed;
      for (const auto& p : parts) {
        const Value v = coerce_to_collection(query(p->arg(0)));
        for (const auto& item : v.as_collection().items) {
          if (!item.is_ref()) fail(*p, "->isDeleted() on a non-object collection");
          if (std::find(doomed.begin(), doomed.end(), item.as_ref()) == doomed.end()) {
            doomed.push_back(item.as_ref());
          }
        }
      }
      for (ObjectId id : doomed) {
        if (!st_.contains(id)) continue;
        record(EffectKind::Delete, id);
        ++result_.deleted[st_.entity_of(id)];
        const ObjectId one[] = {id};
        st_.remove(one);
      }
      return;
    }
    establish(post);
  }

  void establish(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Binary:
        if (e.op == BinaryOp::And) {
          establish(e.arg(0));
          establish(e.arg(1));
          return;
        }
        if (e.op == BinaryOp::Eq) {
          if (is_assignable(e.arg(0))) {
            assign(e.arg(0), query(e.arg(1)));
          } else if (is_assignable(e.arg(1))) {
            assign(e.arg(1), query(e.arg(0)));
          } else {
            fail(e, "non-constructive atom: " + print_expr(e));
          }
          return;
        }
        if (e.op == BinaryOp::In && is_assignable(e.arg(1))) {
          insert(e.arg(1), query(e.arg(0)));
          return;
        }
        fail(e, "non-constructive atom: " + print_expr(e));
      case ExprKind::Exists:
      case ExprKind::Exists1:
        if (!is_creation_quantifier(e)) fail(e, "non-constructive atom: " + print_expr(e));
        create(e);
        return;
      case ExprKind::IsDeleted:
        fail(e, "->isDeleted() must be a top-level conjunct");
      case ExprKind::BoolLit:
        if (e.int_value) return;
        fail(e, "cannot establish false");
      default:
        fail(e, "non-constructive atom: " + print_expr(e));
    }
  }

  ObjectId receiver(const Expr& target) {
    const Value r = query(target.arg(0));
    if (!r.is_ref()) fail(target, "assignment receiver is not an object");
    if (!st_.contains(r.as_ref())) fail(target, "assignment receiver no longer exists");
    return r.as_ref();
  }

  void assign(const Expr& target, Value v) {
    const ObjectId id = receiver(target);
    const Type::Kind k = target.type.kind;
    if ((k == Type::Kind::Int || k == Type::Kind::String) && v.is_collection()) {
      const auto& items = v.as_collection().items;
      if (items.size() != 1) {
        fail(target, "cannot assign a collection of size " + std::to_string(items.size()) +
                         " to attribute '" + target.name + "'");
      }
      v = items.front();
    }
    if (st_.is_set(id, target.name) && ocl_equal(st_.get(id, target.name), v)) return;
    st_.set(id, target.name, v);
    record(EffectKind::Assign, id, target.name, st_.get(id, target.name));
  }

  void insert(const Expr& target, const Value& members) {
    const ObjectId id = receiver(target);
    const Value all = coerce_to_collection(members);
    for (const auto& m : all.as_collection().items) {
      if (!m.is_ref()) fail(target, "inserted element is not an object");
      if (st_.insert(id, target.name, m.as_ref())) {
        record(EffectKind::Insert, id, target.name, m);
      }
    }
  }

  void create(const Expr& q) {
    const std::string& entity = q.arg(0).name;
    const std::string& var = q.binders[0];
    const Expr& body = q.arg(1);
    const auto atoms = conjuncts(q.args[1]);

    if (q.kind == ExprKind::Exists1) {
      std::vector<std::pair<IdentityAtom, Value>> identity;
      std::vector<ExprPtr> rest;
      for (const auto& a : atoms) {
        if (auto id = identity_atom(*a, var)) {
          identity.emplace_back(*id, query(*id->value));
        } else {
          rest.push_back(a);
        }
      }
      const std::vector<ObjectId> candidates = st_.extent(entity);
      for (ObjectId cand : candidates) {
        bool match = true;
        for (const auto& [atom, value] : identity) {
          if (!ocl_equal(st_.get(cand, atom.feature), value)) {
            match = false;
            break;
          }
        }
        if (!match) continue;
        env_.push(var, Value::ref(cand));
        for (const auto& a : rest) establish(*a);
        env_.pop();
        return;
      }
    }

    const ObjectId fresh = st_.create(entity);
    record(EffectKind::Create, fresh);
    ++result_.created[entity];
    env_.push(var, Value::ref(fresh));
    establish(body);
    env_.pop();
  }

  RunResult& result_;
  ModelState& st_;
  Env env_;
  std::size_t phase_ = 0;
  std::string binding_;
};

Value translate(const Value& v, const std::map<ObjectId, ObjectId>& ids) {
  if (v.is_ref()) {
    auto it = ids.find(v.as_ref());
    return Value::ref(it == ids.end() ? v.as_ref() : it->second);
  }
  if (v.is_collection()) {
    std::vector<Value> items;
    for (const auto& item : v.as_collection().items) items.push_back(translate(item, ids));
    return Value::collection(std::move(items), v.as_collection().ordered);
  }
  return v;
}

}  // namespace

RunResult run(const Plan& plan, ModelState state, const std::map<std::string, Value>& params,
              RunOptions options) {
  if (!options.force) {
    for (std::size_t i = 0; i < plan.phases.size(); ++i) {
      const Phase& p = plan.phases[i];
      if (p.verdict.ok()) continue;
      std::string why;
      for (const auto& r : p.verdict.reasons) why += "\n  " + describe(r);
      throw PlanError("phase " + std::to_string(i + 1) + " (" + p.constraint.label +
                      ") fails the non-interference check:" + why);
    }
  }
  Snapshot pre = state.snapshot();
  RunResult result{std::move(state), std::move(pre), {}, {}, {}, {}};
  Executor exec(result, params);
  for (std::size_t i = 0; i < plan.phases.size(); ++i) exec.run_phase(i, plan.phases[i]);
  return result;
}

std::vector<ConstraintVerdict> verify_cons(const TransformationSpec& spec,
                                           const ModelState& final_state,
                                           const ModelState& pre_state,
                                           const std::map<std::string, Value>& params) {
  std::vector<ConstraintVerdict> out;
  for (const auto& c : spec.constraints) {
    ConstraintVerdict v;
    v.label = c.label;
    v.text = c.text;
    Env env;
    env.params = &params;
    env.pre = &pre_state;
    for_each_binding(c, env, final_state, EvalMode::Verify, [&](Env& e) {
      if (!eval(*c.antecedent, e, final_state, EvalMode::Verify).truthy()) return true;
      if (eval(*c.succedent, e, final_state, EvalMode::Verify).truthy()) return true;
      Witness w;
      if (e.self) w.binding.emplace_back("self", Value::ref(*e.self));
      for (const auto& b : e.bindings) w.binding.push_back(b);
      v.passed = false;
      v.witness = std::move(w);
      return false;
    });
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<ConstraintVerdict> verify_cons(const TransformationSpec& spec,
                                           const RunResult& result,
                                           const std::map<std::string, Value>& params) {
  return verify_cons(spec, result.final_state, result.pre_state.state(), params);
}

Value eval_query(const Expr& e, const ModelState& state, const ModelState* pre,
                 const std::map<std::string, Value>& params) {
  Env env;
  env.params = &params;
  env.pre = pre;
  return eval(e, env, state, EvalMode::Query);
}

ModelState replay(const ModelState& pre, const std::vector<Effect>& trace) {
  ModelState st = pre;
  std::map<ObjectId, ObjectId> ids;
  auto map_id = [&](ObjectId id) {
    auto it = ids.find(id);
    return it == ids.end() ? id : it->second;
  };
  for (const auto& fx : trace) {
    switch (fx.kind) {
      case EffectKind::Create:
        ids[fx.target] = st.declare(fx.entity, fx.label);
        break;
      case EffectKind::Assign:
        st.set(map_id(fx.target), fx.feature, translate(fx.value, ids));
        break;
      case EffectKind::Insert:
        st.insert(map_id(fx.target), fx.feature, map_id(fx.value.as_ref()));
        break;
      case EffectKind::Delete: {
        const ObjectId one[] = {map_id(fx.target)};
        st.remove(one);
        break;
      }
    }
  }
  return st;
}

}  // namespace umt
