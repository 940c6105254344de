#include "umt/eval.hpp"

namespace umt {

const Value* Env::lookup(const std::string& name) const {
  for (auto it = bindings.rbegin(); it != bindings.rend(); ++it) {
    if (it->first == name) return &it->second;
  }
  return nullptr;
}

bool is_creation_quantifier(const Expr& e) {
  return (e.kind == ExprKind::Exists || e.kind == ExprKind::Exists1) &&
         e.arg(0).kind == ExprKind::TypeExtent;
}

namespace {

[[noreturn]] void fail(const Expr& at, const std::string& message) {
  throw EvalError("line " + std::to_string(at.pos.line) + ", column " +
                  std::to_string(at.pos.column) + ": " + message);
}

Value default_for(const Type& t) {
  switch (t.kind) {
    case Type::Kind::Int: return Value::integer(0);
    case Type::Kind::String: return Value::string("");
    case Type::Kind::Collection: return Value::collection({}, t.ordered);
    default: return Value::set({});
  }
}

class Evaluator {
 public:
  Evaluator(Env& env, EvalMode mode) : env_(env), mode_(mode) {}

  Value eval(const Expr& e, const ModelState& st) {
    switch (e.kind) {
      case ExprKind::IntLit: return Value::integer(e.int_value);
      case ExprKind::BoolLit: return Value::boolean(e.int_value != 0);
      case ExprKind::StrLit: return Value::string(e.name);
      case ExprKind::EmptySet: return Value::set({});
      case ExprKind::Name: fail(e, "unresolved name '" + e.name + "'");
      case ExprKind::Var: {
        const Value* v = env_.lookup(e.name);
        if (!v) fail(e, "unbound variable '" + e.name + "'");
        return *v;
      }
      case ExprKind::Param: {
        if (env_.params) {
          auto it = env_.params->find(e.name);
          if (it != env_.params->end()) return it->second;
        }
        fail(e, "missing value for parameter '" + e.name + "'");
      }
      case ExprKind::Self:
        if (!env_.self) fail(e, "no context object for 'self'");
        return Value::ref(*env_.self);
      case ExprKind::Nav: return navigate(e, eval(e.arg(0), st), st);
      case ExprKind::AtPre:
        if (!env_.pre) fail(e, "@pre used without a pre-state snapshot");
        return eval(e.arg(0), *env_.pre);
      case ExprKind::TypeExtent: {
        std::vector<Value> items;
        for (ObjectId id : st.extent(e.name)) items.push_back(Value::ref(id));
        return Value::set(std::move(items));
      }
      case ExprKind::KeyLookup: return st.key_lookup(e.name, eval(e.arg(0), st));
      case ExprKind::Binary: return binary(e, st);
      case ExprKind::SizeOf: {
        const Value v = eval(e.arg(0), st);
        return Value::integer(
            static_cast<std::int64_t>(coerce_to_collection(v).as_collection().items.size()));
      }
      case ExprKind::Select: return select(e, st);
      case ExprKind::Exists:
      case ExprKind::Exists1: return quantify(e, st);
      case ExprKind::IsDeleted: return deleted(e, st);
    }
    fail(e, "unsupported expression");
  }

 private:
  // Objects missing from the evaluated state (created after the snapshot,
  // or already deleted) read as unset.
  Value attribute_or_end(const Expr& e, ObjectId id, const ModelState& st) {
    if (!st.contains(id)) return default_for(e.type);
    return st.get(id, e.name);
  }

  Value navigate(const Expr& e, const Value& receiver, const ModelState& st) {
    if (receiver.is_ref()) return attribute_or_end(e, receiver.as_ref(), st);
    if (!receiver.is_collection()) fail(e, "navigation from a non-object value");
    std::vector<Value> items;
    for (const auto& item : receiver.as_collection().items) {
      if (!item.is_ref()) fail(e, "navigation from a non-object element");
      if (!st.contains(item.as_ref())) continue;
      const Value v = st.get(item.as_ref(), e.name);
      if (v.is_collection()) {
        const auto& c = v.as_collection().items;
        items.insert(items.end(), c.begin(), c.end());
      } else {
        items.push_back(v);
      }
    }
    return Value::collection(std::move(items), e.type.ordered);
  }

  Value binary(const Expr& e, const ModelState& st) {
    switch (e.op) {
      case BinaryOp::And:
        return Value::boolean(eval(e.arg(0), st).truthy() && eval(e.arg(1), st).truthy());
      case BinaryOp::Or:
        return Value::boolean(eval(e.arg(0), st).truthy() || eval(e.arg(1), st).truthy());
      case BinaryOp::Implies:
        return Value::boolean(!eval(e.arg(0), st).truthy() || eval(e.arg(1), st).truthy());
      default:
        break;
    }
    const Value lhs = eval(e.arg(0), st);
    const Value rhs = eval(e.arg(1), st);
    switch (e.op) {
      case BinaryOp::Eq: return Value::boolean(ocl_equal(lhs, rhs));
      case BinaryOp::NotEq: return Value::boolean(!ocl_equal(lhs, rhs));
      case BinaryOp::In: {
        const Value coll = coerce_to_collection(rhs);
        if (lhs.is_collection()) {
          return Value::boolean(is_subset(lhs.as_collection(), coll.as_collection()));
        }
        return Value::boolean(contains(coll.as_collection(), lhs));
      }
      case BinaryOp::Subset:
        return Value::boolean(is_subset(coerce_to_collection(lhs).as_collection(),
                                        coerce_to_collection(rhs).as_collection()));
      case BinaryOp::Union: return union_of(lhs, rhs);
      case BinaryOp::Minus: return difference_of(lhs, rhs);
      default: break;
    }
    fail(e, "unsupported operator");
  }

  Value select(const Expr& e, const ModelState& st) {
    const Value coll = coerce_to_collection(eval(e.arg(0), st));
    const auto& items = coll.as_collection().items;
    std::vector<Value> out;
    if (e.binders.size() == 1) {
      for (const auto& item : items) {
        env_.push(e.binders[0], item);
        const bool keep = eval(e.arg(1), st).truthy();
        env_.pop();
        if (keep) out.push_back(item);
      }
      return Value::collection(std::move(out), coll.as_collection().ordered);
    }
    // Several binders: every tuple of elements satisfying the predicate.
    std::vector<Value> tuple;
    select_tuples(e, st, items, 0, tuple, out);
    return Value::set(std::move(out));
  }

  void select_tuples(const Expr& e, const ModelState& st, const std::vector<Value>& items,
                     std::size_t depth, std::vector<Value>& tuple, std::vector<Value>& out) {
    if (depth == e.binders.size()) {
      if (eval(e.arg(1), st).truthy()) out.push_back(Value::sequence(tuple));
      return;
    }
    for (const auto& item : items) {
      env_.push(e.binders[depth], item);
      tuple.push_back(item);
      select_tuples(e, st, items, depth + 1, tuple, out);
      tuple.pop_back();
      env_.pop();
    }
  }

  Value quantify(const Expr& e, const ModelState& st) {
    if (mode_ == EvalMode::Query && is_creation_quantifier(e)) {
      fail(e, "effectful expression in query context: " + print_expr(e));
    }
    const Value coll = coerce_to_collection(eval(e.arg(0), st));
    std::size_t hits = 0;
    for (const auto& item : coll.as_collection().items) {
      env_.push(e.binders[0], item);
      const bool ok = eval(e.arg(1), st).truthy();
      env_.pop();
      if (ok) {
        ++hits;
        if (e.kind == ExprKind::Exists || hits > 1) break;
      }
    }
    return Value::boolean(e.kind == ExprKind::Exists ? hits > 0 : hits == 1);
  }

  // Verify mode: the objects the operand selected in the pre-state are gone,
  // and nothing in the current state matches the operand any more.
  Value deleted(const Expr& e, const ModelState& st) {
    if (mode_ == EvalMode::Query) {
      fail(e, "effectful expression in query context: " + print_expr(e));
    }
    if (!env_.pre) fail(e, "->isDeleted() needs a pre-state snapshot");
    const Value before = coerce_to_collection(eval(e.arg(0), *env_.pre));
    for (const auto& item : before.as_collection().items) {
      if (item.is_ref() && st.contains(item.as_ref())) return Value::boolean(false);
    }
    const Value now = coerce_to_collection(eval(e.arg(0), st));
    return Value::boolean(now.as_collection().items.empty());
  }

  Env& env_;
  EvalMode mode_;
};

}  // namespace

Value eval(const Expr& e, Env& env, const ModelState& state, EvalMode mode) {
  return Evaluator(env, mode).eval(e, state);
}

}  // namespace umt
