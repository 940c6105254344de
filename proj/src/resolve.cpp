#include "umt/resolve.hpp"

namespace umt {

namespace {

using Kind = Type::Kind;

[[noreturn]] void fail(const Expr& at, const std::string& message) {
  throw SpecError("line " + std::to_string(at.pos.line) + ", column " +
                  std::to_string(at.pos.column) + ": " + message);
}

Type feature_type(const Feature& f) {
  if (f.is_attribute()) {
    return Type::scalar(f.attribute->type == ValueType::Int ? Kind::Int : Kind::String);
  }
  if (f.end->multiplicity == Multiplicity::Optional || !f.end->ordered) {
    return Type::collection(Kind::Object, f.end->target, false);
  }
  return Type::collection(Kind::Object, f.end->target, true);
}

Type as_collection(const Type& t) {
  if (t.is_collection()) return t;
  return Type::collection(t.kind, t.entity, false);
}

class Resolver {
 public:
  explicit Resolver(Scope& scope) : scope_(scope) {}

  ExprPtr run(const ExprPtr& raw) { return resolve(*raw); }

 private:
  ExprPtr typed(Expr e, Type t) {
    e.type = std::move(t);
    return make_expr(std::move(e));
  }

  ExprPtr self_node(const Expr& at) {
    if (!scope_.context) fail(at, "'self' used outside a context entity");
    Expr s;
    s.kind = ExprKind::Self;
    s.pos = at.pos;
    return typed(std::move(s), Type::object(*scope_.context));
  }

  ExprPtr nav_node(const Expr& at, ExprPtr receiver, const std::string& feature) {
    const Type& rt = receiver->type;
    if (!rt.is_object_valued() || rt.entity.empty()) {
      fail(at, "cannot navigate '." + feature + "' from a value of type " + type_name(rt));
    }
    auto f = scope_.schema->lookup_feature(rt.entity, feature);
    if (!f) fail(at, "entity '" + rt.entity + "' has no feature '" + feature + "'");
    Type ft = feature_type(*f);
    if (rt.kind == Kind::Collection) {
      const bool ordered = rt.ordered && (f->is_attribute() || ft.ordered);
      ft = Type::collection(ft.element_kind(), ft.entity, ordered);
    }
    Expr nav;
    nav.kind = ExprKind::Nav;
    nav.pos = at.pos;
    nav.name = feature;
    nav.args = {std::move(receiver)};
    return typed(std::move(nav), ft);
  }

  std::optional<ExprPtr> lookup_name(const Expr& at) {
    const std::string& n = at.name;
    for (auto it = scope_.binders.rbegin(); it != scope_.binders.rend(); ++it) {
      if (it->implicit) {
        if (!it->type.entity.empty() && scope_.schema->lookup_feature(it->type.entity, n)) {
          Expr v;
          v.kind = ExprKind::Var;
          v.pos = at.pos;
          v.name = it->name;
          return nav_node(at, typed(std::move(v), it->type), n);
        }
      } else if (it->name == n) {
        Expr v;
        v.kind = ExprKind::Var;
        v.pos = at.pos;
        v.name = n;
        return typed(std::move(v), it->type);
      }
    }
    if (auto p = scope_.params.find(n); p != scope_.params.end()) {
      Expr v;
      v.kind = ExprKind::Param;
      v.pos = at.pos;
      v.name = n;
      return typed(std::move(v),
                   Type::scalar(p->second == ValueType::Int ? Kind::Int : Kind::String));
    }
    if (scope_.context && scope_.schema->lookup_feature(*scope_.context, n)) {
      return nav_node(at, self_node(at), n);
    }
    if (scope_.schema->has_entity(n)) {
      Expr v;
      v.kind = ExprKind::TypeExtent;
      v.pos = at.pos;
      v.name = n;
      return typed(std::move(v), Type::collection(Kind::Object, n, false));
    }
    return std::nullopt;
  }

  Type unify_elements(const Expr& at, const Type& a, const Type& b) {
    const Type ca = as_collection(a);
    const Type cb = as_collection(b);
    if (ca.element == Kind::Unknown) return cb;
    if (cb.element == Kind::Unknown) return ca;
    if (ca.element != cb.element) {
      fail(at, "incompatible collection elements " + type_name(a) + " and " + type_name(b));
    }
    std::string entity;
    if (ca.element == Kind::Object) {
      auto common = scope_.schema->common_supertype(ca.entity, cb.entity);
      entity = common.value_or("");
    }
    return Type::collection(ca.element, entity, false);
  }

  void require_bool(const Expr& e) {
    if (e.type.kind != Kind::Bool) {
      fail(e, "expected a Boolean expression, found " + type_name(e.type));
    }
  }

  ExprPtr resolve(const Expr& raw) {
    Expr e = raw;
    switch (raw.kind) {
      case ExprKind::IntLit: return typed(std::move(e), Type::scalar(Kind::Int));
      case ExprKind::StrLit: return typed(std::move(e), Type::scalar(Kind::String));
      case ExprKind::BoolLit: return typed(std::move(e), Type::scalar(Kind::Bool));
      case ExprKind::EmptySet:
        return typed(std::move(e), Type::collection(Kind::Unknown, {}, false));
      case ExprKind::Self: return self_node(raw);
      case ExprKind::Var:
      case ExprKind::Param:
      case ExprKind::TypeExtent:
        return make_expr(std::move(e));  // already resolved
      case ExprKind::Name: {
        if (auto r = lookup_name(raw)) return *r;
        fail(raw, "unresolved name '" + raw.name + "'");
      }
      case ExprKind::Nav: {
        const Expr& recv = raw.arg(0);
        ExprPtr receiver;
        if (recv.kind == ExprKind::Name && !scope_.resolves(recv.name) && scope_.context) {
          receiver = self_node(recv);
        } else {
          receiver = resolve(recv);
        }
        return nav_node(raw, std::move(receiver), raw.name);
      }
      case ExprKind::AtPre: {
        ExprPtr inner = resolve(raw.arg(0));
        Type t = inner->type;
        e.args = {std::move(inner)};
        return typed(std::move(e), std::move(t));
      }
      case ExprKind::KeyLookup: {
        if (!scope_.schema->has_entity(raw.name)) {
          fail(raw, "unknown entity '" + raw.name + "' in key lookup");
        }
        if (!scope_.schema->key_attribute(raw.name)) {
          fail(raw, "entity '" + raw.name + "' has no key attribute");
        }
        ExprPtr keys = resolve(raw.arg(0));
        const Kind k = keys->type.element_kind();
        if (k != Kind::String && k != Kind::Unknown) {
          fail(raw, "key lookup expects String keys, found " + type_name(keys->type));
        }
        e.args = {std::move(keys)};
        return typed(std::move(e), Type::collection(Kind::Object, raw.name, false));
      }
      case ExprKind::Binary: return binary(raw);
      case ExprKind::SizeOf: {
        e.args = {resolve(raw.arg(0))};
        return typed(std::move(e), Type::scalar(Kind::Int));
      }
      case ExprKind::IsDeleted: {
        ExprPtr coll = resolve(raw.arg(0));
        if (!coll->type.is_object_valued()) {
          fail(raw, "->isDeleted() needs objects, found " + type_name(coll->type));
        }
        e.args = {std::move(coll)};
        return typed(std::move(e), Type::scalar(Kind::Bool));
      }
      case ExprKind::Select:
      case ExprKind::Exists:
      case ExprKind::Exists1: return iterate(raw);
    }
    fail(raw, "unsupported expression");
  }

  ExprPtr binary(const Expr& raw) {
    Expr e = raw;
    ExprPtr lhs = resolve(raw.arg(0));
    ExprPtr rhs = resolve(raw.arg(1));
    Type t = Type::scalar(Kind::Bool);
    switch (raw.op) {
      case BinaryOp::And:
      case BinaryOp::Or:
      case BinaryOp::Implies:
        require_bool(*lhs);
        require_bool(*rhs);
        break;
      case BinaryOp::Eq:
      case BinaryOp::NotEq: {
        const Kind a = lhs->type.element_kind();
        const Kind b = rhs->type.element_kind();
        if (a != Kind::Unknown && b != Kind::Unknown && a != b) {
          fail(raw, "cannot compare " + type_name(lhs->type) + " with " +
                        type_name(rhs->type));
        }
        break;
      }
      case BinaryOp::In:
      case BinaryOp::Subset: {
        const Kind a = lhs->type.element_kind();
        const Kind b = rhs->type.element_kind();
        if (a != Kind::Unknown && b != Kind::Unknown && a != b) {
          fail(raw, "incompatible operands " + type_name(lhs->type) + " and " +
                        type_name(rhs->type));
        }
        break;
      }
      case BinaryOp::Union:
        t = unify_elements(raw, lhs->type, rhs->type);
        t.ordered = lhs->type.is_collection() && rhs->type.is_collection() &&
                    lhs->type.ordered && rhs->type.ordered;
        break;
      case BinaryOp::Minus:
        t = unify_elements(raw, lhs->type, rhs->type);
        t.entity = as_collection(lhs->type).entity;
        t.element = as_collection(lhs->type).element == Kind::Unknown
                        ? t.element
                        : as_collection(lhs->type).element;
        t.ordered = lhs->type.is_collection() && lhs->type.ordered;
        break;
    }
    e.args = {std::move(lhs), std::move(rhs)};
    return typed(std::move(e), std::move(t));
  }

  ExprPtr iterate(const Expr& raw) {
    Expr e = raw;
    ExprPtr coll = resolve(raw.arg(0));
    const Type ct = as_collection(coll->type);
    if (ct.element == Kind::Tuple) fail(raw, "cannot iterate over tuples");
    const Type elem = ct.element == Kind::Object ? Type::object(ct.entity)
                                                 : Type::scalar(ct.element);
    const std::size_t mark = scope_.binders.size();
    if (raw.binders.empty()) {
      if (ct.element != Kind::Object || ct.entity.empty()) {
        fail(raw, "select without a binder needs a collection of objects");
      }
      e.binders = {"$it" + std::to_string(++implicit_counter_)};
      scope_.binders.push_back({e.binders[0], elem, true});
    } else {
      for (const auto& b : raw.binders) scope_.binders.push_back({b, elem, false});
    }
    ExprPtr body;
    try {
      body = resolve(raw.arg(1));
    } catch (...) {
      scope_.binders.resize(mark);
      throw;
    }
    scope_.binders.resize(mark);
    require_bool(*body);
    e.args = {std::move(coll), std::move(body)};
    Type t = Type::scalar(Kind::Bool);
    if (raw.kind == ExprKind::Select) {
      t = e.binders.size() > 1 ? Type::collection(Kind::Tuple, {}, false)
                               : Type::collection(ct.element, ct.entity, ct.ordered);
    }
    return typed(std::move(e), std::move(t));
  }

  Scope& scope_;
  int implicit_counter_ = 0;
};

}  // namespace

bool Scope::resolves(const std::string& name) const {
  for (const auto& b : binders) {
    if (b.implicit) {
      if (!b.type.entity.empty() && schema->lookup_feature(b.type.entity, name)) return true;
    } else if (b.name == name) {
      return true;
    }
  }
  if (params.count(name)) return true;
  if (context && schema->lookup_feature(*context, name)) return true;
  return schema->has_entity(name) || name == "self";
}

ExprPtr resolve(const ExprPtr& raw, Scope& scope) {
  if (!scope.schema) throw SpecError("resolution needs a schema");
  return Resolver(scope).run(raw);
}

}  // namespace umt
