#include "umt/spec.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include "umt/footprint.hpp"
#include "umt/lexer.hpp"
#include "umt/resolve.hpp"

namespace umt {

const char* to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Creation: return "Creation";
    case ConstraintKind::UpdateInPlace: return "UpdateInPlace";
    case ConstraintKind::Deletion: return "Deletion";
    case ConstraintKind::Static: return "Static";
  }
  return "?";
}

namespace {

[[noreturn]] void spec_fail(const Quantified& q, const std::string& message) {
  throw SpecError(q.label + ": " + message);
}

bool is_membership_atom(const Expr& e) {
  return e.kind == ExprKind::Binary && e.op == BinaryOp::In && is_assignable(e.arg(1));
}

bool is_assignment_atom(const Expr& e) {
  return e.kind == ExprKind::Binary && e.op == BinaryOp::Eq &&
         (is_assignable(e.arg(0)) || is_assignable(e.arg(1)));
}

ConstraintKind shape_of(const Constraint& c) {
  const auto parts = conjuncts(c.succedent);
  std::size_t deletions = 0;
  std::size_t creations = 0;
  for (const auto& p : parts) {
    if (p->kind == ExprKind::IsDeleted) ++deletions;
    if (is_creation_quantifier(*p)) ++creations;
  }
  if (deletions > 0) {
    if (deletions != parts.size()) {
      spec_fail(c, "->isDeleted() cannot be mixed with other postcondition atoms");
    }
    return ConstraintKind::Deletion;
  }
  for (const auto& p : parts) {
    if (contains_kind(*p, ExprKind::IsDeleted)) {
      spec_fail(c, "->isDeleted() is only allowed as a top-level conjunct");
    }
  }
  if (creations > 0) {
    for (const auto& p : parts) {
      if (!is_creation_quantifier(*p) && !is_membership_atom(*p) && !is_assignment_atom(*p)) {
        spec_fail(c, "unclassifiable postcondition conjunct: " + print_expr(*p));
      }
    }
    return ConstraintKind::Creation;
  }
  for (const auto& p : parts) {
    if (!is_membership_atom(*p) && !is_assignment_atom(*p)) {
      spec_fail(c, "unclassifiable postcondition conjunct: " + print_expr(*p));
    }
  }
  return ConstraintKind::UpdateInPlace;
}

void require_query(const Quantified& q, const Expr& e, const char* where) {
  if (contains_kind(e, ExprKind::IsDeleted)) {
    spec_fail(q, std::string("->isDeleted() is not allowed in ") + where);
  }
}

void require_no_creation(const Quantified& q, const Expr& e, const char* where) {
  if (is_creation_quantifier(e)) {
    spec_fail(q, std::string("creation quantifier over a type extent in ") + where +
                     ": " + print_expr(e));
  }
  for (const auto& a : e.args) require_no_creation(q, *a, where);
}

// Resolves `[antecedent =>] body` in the scope of `q`, lifting iterator
// conjuncts out of the antecedent.
void build_quantified(Quantified& q, const ExprPtr& raw, Scope scope) {
  ExprPtr raw_antecedent;
  ExprPtr raw_body = raw;
  if (raw->kind == ExprKind::Binary && raw->op == BinaryOp::Implies) {
    raw_antecedent = raw->args[0];
    raw_body = raw->args[1];
  }
  std::vector<ExprPtr> residual_raw;
  if (raw_antecedent) {
    for (const auto& part : conjuncts(raw_antecedent)) {
      if (part->kind == ExprKind::Binary && part->op == BinaryOp::In &&
          part->arg(0).kind == ExprKind::Name && !scope.resolves(part->arg(0).name)) {
        const std::string& var = part->arg(0).name;
        ExprPtr domain = resolve(part->args[1], scope);
        const Type& t = domain->type;
        if (!t.is_collection() || t.element == Type::Kind::Unknown) {
          spec_fail(q, "iterator '" + var + "' ranges over non-collection " + type_name(t));
        }
        require_query(q, *domain, "an iterator domain");
        require_no_creation(q, *domain, "an iterator domain");
        const Type elem = t.element == Type::Kind::Object ? Type::object(t.entity)
                                                          : Type::scalar(t.element);
        scope.binders.push_back({var, elem, false});
        q.iterators.push_back({var, std::move(domain)});
      } else {
        residual_raw.push_back(part);
      }
    }
  }
  std::vector<ExprPtr> residual;
  for (const auto& part : residual_raw) {
    ExprPtr r = resolve(part, scope);
    if (r->type.kind != Type::Kind::Bool) {
      spec_fail(q, "antecedent conjunct is not Boolean: " + print_expr(*r));
    }
    require_query(q, *r, "an antecedent");
    require_no_creation(q, *r, "an antecedent");
    residual.push_back(std::move(r));
  }
  q.antecedent = conjoin(residual);
  q.succedent = resolve(raw_body, scope);
  if (q.succedent->type.kind != Type::Kind::Bool) {
    spec_fail(q, "body is not Boolean: " + print_expr(*q.succedent));
  }
}

struct Header {
  std::string label;
  std::optional<std::string> context;
};

Header parse_header(TokenStream& ts, const Schema& schema, const std::string& fallback) {
  Header h;
  h.label = fallback;
  const bool on_clause_next =
      ts.at_keyword("on") && ts.at(TokenKind::Ident, 1) && ts.at(TokenKind::Colon, 2);
  if (ts.at(TokenKind::Ident) && !on_clause_next) h.label = ts.next().text;
  if (ts.accept_keyword("on")) {
    const Token& e = ts.expect(TokenKind::Ident, "context entity");
    if (!schema.has_entity(e.text)) {
      throw ParseError(e.pos, "unknown context entity '" + e.text + "'");
    }
    h.context = e.text;
  }
  ts.expect(TokenKind::Colon, "':'");
  return h;
}

}  // namespace

ConstraintKind classify(const Constraint& c) {
  const ConstraintKind shape = shape_of(c);
  // Surfaces non-constructive atoms nested inside creation bodies.
  try {
    write_footprint(*c.succedent);
  } catch (const SpecError& e) {
    spec_fail(c, e.what());
  }
  return c.context ? shape : ConstraintKind::Static;
}

TransformationSpec parse_spec(std::string_view text, std::shared_ptr<const Schema> schema) {
  if (!schema) throw SpecError("a spec needs loaded metamodels");
  TokenStream ts(tokenize(text));
  TransformationSpec spec;
  spec.schema = schema;

  Scope base;
  base.schema = schema.get();

  if (ts.accept_keyword("transformation")) {
    spec.name = ts.expect(TokenKind::Ident, "transformation name").text;
    if (ts.accept(TokenKind::LParen)) {
      if (!ts.at(TokenKind::RParen)) {
        do {
          Parameter p;
          const Token& name = ts.expect(TokenKind::Ident, "parameter name");
          p.name = name.text;
          ts.expect(TokenKind::Colon, "':'");
          const Token& type = ts.expect(TokenKind::Ident, "parameter type");
          if (type.text == "String") {
            p.type = ValueType::String;
          } else if (type.text == "Int") {
            p.type = ValueType::Int;
          } else {
            throw ParseError(type.pos, "parameter type must be String or Int");
          }
          if (base.params.count(p.name)) {
            throw ParseError(name.pos, "duplicate parameter '" + p.name + "'");
          }
          base.params.emplace(p.name, p.type);
          spec.parameters.push_back(std::move(p));
        } while (ts.accept(TokenKind::Comma));
      }
      ts.expect(TokenKind::RParen, "')'");
    }
  }

  std::set<std::string> labels;
  while (!ts.done()) {
    const bool is_assumption = ts.at_keyword("assumption");
    if (!is_assumption && !ts.at_keyword("constraint")) {
      ts.fail("expected 'assumption' or 'constraint'");
    }
    ts.next();
    const std::string fallback =
        is_assumption ? "Asm" + std::to_string(spec.assumptions.size() + 1)
                      : "C" + std::to_string(spec.constraints.size() + 1);
    const Header h = parse_header(ts, *schema, fallback);
    const ExprPtr raw = parse_expr(ts);
    ts.accept(TokenKind::Semicolon);
    if (!labels.insert(h.label).second) {
      throw SpecError("duplicate label '" + h.label + "'");
    }

    Scope scope = base;
    scope.context = h.context;
    if (is_assumption) {
      Assumption a;
      a.label = h.label;
      a.context = h.context;
      a.text = print_expr(*raw);
      build_quantified(a, raw, scope);
      require_query(a, *a.succedent, "an assumption");
      spec.assumptions.push_back(std::move(a));
    } else {
      Constraint c;
      c.label = h.label;
      c.context = h.context;
      c.text = print_expr(*raw);
      build_quantified(c, raw, scope);
      c.shape = shape_of(c);
      c.kind = classify(c);
      spec.constraints.push_back(std::move(c));
    }
  }
  return spec;
}

std::map<std::string, Value> bind_parameters(const TransformationSpec& spec,
                                             const std::map<std::string, std::string>& raw) {
  std::map<std::string, Value> out;
  for (const auto& [name, text] : raw) {
    bool known = false;
    for (const auto& p : spec.parameters) known = known || p.name == name;
    if (!known) throw SpecError("unknown parameter '" + name + "'");
  }
  for (const auto& p : spec.parameters) {
    auto it = raw.find(p.name);
    if (it == raw.end()) throw SpecError("missing value for parameter '" + p.name + "'");
    const std::string& text = it->second;
    if (p.type == ValueType::Int) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw SpecError("parameter '" + p.name + "' expects an integer, got '" + text + "'");
      }
      out.emplace(p.name, Value::integer(v));
    } else {
      std::string s = text;
      if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
      out.emplace(p.name, Value::string(std::move(s)));
    }
  }
  return out;
}

std::vector<AssumptionVerdict> check_assumptions(const TransformationSpec& spec,
                                                 const ModelState& state,
                                                 const std::map<std::string, Value>& params) {
  std::vector<AssumptionVerdict> out;
  for (const auto& a : spec.assumptions) {
    AssumptionVerdict v;
    v.label = a.label;
    v.text = a.text;
    Env env;
    env.params = &params;
    env.pre = &state;
    for_each_binding(a, env, state, EvalMode::Verify, [&](Env& e) {
      if (!eval(*a.antecedent, e, state, EvalMode::Verify).truthy()) return true;
      if (eval(*a.succedent, e, state, EvalMode::Verify).truthy()) return true;
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

std::string describe_binding(const ModelState& state, const Witness& w) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, value] : w.binding) {
    if (!first) out << ", ";
    first = false;
    out << name << " = ";
    if (value.is_ref() && state.contains(value.as_ref())) {
      out << state.label_of(value.as_ref());
    } else {
      out << debug_string(value);
    }
  }
  return out.str();
}

}  // namespace umt
