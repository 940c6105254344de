#include <sstream>

#include "umt/expr.hpp"
#include "umt/lexer.hpp"

namespace umt {

const char* binary_op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Eq: return "=";
    case BinaryOp::NotEq: return "/=";
    case BinaryOp::In: return ":";
    case BinaryOp::Subset: return "<:";
    case BinaryOp::Union: return "\\/";
    case BinaryOp::Minus: return "-";
    case BinaryOp::And: return "&";
    case BinaryOp::Or: return "or";
    case BinaryOp::Implies: return "=>";
  }
  return "?";
}

std::string type_name(const Type& t) {
  auto scalar = [](Type::Kind k, const std::string& entity) -> std::string {
    switch (k) {
      case Type::Kind::Unknown: return "?";
      case Type::Kind::Bool: return "Boolean";
      case Type::Kind::Int: return "Int";
      case Type::Kind::String: return "String";
      case Type::Kind::Object: return entity.empty() ? "Object" : entity;
      case Type::Kind::Tuple: return "Tuple";
      case Type::Kind::Collection: return "Collection";
    }
    return "?";
  };
  if (t.kind == Type::Kind::Collection) {
    return std::string(t.ordered ? "Sequence(" : "Set(") + scalar(t.element, t.entity) + ")";
  }
  return scalar(t.kind, t.entity);
}

ExprPtr make_expr(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

namespace {

Expr node(ExprKind kind, SourcePos pos) {
  Expr e;
  e.kind = kind;
  e.pos = pos;
  return e;
}

ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
  Expr e = node(ExprKind::Binary, pos);
  e.op = op;
  e.args = {std::move(lhs), std::move(rhs)};
  return make_expr(std::move(e));
}

class ExprParser {
 public:
  explicit ExprParser(TokenStream& ts) : ts_(ts) {}

  ExprPtr expression() { return implies(); }

 private:
  ExprPtr implies() {
    ExprPtr lhs = disjunction();
    if (ts_.at(TokenKind::Implies)) {
      const SourcePos pos = ts_.next().pos;
      return binary(BinaryOp::Implies, lhs, implies(), pos);
    }
    return lhs;
  }

  ExprPtr disjunction() {
    ExprPtr lhs = conjunction();
    while (ts_.at_keyword("or")) {
      const SourcePos pos = ts_.next().pos;
      lhs = binary(BinaryOp::Or, lhs, conjunction(), pos);
    }
    return lhs;
  }

  ExprPtr conjunction() {
    ExprPtr lhs = comparison();
    while (ts_.at(TokenKind::Amp) || ts_.at_keyword("and")) {
      const SourcePos pos = ts_.next().pos;
      lhs = binary(BinaryOp::And, lhs, comparison(), pos);
    }
    return lhs;
  }

  ExprPtr comparison() {
    ExprPtr lhs = union_expr();
    BinaryOp op;
    if (ts_.at(TokenKind::Eq)) {
      op = BinaryOp::Eq;
    } else if (ts_.at(TokenKind::NotEq)) {
      op = BinaryOp::NotEq;
    } else if (ts_.at(TokenKind::Colon)) {
      op = BinaryOp::In;
    } else if (ts_.at(TokenKind::Subset)) {
      op = BinaryOp::Subset;
    } else {
      return lhs;
    }
    const SourcePos pos = ts_.next().pos;
    ExprPtr rhs = union_expr();
    if (ts_.at(TokenKind::Eq) || ts_.at(TokenKind::NotEq) || ts_.at(TokenKind::Colon) ||
        ts_.at(TokenKind::Subset)) {
      ts_.fail("comparison operators do not associate; use parentheses");
    }
    return binary(op, lhs, rhs, pos);
  }

  ExprPtr union_expr() {
    ExprPtr lhs = difference();
    while (ts_.at(TokenKind::Union)) {
      const SourcePos pos = ts_.next().pos;
      lhs = binary(BinaryOp::Union, lhs, difference(), pos);
    }
    return lhs;
  }

  ExprPtr difference() {
    ExprPtr lhs = postfix();
    while (ts_.at(TokenKind::Minus)) {
      const SourcePos pos = ts_.next().pos;
      lhs = binary(BinaryOp::Minus, lhs, postfix(), pos);
    }
    return lhs;
  }

  std::vector<std::string> binders() {
    // Lookahead for `v1, v2, ... |`.
    std::size_t k = 0;
    if (!ts_.at(TokenKind::Ident, k)) return {};
    ++k;
    while (ts_.at(TokenKind::Comma, k) && ts_.at(TokenKind::Ident, k + 1)) k += 2;
    if (!ts_.at(TokenKind::Bar, k)) return {};
    std::vector<std::string> out;
    out.push_back(ts_.next().text);
    while (ts_.accept(TokenKind::Comma)) out.push_back(ts_.next().text);
    ts_.expect(TokenKind::Bar, "'|'");
    return out;
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    for (;;) {
      if (ts_.at(TokenKind::Dot)) {
        const SourcePos pos = ts_.next().pos;
        Expr nav = node(ExprKind::Nav, pos);
        nav.name = ts_.expect(TokenKind::Ident, "feature name").text;
        nav.args = {e};
        e = make_expr(std::move(nav));
      } else if (ts_.at(TokenKind::At)) {
        const SourcePos pos = ts_.next().pos;
        ts_.expect_keyword("pre");
        if (contains_kind(*e, ExprKind::AtPre)) {
          throw ParseError(pos, "@pre cannot be nested inside @pre");
        }
        Expr pre = node(ExprKind::AtPre, pos);
        pre.args = {e};
        e = make_expr(std::move(pre));
      } else if (ts_.at(TokenKind::Arrow)) {
        ts_.next();
        const Token& op = ts_.expect(TokenKind::Ident, "collection operation");
        ts_.expect(TokenKind::LParen, "'('");
        if (op.text == "size" || op.text == "isDeleted") {
          Expr call = node(op.text == "size" ? ExprKind::SizeOf : ExprKind::IsDeleted, op.pos);
          call.args = {e};
          ts_.expect(TokenKind::RParen, "')'");
          e = make_expr(std::move(call));
        } else if (op.text == "select" || op.text == "exists" || op.text == "exists1") {
          const ExprKind kind = op.text == "select"   ? ExprKind::Select
                                : op.text == "exists" ? ExprKind::Exists
                                                      : ExprKind::Exists1;
          Expr call = node(kind, op.pos);
          call.binders = binders();
          if (kind != ExprKind::Select && call.binders.size() != 1) {
            throw ParseError(op.pos, "->" + op.text + " needs exactly one binder 'v |'");
          }
          ExprPtr body = expression();
          ts_.expect(TokenKind::RParen, "')'");
          call.args = {e, body};
          e = make_expr(std::move(call));
        } else {
          throw ParseError(op.pos, "unknown collection operation '" + op.text + "'");
        }
      } else {
        return e;
      }
    }
  }

  ExprPtr primary() {
    const Token& t = ts_.peek();
    switch (t.kind) {
      case TokenKind::Int: {
        ts_.next();
        Expr e = node(ExprKind::IntLit, t.pos);
        try {
          e.int_value = std::stoll(t.text);
        } catch (const std::exception&) {
          throw ParseError(t.pos, "integer literal out of range");
        }
        return make_expr(std::move(e));
      }
      case TokenKind::String: {
        ts_.next();
        Expr e = node(ExprKind::StrLit, t.pos);
        e.name = t.text;
        return make_expr(std::move(e));
      }
      case TokenKind::LBrace: {
        ts_.next();
        ts_.expect(TokenKind::RBrace, "'}' (only the empty set literal {} is supported)");
        return make_expr(node(ExprKind::EmptySet, t.pos));
      }
      case TokenKind::LParen: {
        ts_.next();
        ExprPtr inner = expression();
        ts_.expect(TokenKind::RParen, "')'");
        return inner;
      }
      case TokenKind::Ident: {
        if (t.text == "or" || t.text == "and" || t.text == "assumption" || t.text == "constraint") break;
        ts_.next();
        if (t.text == "self") return make_expr(node(ExprKind::Self, t.pos));
        if (t.text == "true" || t.text == "false") {
          Expr e = node(ExprKind::BoolLit, t.pos);
          e.int_value = t.text == "true";
          return make_expr(std::move(e));
        }
        if (ts_.at(TokenKind::LBracket)) {
          ts_.next();
          Expr e = node(ExprKind::KeyLookup, t.pos);
          e.name = t.text;
          e.args = {expression()};
          ts_.expect(TokenKind::RBracket, "']'");
          return make_expr(std::move(e));
        }
        Expr e = node(ExprKind::Name, t.pos);
        e.name = t.text;
        return make_expr(std::move(e));
      }
      default:
        break;
    }
    ts_.fail(t.kind == TokenKind::End ? "unexpected end of expression"
                                      : "unexpected '" + t.text + "' in expression");
  }

  TokenStream& ts_;
};

int precedence(const Expr& e) {
  if (e.kind != ExprKind::Binary) return 10;
  switch (e.op) {
    case BinaryOp::Implies: return 1;
    case BinaryOp::Or: return 2;
    case BinaryOp::And: return 3;
    case BinaryOp::Eq:
    case BinaryOp::NotEq:
    case BinaryOp::In:
    case BinaryOp::Subset: return 4;
    case BinaryOp::Union: return 5;
    case BinaryOp::Minus: return 6;
  }
  return 10;
}

void print(const Expr& e, std::ostream& out);

void print_operand(const Expr& e, int min_prec, std::ostream& out) {
  if (precedence(e) < min_prec) {
    out << '(';
    print(e, out);
    out << ')';
  } else {
    print(e, out);
  }
}

void print_call(const Expr& e, const char* name, std::ostream& out) {
  print_operand(e.arg(0), 10, out);
  out << "->" << name << '(';
  if (!e.binders.empty()) {
    for (std::size_t i = 0; i < e.binders.size(); ++i) {
      out << (i ? ", " : "") << e.binders[i];
    }
    out << " | ";
  }
  print(e.arg(1), out);
  out << ')';
}

void print(const Expr& e, std::ostream& out) {
  switch (e.kind) {
    case ExprKind::IntLit: out << e.int_value; return;
    case ExprKind::StrLit: out << '"' << e.name << '"'; return;
    case ExprKind::BoolLit: out << (e.int_value ? "true" : "false"); return;
    case ExprKind::EmptySet: out << "{}"; return;
    case ExprKind::Name:
    case ExprKind::Var:
    case ExprKind::Param:
    case ExprKind::TypeExtent: out << e.name; return;
    case ExprKind::Self: out << "self"; return;
    case ExprKind::Nav:
      // Implicit receivers print as bare feature names.
      if (e.arg(0).kind == ExprKind::Self ||
          (e.arg(0).kind == ExprKind::Var && !e.arg(0).name.empty() &&
           e.arg(0).name[0] == '$')) {
        out << e.name;
        return;
      }
      print_operand(e.arg(0), 10, out);
      out << '.' << e.name;
      return;
    case ExprKind::AtPre:
      print_operand(e.arg(0), 10, out);
      out << "@pre";
      return;
    case ExprKind::KeyLookup:
      out << e.name << '[';
      print(e.arg(0), out);
      out << ']';
      return;
    case ExprKind::Binary: {
      const int p = precedence(e);
      // Left-assoc operators accept an equal-precedence left operand;
      // `=>` is right-assoc; comparisons are non-assoc.
      const bool left_assoc = p == 2 || p == 3 || p == 5 || p == 6;
      const bool right_assoc = p == 1;
      print_operand(e.arg(0), left_assoc ? p : p + 1, out);
      out << ' ' << binary_op_text(e.op) << ' ';
      print_operand(e.arg(1), right_assoc ? p : p + 1, out);
      return;
    }
    case ExprKind::SizeOf:
      print_operand(e.arg(0), 10, out);
      out << "->size()";
      return;
    case ExprKind::IsDeleted:
      print_operand(e.arg(0), 10, out);
      out << "->isDeleted()";
      return;
    case ExprKind::Select: print_call(e, "select", out); return;
    case ExprKind::Exists: print_call(e, "exists", out); return;
    case ExprKind::Exists1: print_call(e, "exists1", out); return;
  }
}

}  // namespace

ExprPtr parse_expr(TokenStream& ts) { return ExprParser(ts).expression(); }

ExprPtr parse_expr(std::string_view text) {
  TokenStream ts(tokenize(text));
  ExprPtr e = parse_expr(ts);
  if (!ts.done()) ts.fail("unexpected '" + ts.peek().text + "' after expression");
  return e;
}

std::string print_expr(const Expr& e) {
  std::ostringstream out;
  print(e, out);
  return out.str();
}

std::vector<ExprPtr> conjuncts(const ExprPtr& e) {
  if (e->kind == ExprKind::Binary && e->op == BinaryOp::And) {
    auto lhs = conjuncts(e->args[0]);
    auto rhs = conjuncts(e->args[1]);
    lhs.insert(lhs.end(), rhs.begin(), rhs.end());
    return lhs;
  }
  return {e};
}

ExprPtr conjoin(const std::vector<ExprPtr>& parts) {
  if (parts.empty()) {
    Expr t = node(ExprKind::BoolLit, {});
    t.int_value = 1;
    t.type = Type::scalar(Type::Kind::Bool);
    return make_expr(std::move(t));
  }
  ExprPtr acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) {
    Expr e = node(ExprKind::Binary, parts[i]->pos);
    e.op = BinaryOp::And;
    e.args = {parts[i], acc};
    e.type = Type::scalar(Type::Kind::Bool);
    acc = make_expr(std::move(e));
  }
  return acc;
}

bool contains_kind(const Expr& e, ExprKind kind) {
  if (e.kind == kind) return true;
  for (const auto& a : e.args) {
    if (contains_kind(*a, kind)) return true;
  }
  return false;
}

}  // namespace umt
