#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "umt/error.hpp"

namespace umt {

enum class ExprKind {
  IntLit,
  StrLit,
  BoolLit,
  EmptySet,
  Name,        // unresolved identifier, only before resolution
  Var,         // quantifier or iterator variable
  Param,       // transformation parameter
  Self,        // context object
  Nav,         // receiver.feature
  AtPre,       // inner@pre
  TypeExtent,  // all instances of an entity (including subtypes)
  KeyLookup,   // Entity[keys]
  Binary,
  SizeOf,
  Select,
  Exists,
  Exists1,
  IsDeleted,
};

enum class BinaryOp { Eq, NotEq, In, Subset, Union, Minus, And, Or, Implies };

const char* binary_op_text(BinaryOp op);

// Static type attached during resolution.
struct Type {
  enum class Kind { Unknown, Bool, Int, String, Object, Tuple, Collection };

  Kind kind = Kind::Unknown;
  Kind element = Kind::Unknown;  // collections only
  std::string entity;            // Object, or collection of Object
  bool ordered = false;

  static Type scalar(Kind k) { return Type{k, Kind::Unknown, {}, false}; }
  static Type object(std::string entity) {
    return Type{Kind::Object, Kind::Unknown, std::move(entity), false};
  }
  static Type collection(Kind element, std::string entity, bool ordered) {
    return Type{Kind::Collection, element, std::move(entity), ordered};
  }

  bool is_collection() const { return kind == Kind::Collection; }
  // Object or collection of objects.
  bool is_object_valued() const {
    return kind == Kind::Object || (kind == Kind::Collection && element == Kind::Object);
  }
  // The scalar kind of the value or of its elements.
  Kind element_kind() const { return kind == Kind::Collection ? element : kind; }
};

std::string type_name(const Type& t);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  SourcePos pos;
  std::int64_t int_value = 0;
  // Literal text, identifier, feature name or entity name depending on kind.
  std::string name;
  BinaryOp op = BinaryOp::Eq;
  // Select / Exists / Exists1 binders. An empty list on Select means the
  // predicate's bare names resolve against each element.
  std::vector<std::string> binders;
  // Receiver or operands, receiver first.
  std::vector<ExprPtr> args;
  Type type;

  const Expr& arg(std::size_t i) const { return *args.at(i); }
};

ExprPtr make_expr(Expr e);

// Parses one expression; the whole input must be consumed.
ExprPtr parse_expr(std::string_view text);

class TokenStream;
// Parses an expression prefix from a token stream (used by the spec parser).
ExprPtr parse_expr(TokenStream& ts);

// Canonical ASCII rendering; parse_expr(print_expr(e)) is structurally equal
// to e for unresolved trees.
std::string print_expr(const Expr& e);

// Splits a tree of `&` into its conjuncts, left to right.
std::vector<ExprPtr> conjuncts(const ExprPtr& e);
// Rebuilds a right-nested `&` chain; true literal when empty.
ExprPtr conjoin(const std::vector<ExprPtr>& parts);

bool contains_kind(const Expr& e, ExprKind kind);

}  // namespace umt
