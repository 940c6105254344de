#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace umt {

struct ObjectId {
  std::uint64_t value = 0;

  friend auto operator<=>(const ObjectId&, const ObjectId&) = default;
};

class Value;

struct Collection {
  std::vector<Value> items;
  bool ordered = false;
};

// Runtime value: integer, string, object reference or collection. Booleans
// are integers 0/1 and only exist inside the evaluator.
//
// Unordered collections are sets: the factory functions drop duplicates,
// keeping first occurrences so iteration order stays deterministic.
class Value {
 public:
  using Storage = std::variant<std::int64_t, std::string, ObjectId, Collection>;

  Value() : data_(std::int64_t{0}) {}

  static Value integer(std::int64_t v) { return Value(Storage(v)); }
  static Value string(std::string v) { return Value(Storage(std::move(v))); }
  static Value ref(ObjectId id) { return Value(Storage(id)); }
  static Value boolean(bool b) { return integer(b ? 1 : 0); }
  static Value empty_set() { return Value(Storage(Collection{})); }
  static Value set(std::vector<Value> items);
  static Value sequence(std::vector<Value> items);
  static Value collection(std::vector<Value> items, bool ordered) {
    return ordered ? sequence(std::move(items)) : set(std::move(items));
  }

  bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
  bool is_string() const { return std::holds_alternative<std::string>(data_); }
  bool is_ref() const { return std::holds_alternative<ObjectId>(data_); }
  bool is_collection() const {
    return std::holds_alternative<Collection>(data_);
  }

  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  const std::string& as_string() const { return std::get<std::string>(data_); }
  ObjectId as_ref() const { return std::get<ObjectId>(data_); }
  const Collection& as_collection() const { return std::get<Collection>(data_); }

  bool truthy() const { return is_int() && as_int() != 0; }

  const Storage& data() const { return data_; }

  // Structural equality; unordered collections compare as sets, ordered
  // collections positionally. No scalar/collection coercion.
  friend bool operator==(const Value& a, const Value& b);

 private:
  explicit Value(Storage s) : data_(std::move(s)) {}

  Storage data_;
};

// Wraps a scalar into an unordered singleton; collections pass through.
Value coerce_to_collection(const Value& v);

// Equality as used by OCL `=`: a collection compared against a scalar
// coerces the scalar to a singleton first.
bool ocl_equal(const Value& a, const Value& b);

bool contains(const Collection& c, const Value& v);
bool is_subset(const Collection& sub, const Collection& super);

// Ordered iff both operands are ordered (concatenation); otherwise set union.
Value union_of(const Value& a, const Value& b);
// Elements of `a` absent from `b`; keeps `a`'s orderedness.
Value difference_of(const Value& a, const Value& b);

std::string debug_string(const Value& v);

}  // namespace umt
