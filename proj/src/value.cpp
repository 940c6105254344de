#include "umt/value.hpp"

#include <sstream>

namespace umt {

Value Value::set(std::vector<Value> items) {
  Collection c;
  c.ordered = false;
  c.items.reserve(items.size());
  for (auto& item : items) {
    if (!contains(c, item)) c.items.push_back(std::move(item));
  }
  return Value(Storage(std::move(c)));
}

Value Value::sequence(std::vector<Value> items) {
  Collection c;
  c.ordered = true;
  c.items = std::move(items);
  return Value(Storage(std::move(c)));
}

bool contains(const Collection& c, const Value& v) {
  for (const auto& item : c.items) {
    if (item == v) return true;
  }
  return false;
}

bool is_subset(const Collection& sub, const Collection& super) {
  for (const auto& item : sub.items) {
    if (!contains(super, item)) return false;
  }
  return true;
}

bool operator==(const Value& a, const Value& b) {
  if (a.data_.index() != b.data_.index()) return false;
  if (a.is_int()) return a.as_int() == b.as_int();
  if (a.is_string()) return a.as_string() == b.as_string();
  if (a.is_ref()) return a.as_ref() == b.as_ref();
  const auto& ca = a.as_collection();
  const auto& cb = b.as_collection();
  if (ca.ordered && cb.ordered) {
    if (ca.items.size() != cb.items.size()) return false;
    for (std::size_t i = 0; i < ca.items.size(); ++i) {
      if (!(ca.items[i] == cb.items[i])) return false;
    }
    return true;
  }
  return is_subset(ca, cb) && is_subset(cb, ca);
}

Value coerce_to_collection(const Value& v) {
  if (v.is_collection()) return v;
  return Value::set({v});
}

bool ocl_equal(const Value& a, const Value& b) {
  if (a.is_collection() != b.is_collection()) {
    return coerce_to_collection(a) == coerce_to_collection(b);
  }
  return a == b;
}

Value union_of(const Value& a, const Value& b) {
  const Value ca = coerce_to_collection(a);
  const Value cb = coerce_to_collection(b);
  const auto& la = ca.as_collection();
  const auto& lb = cb.as_collection();
  std::vector<Value> items = la.items;
  items.insert(items.end(), lb.items.begin(), lb.items.end());
  return Value::collection(std::move(items), la.ordered && lb.ordered);
}

Value difference_of(const Value& a, const Value& b) {
  const Value ca = coerce_to_collection(a);
  const Value cb = coerce_to_collection(b);
  std::vector<Value> items;
  for (const auto& item : ca.as_collection().items) {
    if (!contains(cb.as_collection(), item)) items.push_back(item);
  }
  return Value::collection(std::move(items), ca.as_collection().ordered);
}

std::string debug_string(const Value& v) {
  std::ostringstream out;
  if (v.is_int()) {
    out << v.as_int();
  } else if (v.is_string()) {
    out << '"' << v.as_string() << '"';
  } else if (v.is_ref()) {
    out << '#' << v.as_ref().value;
  } else {
    const auto& c = v.as_collection();
    out << (c.ordered ? "Sequence{" : "Set{");
    for (std::size_t i = 0; i < c.items.size(); ++i) {
      if (i) out << ", ";
      out << debug_string(c.items[i]);
    }
    out << '}';
  }
  return out.str();
}

}  // namespace umt
