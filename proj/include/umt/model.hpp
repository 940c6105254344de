#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "umt/metamodel.hpp"
#include "umt/value.hpp"

namespace umt {

class Snapshot;

// Mutable object model over a Schema. Extents are insertion-ordered and an
// object appears in the extent of its entity and of every ancestor. End
// slots always hold collections of references; attributes are unset until
// assigned and read as "" / 0 while unset.
class ModelState {
 public:
  explicit ModelState(std::shared_ptr<const Schema> schema);

  const Schema& schema() const { return *schema_; }
  const std::shared_ptr<const Schema>& schema_ptr() const { return schema_; }

  // Fresh instance with a generated label `<entity><n>` (first letter
  // lowercased); throws ModelError for abstract or unknown entities.
  ObjectId create(std::string_view entity);
  // Instance with an explicit label; `id` lets a second model reuse the ids
  // of another model for the same labels.
  ObjectId declare(std::string_view entity, std::string label,
                   std::optional<ObjectId> id = std::nullopt);
  // Unlink-only cascade: references to the targets are removed from every
  // collection slot. Throws ModelError for unknown ids.
  void remove(std::span<const ObjectId> targets);

  bool contains(ObjectId id) const { return objects_.count(id) != 0; }
  const std::string& entity_of(ObjectId id) const;
  const std::string& label_of(ObjectId id) const;
  std::optional<ObjectId> find_label(std::string_view label) const;

  // Objects in insertion order.
  const std::vector<ObjectId>& objects() const { return order_; }
  const std::vector<ObjectId>& extent(std::string_view entity) const;
  std::size_t size() const { return order_.size(); }

  Value get(ObjectId id, std::string_view feature) const;
  bool is_set(ObjectId id, std::string_view feature) const;
  // Type-checked assignment. A reference assigned to an end is wrapped as a
  // singleton; optional ends accept at most one element.
  void set(ObjectId id, std::string_view feature, const Value& value);
  // Adds `member` to an end unless already present; returns whether it was
  // added.
  bool insert(ObjectId id, std::string_view feature, ObjectId member);
  // Set attributes and all ends of an object, in feature declaration order.
  std::vector<std::pair<std::string, Value>> slots(ObjectId id) const;

  // Unordered collection of references to extent members whose key value is
  // one of `keys` (strings or a collection of strings).
  Value key_lookup(std::string_view entity, const Value& keys) const;

  Snapshot snapshot() const;

 private:
  struct Record {
    std::string entity;
    std::string label;
    std::map<std::string, Value, std::less<>> slots;
  };

  const Record& record(ObjectId id) const;
  Record& record(ObjectId id);
  Feature feature_of(const Record& rec, std::string_view feature) const;
  void check_member(const AssociationEnd& end, ObjectId member) const;
  std::string fresh_label(std::string_view entity);
  void index_key(ObjectId id, const Record& rec, const std::string& key);
  void unindex_key(ObjectId id, const Record& rec);

  std::shared_ptr<const Schema> schema_;
  std::map<ObjectId, Record> objects_;
  std::vector<ObjectId> order_;
  std::unordered_map<std::string, std::vector<ObjectId>> extents_;
  std::map<std::string, ObjectId, std::less<>> labels_;
  std::set<std::string, std::less<>> retired_labels_;
  std::map<std::pair<std::string, std::string>, ObjectId> key_index_;
  std::map<std::string, std::uint64_t, std::less<>> label_counters_;
  std::uint64_t next_id_ = 1;
};

// Frozen, independent copy of a ModelState.
class Snapshot {
 public:
  explicit Snapshot(const ModelState& state)
      : state_(std::make_shared<const ModelState>(state)) {}

  const ModelState& state() const { return *state_; }

 private:
  std::shared_ptr<const ModelState> state_;
};

// Line-oriented text format: `x : Entity`, `x.attr = "s"` / `x.attr = 7`,
// `x : y.role`. When `align` is given, objects whose labels exist there
// reuse the same ObjectId (used to pair an output model with its input).
ModelState parse_model(std::string_view text, std::shared_ptr<const Schema> schema,
                       const ModelState* align = nullptr);
std::string serialize_model(const ModelState& state);

// Structural equality up to ObjectId renaming, pairing objects by their
// position in insertion order.
bool isomorphic(const ModelState& a, const ModelState& b);

}  // namespace umt
