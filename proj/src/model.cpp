#include "umt/model.hpp"

#include <algorithm>
#include <cctype>

namespace umt {

ModelState::ModelState(std::shared_ptr<const Schema> schema) : schema_(std::move(schema)) {
  if (!schema_) schema_ = std::make_shared<const Schema>();
}

const ModelState::Record& ModelState::record(ObjectId id) const {
  auto it = objects_.find(id);
  if (it == objects_.end()) {
    throw ModelError("unknown object #" + std::to_string(id.value));
  }
  return it->second;
}

ModelState::Record& ModelState::record(ObjectId id) {
  return const_cast<Record&>(static_cast<const ModelState*>(this)->record(id));
}

const std::string& ModelState::entity_of(ObjectId id) const { return record(id).entity; }
const std::string& ModelState::label_of(ObjectId id) const { return record(id).label; }

std::optional<ObjectId> ModelState::find_label(std::string_view label) const {
  auto it = labels_.find(label);
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

const std::vector<ObjectId>& ModelState::extent(std::string_view entity) const {
  static const std::vector<ObjectId> kEmpty;
  schema_->entity(entity);
  auto it = extents_.find(std::string(entity));
  return it == extents_.end() ? kEmpty : it->second;
}

std::string ModelState::fresh_label(std::string_view entity) {
  std::string base(entity);
  if (!base.empty()) {
    base[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(base[0])));
  }
  auto& counter = label_counters_[base];
  for (;;) {
    std::string label = base + std::to_string(++counter);
    if (!labels_.count(label) && !retired_labels_.count(label)) return label;
  }
}

ObjectId ModelState::create(std::string_view entity) {
  return declare(entity, fresh_label(entity));
}

ObjectId ModelState::declare(std::string_view entity, std::string label,
                             std::optional<ObjectId> id) {
  const Entity& e = schema_->entity(entity);
  if (e.is_abstract) {
    throw ModelError("cannot instantiate abstract entity '" + e.name + "'");
  }
  if (labels_.count(label) || retired_labels_.count(label)) {
    throw ModelError("duplicate object name '" + label + "'");
  }
  const ObjectId oid = id.value_or(ObjectId{next_id_});
  if (objects_.count(oid)) {
    throw ModelError("object id #" + std::to_string(oid.value) + " already in use");
  }
  next_id_ = std::max(next_id_, oid.value + 1);

  Record rec;
  rec.entity = e.name;
  rec.label = label;
  for (const auto& f : schema_->all_features(e.name)) {
    if (!f.is_attribute()) {
      rec.slots.emplace(f.end->name, f.end->ordered ? Value::sequence({}) : Value::set({}));
    }
  }
  objects_.emplace(oid, std::move(rec));
  order_.push_back(oid);
  labels_.emplace(std::move(label), oid);
  for (const auto& a : schema_->ancestors(e.name)) extents_[a].push_back(oid);
  return oid;
}

void ModelState::remove(std::span<const ObjectId> targets) {
  std::set<ObjectId> doomed;
  for (ObjectId id : targets) {
    record(id);
    doomed.insert(id);
  }
  if (doomed.empty()) return;

  for (ObjectId id : doomed) {
    Record& rec = record(id);
    unindex_key(id, rec);
    for (const auto& a : schema_->ancestors(rec.entity)) {
      auto& ext = extents_[a];
      ext.erase(std::remove(ext.begin(), ext.end(), id), ext.end());
    }
    labels_.erase(rec.label);
    retired_labels_.insert(rec.label);
    objects_.erase(id);
  }
  order_.erase(std::remove_if(order_.begin(), order_.end(),
                              [&](ObjectId id) { return doomed.count(id) != 0; }),
               order_.end());

  for (auto& [id, rec] : objects_) {
    for (auto& [name, value] : rec.slots) {
      if (!value.is_collection()) continue;
      const auto& c = value.as_collection();
      bool touched = false;
      std::vector<Value> kept;
      kept.reserve(c.items.size());
      for (const auto& item : c.items) {
        if (item.is_ref() && doomed.count(item.as_ref())) {
          touched = true;
        } else {
          kept.push_back(item);
        }
      }
      if (touched) value = Value::collection(std::move(kept), c.ordered);
    }
  }
}

Feature ModelState::feature_of(const Record& rec, std::string_view feature) const {
  auto f = schema_->lookup_feature(rec.entity, feature);
  if (!f) {
    throw ModelError("entity '" + rec.entity + "' has no feature '" +
                     std::string(feature) + "'");
  }
  return *f;
}

Value ModelState::get(ObjectId id, std::string_view feature) const {
  const Record& rec = record(id);
  auto it = rec.slots.find(feature);
  if (it != rec.slots.end()) return it->second;
  const Feature f = feature_of(rec, feature);
  if (f.is_attribute()) {
    return f.attribute->type == ValueType::Int ? Value::integer(0) : Value::string("");
  }
  return f.end->ordered ? Value::sequence({}) : Value::set({});
}

bool ModelState::is_set(ObjectId id, std::string_view feature) const {
  const Record& rec = record(id);
  feature_of(rec, feature);
  return rec.slots.count(feature) != 0;
}

void ModelState::check_member(const AssociationEnd& end, ObjectId member) const {
  const Record& target = record(member);
  if (!schema_->is_subtype(target.entity, end.target)) {
    throw ModelError("object '" + target.label + "' of entity '" + target.entity +
                     "' cannot be held by end '" + end.name + "' of type " + end.target);
  }
}

void ModelState::set(ObjectId id, std::string_view feature, const Value& value) {
  Record& rec = record(id);
  const Feature f = feature_of(rec, feature);
  if (f.is_attribute()) {
    const Attribute& attr = *f.attribute;
    const bool ok = attr.type == ValueType::Int ? value.is_int() : value.is_string();
    if (!ok) {
      throw ModelError("type mismatch assigning " + debug_string(value) + " to " +
                       rec.entity + "." + attr.name);
    }
    if (attr.is_key) {
      auto prev = rec.slots.find(attr.name);
      if (prev == rec.slots.end() || prev->second.as_string() != value.as_string()) {
        index_key(id, rec, value.as_string());
        if (prev != rec.slots.end()) {
          for (const auto& a : schema_->ancestors(rec.entity)) {
            auto it = key_index_.find({a, prev->second.as_string()});
            if (it != key_index_.end() && it->second == id) key_index_.erase(it);
          }
        }
      }
    }
    rec.slots[attr.name] = value;
    return;
  }

  const AssociationEnd& end = *f.end;
  const Value coll = coerce_to_collection(value);
  std::vector<Value> items;
  for (const auto& item : coll.as_collection().items) {
    if (!item.is_ref()) {
      throw ModelError("type mismatch assigning " + debug_string(value) + " to " +
                       rec.entity + "." + end.name);
    }
    check_member(end, item.as_ref());
    items.push_back(item);
  }
  Value stored = Value::collection(std::move(items), end.ordered);
  if (end.multiplicity == Multiplicity::Optional &&
      stored.as_collection().items.size() > 1) {
    throw ModelError("optional end " + rec.entity + "." + end.name +
                     " cannot hold more than one object");
  }
  rec.slots[end.name] = std::move(stored);
}

bool ModelState::insert(ObjectId id, std::string_view feature, ObjectId member) {
  Record& rec = record(id);
  const Feature f = feature_of(rec, feature);
  if (f.is_attribute()) {
    throw ModelError("membership into attribute " + rec.entity + "." +
                     std::string(feature));
  }
  const AssociationEnd& end = *f.end;
  check_member(end, member);
  Value& slot = rec.slots[end.name];
  const auto& items = slot.as_collection().items;
  if (umt::contains(slot.as_collection(), Value::ref(member))) return false;
  if (end.multiplicity == Multiplicity::Optional && !items.empty()) {
    throw ModelError("optional end " + rec.entity + "." + end.name + " of '" +
                     rec.label + "' is already filled");
  }
  std::vector<Value> next = items;
  next.push_back(Value::ref(member));
  slot = Value::collection(std::move(next), end.ordered);
  return true;
}

std::vector<std::pair<std::string, Value>> ModelState::slots(ObjectId id) const {
  const Record& rec = record(id);
  std::vector<std::pair<std::string, Value>> out;
  for (const auto& f : schema_->all_features(rec.entity)) {
    auto it = rec.slots.find(f.name());
    if (it != rec.slots.end()) out.emplace_back(f.name(), it->second);
  }
  return out;
}

void ModelState::index_key(ObjectId id, const Record& rec, const std::string& key) {
  std::vector<std::string> scopes;
  for (const auto& a : schema_->ancestors(rec.entity)) {
    if (schema_->key_attribute(a)) scopes.push_back(a);
  }
  for (const auto& scope : scopes) {
    auto it = key_index_.find({scope, key});
    if (it != key_index_.end() && it->second != id) {
      throw ModelError("duplicate key \"" + key + "\" in extent of " + scope +
                       " (objects '" + label_of(it->second) + "' and '" + rec.label +
                       "')");
    }
  }
  for (const auto& scope : scopes) key_index_[{scope, key}] = id;
}

void ModelState::unindex_key(ObjectId id, const Record& rec) {
  const Attribute* key = schema_->key_attribute(rec.entity);
  if (!key) return;
  auto slot = rec.slots.find(key->name);
  if (slot == rec.slots.end()) return;
  for (const auto& a : schema_->ancestors(rec.entity)) {
    auto it = key_index_.find({a, slot->second.as_string()});
    if (it != key_index_.end() && it->second == id) key_index_.erase(it);
  }
}

Value ModelState::key_lookup(std::string_view entity, const Value& keys) const {
  if (!schema_->key_attribute(entity)) {
    throw ModelError("entity '" + std::string(entity) + "' has no key attribute");
  }
  std::vector<Value> out;
  const Value wanted = coerce_to_collection(keys);
  for (const auto& k : wanted.as_collection().items) {
    if (!k.is_string()) {
      throw ModelError("key lookup on " + std::string(entity) +
                       " with non-string key " + debug_string(k));
    }
    auto it = key_index_.find({std::string(entity), k.as_string()});
    if (it != key_index_.end()) out.push_back(Value::ref(it->second));
  }
  return Value::set(std::move(out));
}

Snapshot ModelState::snapshot() const { return Snapshot(*this); }

bool isomorphic(const ModelState& a, const ModelState& b) {
  const auto& oa = a.objects();
  const auto& ob = b.objects();
  if (oa.size() != ob.size()) return false;
  std::map<ObjectId, ObjectId> to_b;
  for (std::size_t i = 0; i < oa.size(); ++i) to_b.emplace(oa[i], ob[i]);

  auto translate = [&](const Value& v) -> std::optional<Value> {
    if (!v.is_collection()) return v;
    std::vector<Value> items;
    for (const auto& item : v.as_collection().items) {
      if (!item.is_ref()) {
        items.push_back(item);
        continue;
      }
      auto it = to_b.find(item.as_ref());
      if (it == to_b.end()) return std::nullopt;
      items.push_back(Value::ref(it->second));
    }
    return Value::collection(std::move(items), v.as_collection().ordered);
  };

  for (std::size_t i = 0; i < oa.size(); ++i) {
    if (a.entity_of(oa[i]) != b.entity_of(ob[i])) return false;
    const auto sa = a.slots(oa[i]);
    const auto sb = b.slots(ob[i]);
    if (sa.size() != sb.size()) return false;
    for (std::size_t k = 0; k < sa.size(); ++k) {
      if (sa[k].first != sb[k].first) return false;
      auto mapped = translate(sa[k].second);
      if (!mapped || !(*mapped == sb[k].second)) return false;
    }
  }
  return true;
}

}  // namespace umt
