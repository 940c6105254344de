#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "umt/error.hpp"

namespace umt {

enum class ValueType { String, Int };

struct Attribute {
  std::string name;
  ValueType type = ValueType::String;
  bool is_key = false;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

enum class Multiplicity { Optional, Many };

struct AssociationEnd {
  std::string name;
  std::string target;
  Multiplicity multiplicity = Multiplicity::Many;
  bool ordered = false;

  friend bool operator==(const AssociationEnd&, const AssociationEnd&) = default;
};

struct Entity {
  std::string name;
  bool is_abstract = false;
  std::optional<std::string> parent;
  std::vector<Attribute> attributes;
  std::vector<AssociationEnd> ends;
  SourcePos pos;

  friend bool operator==(const Entity& a, const Entity& b) {
    return a.name == b.name && a.is_abstract == b.is_abstract &&
           a.parent == b.parent && a.attributes == b.attributes &&
           a.ends == b.ends;
  }
};

struct Metamodel {
  std::string name;
  std::vector<Entity> entities;

  const Entity* find(std::string_view entity) const;

  friend bool operator==(const Metamodel&, const Metamodel&) = default;
};

// Either an attribute or an association end, plus the entity declaring it.
struct Feature {
  const Entity* owner = nullptr;
  const Attribute* attribute = nullptr;
  const AssociationEnd* end = nullptr;

  bool is_attribute() const { return attribute != nullptr; }
  const std::string& name() const { return attribute ? attribute->name : end->name; }
};

struct Diagnostic {
  std::string rule;
  std::string location;
  std::string message;

  friend auto operator<=>(const Diagnostic&, const Diagnostic&) = default;
};

// Syntax only: duplicate entity names are the one semantic check performed.
Metamodel parse_metamodel(std::string_view text, std::string name = {});

// Canonical textual form; parse_metamodel(print_metamodel(m)) == m.
std::string print_metamodel(const Metamodel& mm);

// Sorted diagnostics; empty iff every structural rule holds.
std::vector<Diagnostic> validate(const Metamodel& mm);

// Both throw ModelError for an unknown entity. Inherited features are
// resolved by walking up the parent chain.
std::optional<Feature> lookup_feature(const Metamodel& mm, std::string_view entity,
                                      std::string_view feature);
const Attribute* key_attribute(const Metamodel& mm, std::string_view entity);

// One or more metamodels loaded side by side (source and target languages).
// Entity names are global across the set.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<Metamodel> metamodels);

  const std::vector<Metamodel>& metamodels() const { return metamodels_; }

  const Entity* find_entity(std::string_view name) const;
  const Entity& entity(std::string_view name) const;  // throws ModelError
  bool has_entity(std::string_view name) const { return find_entity(name) != nullptr; }

  std::optional<Feature> lookup_feature(std::string_view entity,
                                        std::string_view feature) const;
  const Attribute* key_attribute(std::string_view entity) const;

  // Inherited first, declaration order within each entity.
  std::vector<Feature> all_features(std::string_view entity) const;
  // The entity itself first, then its ancestors nearest-first.
  std::vector<std::string> ancestors(std::string_view entity) const;
  // Reflexive.
  bool is_subtype(std::string_view sub, std::string_view super) const;
  bool related(std::string_view a, std::string_view b) const {
    return is_subtype(a, b) || is_subtype(b, a);
  }
  std::optional<std::string> common_supertype(std::string_view a,
                                              std::string_view b) const;
  std::vector<std::string> entity_names() const;

 private:
  std::vector<Metamodel> metamodels_;
};

// Rules that span metamodels: global name uniqueness and cross-language end
// targets, in addition to validate() on each member.
std::vector<Diagnostic> validate(const Schema& schema);

}  // namespace umt
