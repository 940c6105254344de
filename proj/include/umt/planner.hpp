#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "umt/footprint.hpp"
#include "umt/spec.hpp"

namespace umt {

// T1 < T2: instances of T1 are read to define features of T2.
struct EntityOrder {
  std::set<std::pair<std::string, std::string>> relation;
};

struct Conflict {
  std::string rule;
  ReadItem read;
  WriteItem write;
};

std::string describe(const Conflict& c);

// Ok when `reasons` is empty.
struct Verdict {
  std::vector<Conflict> reasons;

  bool ok() const { return reasons.empty(); }
};

struct Phase {
  std::size_t source_index = 0;  // position of the constraint in the spec file
  Constraint constraint;
  Verdict verdict;
};

struct Plan {
  std::vector<Phase> phases;
  EntityOrder order;

  bool all_ok() const;
};

// Throws PlanError naming the cycle when the relation is cyclic.
EntityOrder entity_order(const TransformationSpec& spec);

// One phase per constraint, topologically sorted; ties keep file order.
Plan derive_plan(const TransformationSpec& spec);

Verdict non_interference(const Constraint& c, const Schema& schema);

std::string print_plan(const Plan& plan);

}  // namespace umt
