#pragma once

#include <compare>
#include <set>
#include <string>

#include "umt/expr.hpp"

namespace umt {

// Feature name used for reads of an entity's extent.
inline constexpr const char* kExtent = "EXTENT";

struct ReadItem {
  std::string entity;
  std::string feature;  // or kExtent
  bool at_pre = false;

  friend auto operator<=>(const ReadItem&, const ReadItem&) = default;
};

enum class WriteKind { CreateExtent, AssignFeature, InsertInto, DeleteFrom };

struct WriteItem {
  WriteKind kind = WriteKind::CreateExtent;
  std::string entity;
  std::string feature;           // AssignFeature / InsertInto only
  bool new_object_only = false;  // AssignFeature only

  friend auto operator<=>(const WriteItem&, const WriteItem&) = default;
};

std::string to_string(const ReadItem& r);
std::string to_string(const WriteItem& w);

// Every datum a query-mode evaluation of `e` may consult.
std::set<ReadItem> read_footprint(const Expr& e);

// Effects of constructively establishing a postcondition. Throws SpecError
// on atoms that have no constructive reading.
std::set<WriteItem> write_footprint(const Expr& post);

// Reads performed while establishing a postcondition: right-hand sides,
// inserted elements, identity values. Assignment targets are excluded.
// Reads inside ->isDeleted() operands are also reported separately since
// they are evaluated before any deletion of the same binding is applied.
struct PostReads {
  std::set<ReadItem> reads;
  std::set<ReadItem> deletion_operand_reads;
};
PostReads post_read_footprint(const Expr& post);

// A navigation `v.f` or bare feature `f` on the context object: the only
// forms a postcondition can assign to or insert into.
bool is_assignable(const Expr& e);

}  // namespace umt
