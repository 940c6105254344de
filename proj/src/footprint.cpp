#include "umt/footprint.hpp"

#include "umt/eval.hpp"

namespace umt {

std::string to_string(const ReadItem& r) {
  return "(" + r.entity + ", " + r.feature + ", " + (r.at_pre ? "pre" : "live") + ")";
}

std::string to_string(const WriteItem& w) {
  switch (w.kind) {
    case WriteKind::CreateExtent: return "CreateExtent(" + w.entity + ")";
    case WriteKind::AssignFeature:
      return "AssignFeature(" + w.entity + ", " + w.feature + ", " +
             (w.new_object_only ? "new" : "existing") + ")";
    case WriteKind::InsertInto: return "InsertInto(" + w.entity + ", " + w.feature + ")";
    case WriteKind::DeleteFrom: return "DeleteFrom(" + w.entity + ")";
  }
  return "?";
}

namespace {

[[noreturn]] void non_constructive(const Expr& at) {
  throw SpecError("line " + std::to_string(at.pos.line) + ", column " +
                  std::to_string(at.pos.column) +
                  ": non-constructive atom in postcondition: " + print_expr(at));
}

void collect_reads(const Expr& e, bool at_pre, std::set<ReadItem>& out) {
  switch (e.kind) {
    case ExprKind::Nav:
      out.insert({e.arg(0).type.entity, e.name, at_pre});
      break;
    case ExprKind::TypeExtent:
      out.insert({e.name, kExtent, at_pre});
      break;
    case ExprKind::KeyLookup:
      out.insert({e.name, kExtent, at_pre});
      break;
    case ExprKind::AtPre:
      collect_reads(e.arg(0), true, out);
      return;
    default:
      break;
  }
  for (const auto& a : e.args) collect_reads(*a, at_pre, out);
}

const Expr& receiver_of(const Expr& nav) { return nav.arg(0); }

struct PostWalker {
  std::set<WriteItem> writes;
  PostReads reads;
  std::set<std::string> created;

  void read(const Expr& e) { collect_reads(e, false, reads.reads); }

  void assignment(const Expr& target, const Expr& value) {
    const Expr& recv = receiver_of(target);
    const bool fresh = recv.kind == ExprKind::Var && created.count(recv.name) != 0;
    writes.insert({WriteKind::AssignFeature, recv.type.entity, target.name, fresh});
    read(value);
  }

  void walk(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Binary:
        if (e.op == BinaryOp::And) {
          walk(e.arg(0));
          walk(e.arg(1));
          return;
        }
        if (e.op == BinaryOp::Eq) {
          if (is_assignable(e.arg(0))) {
            assignment(e.arg(0), e.arg(1));
          } else if (is_assignable(e.arg(1))) {
            assignment(e.arg(1), e.arg(0));
          } else {
            non_constructive(e);
          }
          return;
        }
        if (e.op == BinaryOp::In) {
          const Expr& target = e.arg(1);
          if (!is_assignable(target) || !target.type.is_collection() ||
              target.type.element != Type::Kind::Object) {
            non_constructive(e);
          }
          writes.insert({WriteKind::InsertInto, receiver_of(target).type.entity,
                         target.name, false});
          read(e.arg(0));
          return;
        }
        non_constructive(e);
      case ExprKind::Exists:
      case ExprKind::Exists1: {
        if (!is_creation_quantifier(e)) non_constructive(e);
        writes.insert({WriteKind::CreateExtent, e.arg(0).name, {}, false});
        const bool added = created.insert(e.binders[0]).second;
        walk(e.arg(1));
        if (added) created.erase(e.binders[0]);
        return;
      }
      case ExprKind::IsDeleted:
        writes.insert({WriteKind::DeleteFrom, e.arg(0).type.entity, {}, false});
        collect_reads(e.arg(0), false, reads.reads);
        collect_reads(e.arg(0), false, reads.deletion_operand_reads);
        return;
      case ExprKind::BoolLit:
        if (e.int_value) return;
        non_constructive(e);
      default:
        non_constructive(e);
    }
  }
};

}  // namespace

bool is_assignable(const Expr& e) {
  if (e.kind != ExprKind::Nav) return false;
  const Expr& recv = e.arg(0);
  return (recv.kind == ExprKind::Var || recv.kind == ExprKind::Self) &&
         recv.type.kind == Type::Kind::Object;
}

std::set<ReadItem> read_footprint(const Expr& e) {
  std::set<ReadItem> out;
  collect_reads(e, false, out);
  return out;
}

std::set<WriteItem> write_footprint(const Expr& post) {
  PostWalker w;
  w.walk(post);
  return w.writes;
}

PostReads post_read_footprint(const Expr& post) {
  PostWalker w;
  w.walk(post);
  return w.reads;
}

}  // namespace umt
