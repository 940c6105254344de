#pragma once

// Template implementation for spec.hpp.

#include <functional>

namespace umt {

namespace detail {

template <typename Visit>
bool bind_iterators(const Quantified& q, std::size_t depth, Env& env,
                    const ModelState& state, EvalMode mode, Visit& visit) {
  if (depth == q.iterators.size()) return visit(env);
  const Iterator& it = q.iterators[depth];
  const Value domain = coerce_to_collection(eval(*it.domain, env, state, mode));
  const std::vector<Value> frozen = domain.as_collection().items;
  for (const auto& v : frozen) {
    env.push(it.variable, v);
    const bool go_on = bind_iterators(q, depth + 1, env, state, mode, visit);
    env.pop();
    if (!go_on) return false;
  }
  return true;
}

}  // namespace detail

template <typename Visit>
void for_each_binding(const Quantified& q, Env& env, const ModelState& state, EvalMode mode,
                      Visit&& visit) {
  if (!q.context) {
    env.self.reset();
    detail::bind_iterators(q, 0, env, state, mode, visit);
    return;
  }
  const std::vector<ObjectId> frozen = state.extent(*q.context);
  for (ObjectId self : frozen) {
    env.self = self;
    if (!detail::bind_iterators(q, 0, env, state, mode, visit)) break;
  }
  env.self.reset();
}

}  // namespace umt
