#pragma once

#include <functional>
#include <vector>

#include "lll/model.hpp"

namespace fixtures {

using namespace lll;

inline Variable uniform_bit() {
  Variable v;
  v.probs = {Q(1, 2), Q(1, 2)};
  return v;
}

inline BadEvent all_zero_event(const std::vector<Variable>& vars, std::vector<int> scope) {
  BadEvent e;
  e.scope = std::move(scope);
  e.happens = [](const ScopeValues& vals) {
    for (int v : vals)
      if (v != 0) return false;
    return true;
  };
  e.cond_prob = make_enumerated_cond_prob(vars, e.scope, e.happens);
  return e;
}

// Two uniform bits, one event A = (p1=0 and p2=0).
inline EventSystem make_e0() {
  std::vector<Variable> vars = {uniform_bit(), uniform_bit()};
  std::vector<BadEvent> events = {all_zero_event(vars, {0, 1})};
  return build_event_system(std::move(vars), std::move(events));
}

// Three bits, A1 = (p1=0 and p2=0), A2 = (p2=0 and p3=0).
inline EventSystem make_e1() {
  std::vector<Variable> vars = {uniform_bit(), uniform_bit(), uniform_bit()};
  std::vector<BadEvent> events = {all_zero_event(vars, {0, 1}),
                                  all_zero_event(vars, {1, 2})};
  return build_event_system(std::move(vars), std::move(events));
}

// 16 bits, 5 all-zero events on scopes of 4 overlapping by one variable.
inline EventSystem make_chain5() {
  std::vector<Variable> vars(16, uniform_bit());
  std::vector<BadEvent> events;
  for (int i = 0; i < 5; ++i) {
    int base = 3 * i;
    events.push_back(all_zero_event(vars, {base, base + 1, base + 2, base + 3}));
  }
  return build_event_system(std::move(vars), std::move(events));
}

// Exact Pr[event] by full enumeration of the scope, independent of the
// event's cond_prob oracle.
inline Q brute_force_prob(const EventSystem& sys, int event_id) {
  const auto& e = sys.events[event_id];
  Q total = 0;
  ScopeValues vals(e.scope.size(), 0);
  std::function<void(size_t, Q)> rec = [&](size_t i, Q weight) {
    if (i == vals.size()) {
      if (e.happens(vals)) total += weight;
      return;
    }
    const auto& var = sys.variables[e.scope[i]];
    for (int d = 0; d < var.domain_size(); ++d) {
      vals[i] = d;
      rec(i + 1, weight * var.probs[d]);
    }
  };
  rec(0, 1);
  return total;
}

}  // namespace fixtures
