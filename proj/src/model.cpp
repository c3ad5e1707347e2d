#include "lll/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lll {

int EventSystem::max_domain() const {
  int d = 0;
  for (const auto& v : variables) d = std::max(d, v.domain_size());
  return d;
}

bool EventSystem::adjacent(int a, int b) const {
  return std::binary_search(gamma[a].begin(), gamma[a].end(), b);
}

bool EventSystem::all_dyadic() const {
  for (const auto& v : variables)
    for (const auto& p : v.probs)
      if (!is_dyadic(p)) return false;
  return true;
}

EventSystem build_event_system(std::vector<Variable> variables, std::vector<BadEvent> events) {
  EventSystem sys;
  sys.variables = std::move(variables);
  sys.events = std::move(events);
  for (size_t i = 0; i < sys.variables.size(); ++i) {
    auto& v = sys.variables[i];
    v.id = static_cast<int>(i);
    if (v.probs.empty()) throw input_error("variable with empty domain");
    Q sum = 0;
    for (const auto& p : v.probs) {
      if (p <= 0) throw input_error("non-positive domain probability");
      sum += p;
    }
    if (boost::multiprecision::abs(Q(sum - 1)) > Q(1, 1000000000000LL))
      throw input_error("domain probabilities do not sum to 1");
  }
  // Scope-intersection adjacency via variable -> events index.
  std::vector<std::vector<int>> by_var(sys.variables.size());
  for (size_t i = 0; i < sys.events.size(); ++i) {
    auto& e = sys.events[i];
    e.id = static_cast<int>(i);
    std::sort(e.scope.begin(), e.scope.end());
    if (std::adjacent_find(e.scope.begin(), e.scope.end()) != e.scope.end())
      throw input_error("event scope repeats a variable");
    for (int p : e.scope) {
      if (p < 0 || p >= sys.n()) throw input_error("event scope references unknown variable id");
      by_var[p].push_back(static_cast<int>(i));
    }
  }
  sys.gamma.assign(sys.events.size(), {});
  std::vector<std::set<int>> nb(sys.events.size());
  for (const auto& evs : by_var)
    for (int a : evs)
      for (int b : evs)
        if (a != b) nb[a].insert(b);
  for (size_t i = 0; i < sys.events.size(); ++i)
    sys.gamma[i].assign(nb[i].begin(), nb[i].end());
  return sys;
}

std::function<Q(const ScopeValues&)> make_enumerated_cond_prob(
    const std::vector<Variable>& variables, const std::vector<int>& scope,
    std::function<bool(const ScopeValues&)> happens) {
  std::vector<std::vector<Q>> probs;
  std::vector<int> sorted = scope;
  std::sort(sorted.begin(), sorted.end());
  for (int p : sorted) {
    if (p < 0 || p >= static_cast<int>(variables.size()))
      throw input_error("event scope references unknown variable id");
    probs.push_back(variables[p].probs);
  }
  return [probs, happens](const ScopeValues& fixed) -> Q {
    ScopeValues vals = fixed;
    Q total = 0;
    std::function<void(size_t, Q)> rec = [&](size_t i, Q weight) {
      if (i == vals.size()) {
        if (happens(vals)) total += weight;
        return;
      }
      if (fixed[i] != kUnset) {
        rec(i + 1, weight);
        return;
      }
      for (size_t d = 0; d < probs[i].size(); ++d) {
        vals[i] = static_cast<int>(d);
        rec(i + 1, weight * probs[i][d]);
      }
      vals[i] = kUnset;
    };
    rec(0, 1);
    return total;
  };
}

namespace {

std::vector<Q> compute_x_prime(const EventSystem& system, const std::vector<Q>& x) {
  std::vector<Q> xp(system.m());
  for (int a = 0; a < system.m(); ++a) {
    Q v = x[a];
    for (int b : system.gamma[a]) v *= (1 - x[b]);
    xp[a] = v;
  }
  return xp;
}

void check_x(const EventSystem& system, const std::vector<Q>& x) {
  if (static_cast<int>(x.size()) != system.m()) throw input_error("x size does not match events");
  for (const auto& v : x)
    if (v <= 0 || v >= 1) throw input_error("x(A) outside (0,1)");
}

}  // namespace

ValidationReport validate_lll_condition(const EventSystem& system, const std::vector<Q>& x,
                                        double epsilon) {
  check_x(system, x);
  if (!(epsilon > 0) || !(epsilon < 2)) throw input_error("epsilon out of range");
  auto xp = compute_x_prime(system, x);
  auto frac = small_rational_of(epsilon);
  ValidationReport rep;
  rep.ok = true;
  for (int a = 0; a < system.m(); ++a) {
    ValidationEntry e;
    e.event_id = a;
    e.pr = system.events[a].probability();
    e.x_prime = xp[a];
    e.bound = std::pow(to_double(xp[a]), 1.0 + epsilon);
    if (frac) {
      // Pr <= x'^{1+p/q}  <=>  Pr^q <= x'^{p+q}
      unsigned p = static_cast<unsigned>(frac->first), q = static_cast<unsigned>(frac->second);
      e.ok = q_pow(e.pr, q) <= q_pow(xp[a], p + q);
    } else {
      e.ok = e.pr == 0 || log2_q(e.pr) <= (1.0 + epsilon) * log2_q(xp[a]) + 1e-12;
    }
    rep.ok = rep.ok && e.ok;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

int LLLParams::table_width() const {
  if (w_min <= 0) return 1;
  return static_cast<int>(std::ceil(2.0 * gamma / w_min - 1e-9)) + 1;
}

bool LLLParams::weight_ge_gamma(const Q& prod, double weight) const {
  if (eps_frac) {
    unsigned p = static_cast<unsigned>(eps_frac->first), q = static_cast<unsigned>(eps_frac->second);
    // w >= gamma  <=>  prod^p <= M^{-q}
    return q_pow(prod, p) * q_pow(M, q) <= 1;
  }
  return weight >= gamma - 1e-9;
}

bool LLLParams::weight_le_2gamma(const Q& prod, double weight) const {
  if (eps_frac) {
    unsigned p = static_cast<unsigned>(eps_frac->first), q = static_cast<unsigned>(eps_frac->second);
    return q_pow(prod, p) * q_pow(M, 2 * q) >= 1;
  }
  return weight <= 2 * gamma + 1e-9;
}

LLLParams derive_params(const EventSystem& system, const std::vector<Q>& x, double epsilon,
                        const std::vector<int>* split_sizes) {
  check_x(system, x);
  LLLParams params;
  params.x = x;
  params.x_prime = compute_x_prime(system, x);
  params.epsilon = epsilon;
  params.eps_frac = small_rational_of(epsilon);
  params.D = system.max_domain();
  params.w.resize(system.m());
  for (int a = 0; a < system.m(); ++a) params.w[a] = -log2_q(params.x_prime[a]);
  params.w_min = system.m() ? *std::min_element(params.w.begin(), params.w.end()) : 0;

  if (split_sizes) {
    if (static_cast<int>(split_sizes->size()) != system.m())
      throw input_error("split_sizes size does not match events");
    params.split_size = *split_sizes;
  } else {
    params.split_size.resize(system.m());
    for (int a = 0; a < system.m(); ++a)
      params.split_size[a] = 2 * static_cast<int>(system.events[a].scope.size());
  }

  // Heavy set depends only on m and x'.
  params.heavy.assign(system.m(), 0);
  Q threshold = system.m() ? Q(1, 4 * system.m()) : Q(0);
  for (int a = 0; a < system.m(); ++a) {
    if (params.x_prime[a] >= threshold) {
      params.heavy[a] = 1;
      params.heavy_ids.push_back(a);
    }
  }

  Q sum = 0;
  for (int a : params.heavy_ids)
    sum += Q(params.split_size[a]) / params.x_prime[a] * (x[a] / (1 - x[a]));
  params.M = std::max<Q>({Q(system.n()), Q(4 * system.m()), 4 * sum, Q(2)});
  params.gamma = log2_q(params.M) / epsilon;
  return params;
}

}  // namespace lll
