#include "wtc/generate.hpp"

#include <algorithm>

namespace wtc {

PrimeEventStructure random_pes(std::mt19937& rng, const PesGenOptions& opts) {
  std::uniform_int_distribution<std::size_t> size_dist(0, opts.max_events);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const std::size_t n = size_dist(rng);
    RawPes raw;
    raw.name = "random";
    for (std::size_t i = 0; i < n; ++i) {
      if (coin(rng) < opts.tau_probability) {
        raw.labels.push_back(Label::tau());
      } else {
        std::uniform_int_distribution<std::size_t> pick(0, opts.alphabet.size() - 1);
        raw.labels.push_back(Label::visible(opts.alphabet[pick(rng)]));
      }
    }
    for (EventId i = 0; i < n; ++i)
      for (EventId j = i + 1; j < n; ++j)
        if (coin(rng) < opts.cause_probability) raw.causes.emplace_back(i, j);
    for (EventId i = 0; i < n; ++i)
      for (EventId j = i + 1; j < n; ++j)
        if (coin(rng) < opts.conflict_probability) raw.conflicts.emplace_back(i, j);
    try {
      return validate_pes(raw);
    } catch (const Error&) {
      continue;  // ordered pair also in conflict after saturation; retry
    }
  }
  // conflict-free fallback always validates
  RawPes raw;
  raw.name = "random";
  raw.labels.push_back(Label::visible(opts.alphabet.front()));
  return validate_pes(raw);
}

namespace {

Formula gen_formula(std::mt19937& rng, const FormulaGenOptions& opts, int depth,
                    std::vector<Var>& scope, int& fresh) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto pick_label = [&] {
    std::uniform_int_distribution<std::size_t> d(0, opts.alphabet.size() - 1);
    return Label::visible(opts.alphabet[d(rng)]);
  };
  auto pick_subset = [&](const Var& exclude) {
    std::vector<Var> out;
    for (const Var& v : scope)
      if (v != exclude && coin(rng) < 0.3) out.push_back(v);
    return out;
  };

  if (depth <= 0) return Formula::truth();
  std::uniform_int_distribution<int> shape(0, 9);
  switch (shape(rng)) {
    case 0:
      return Formula::truth();
    case 1:
      return Formula::conj(gen_formula(rng, opts, depth - 1, scope, fresh),
                           gen_formula(rng, opts, depth - 1, scope, fresh));
    case 2:
      return Formula::neg(gen_formula(rng, opts, depth - 1, scope, fresh));
    case 3:
      return Formula::disj(gen_formula(rng, opts, depth - 1, scope, fresh),
                           gen_formula(rng, opts, depth - 1, scope, fresh));
    case 4:
    case 5: {
      // bind-and-exec diamond
      BindSpec spec;
      spec.label = pick_label();
      spec.target = "w" + std::to_string(fresh++);
      spec.causes = pick_subset("");
      std::vector<Var> rest;
      for (const Var& v : scope)
        if (std::find(spec.causes.begin(), spec.causes.end(), v) == spec.causes.end() &&
            coin(rng) < 0.3)
          rest.push_back(v);
      spec.independent = rest;
      scope.push_back(spec.target);
      Formula body = gen_formula(rng, opts, depth - 1, scope, fresh);
      scope.pop_back();
      return Formula::bind_exec(std::move(spec), std::move(body));
    }
    case 6: {
      // plain bind, no execution
      BindSpec spec;
      spec.label = pick_label();
      spec.target = "w" + std::to_string(fresh++);
      spec.causes = pick_subset("");
      scope.push_back(spec.target);
      Formula body = gen_formula(rng, opts, depth - 1, scope, fresh);
      scope.pop_back();
      return Formula::bind(std::move(spec), std::move(body));
    }
    case 7: {
      if (scope.empty()) return Formula::truth();
      std::uniform_int_distribution<std::size_t> d(0, scope.size() - 1);
      return Formula::exec(scope[d(rng)], gen_formula(rng, opts, depth - 1, scope, fresh));
    }
    case 8: {
      BindSpec spec;
      spec.label = pick_label();
      spec.target = "w" + std::to_string(fresh++);
      scope.push_back(spec.target);
      Formula body = gen_formula(rng, opts, depth - 1, scope, fresh);
      scope.pop_back();
      return Formula::dual_bind(std::move(spec), std::move(body));
    }
    default: {
      if (scope.empty()) return Formula::truth();
      std::uniform_int_distribution<std::size_t> d(0, scope.size() - 1);
      return Formula::dual_exec(scope[d(rng)], gen_formula(rng, opts, depth - 1, scope, fresh));
    }
  }
}

}  // namespace

Formula random_formula(std::mt19937& rng, const FormulaGenOptions& opts) {
  std::vector<Var> scope = opts.free_pool;
  int fresh = 1;
  return gen_formula(rng, opts, opts.max_depth, scope, fresh);
}

Environment random_environment(std::mt19937& rng, const PrimeEventStructure& pes,
                               const std::set<Var>& vars) {
  std::vector<EventId> visibles;
  for (EventId e : pes.visible_events()) visibles.push_back(e);
  if (visibles.empty() && !vars.empty())
    raise(Errc::unbound_variable, "structure has no visible events to bind");
  Environment env;
  std::uniform_int_distribution<std::size_t> d(0, visibles.empty() ? 0 : visibles.size() - 1);
  for (const Var& v : vars) env = env.bound(v, visibles[d(rng)]);
  return env;
}

}  // namespace wtc
