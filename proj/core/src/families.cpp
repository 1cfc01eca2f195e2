#include "hausmeter/families.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "hausmeter/errors.hpp"

namespace hausmeter {

FamilySpec FamilySpec::geometric(double q) {
  if (!(q > 0.0 && q < 1.0)) raise(Errc::invalid_parameter, "geometric requires q in (0,1)");
  FamilySpec s;
  s.variant = Variant::geometric;
  s.q = q;
  return s;
}

FamilySpec FamilySpec::power(double alpha) {
  if (!(alpha > 0.0)) raise(Errc::invalid_parameter, "power requires alpha > 0");
  FamilySpec s;
  s.variant = Variant::power;
  s.alpha = alpha;
  return s;
}

FamilySpec FamilySpec::luroth() {
  FamilySpec s;
  s.variant = Variant::luroth;
  s.alpha = 1.0;
  return s;
}

FamilySpec FamilySpec::gauss() {
  FamilySpec s;
  s.variant = Variant::gauss;
  return s;
}

FamilySpec FamilySpec::gauss2() {
  FamilySpec s;
  s.variant = Variant::gauss2;
  return s;
}

FamilySpec FamilySpec::from_table(std::vector<double> b) {
  FamilySpec s;
  s.variant = Variant::table;
  s.table = std::move(b);
  return s;
}

bool FamilySpec::linear() const {
  switch (variant) {
    case Variant::geometric:
    case Variant::power:
    case Variant::luroth:
    case Variant::table:
      return true;
    case Variant::gauss:
    case Variant::gauss2:
      return false;
  }
  return false;
}

const char* FamilySpec::variant_name() const {
  switch (variant) {
    case Variant::geometric: return "geometric";
    case Variant::power: return "power";
    case Variant::luroth: return "luroth";
    case Variant::gauss: return "gauss";
    case Variant::gauss2: return "gauss2";
    case Variant::table: return "table";
  }
  return "?";
}

SequenceB FamilySpec::sequence() const {
  switch (variant) {
    case Variant::geometric: {
      const double q = this->q;
      return SequenceB::closed_form([q](std::int64_t k) {
        return k == 0 ? 1.0 : std::pow(q, static_cast<double>(k));
      });
    }
    case Variant::power: {
      const double a = alpha;
      return SequenceB::closed_form([a](std::int64_t k) {
        return k == 0 ? 1.0 : std::pow(static_cast<double>(k + 1), -a);
      });
    }
    case Variant::luroth:
    case Variant::gauss:
      return SequenceB::closed_form(
          [](std::int64_t k) { return 1.0 / static_cast<double>(k + 1); });
    case Variant::table:
      return SequenceB::from_table(table);
    case Variant::gauss2:
      raise(Errc::not_chain, "gauss2 has no generating sequence");
  }
  raise(Errc::internal, "unreachable");
}

namespace {

Evaluators gauss_evaluators() {
  Evaluators ev;
  ev.g = [](int k, double x) { return 1.0 / (k + x); };
  ev.dg = [](int k, double x) { const double d = k + x; return -1.0 / (d * d); };
  ev.d2g = [](int k, double x) { const double d = k + x; return 2.0 / (d * d * d); };
  return ev;
}

// gauss2 map i <-> pair (j,k), both 1-based, lexicographic over the m x m grid.
inline std::pair<int, int> gauss2_pair(int i, int m) {
  return {(i - 1) / m + 1, (i - 1) % m + 1};
}

Evaluators gauss2_evaluators(int m) {
  Evaluators ev;
  // (g_j o g_k)(x) = 1/(j + 1/(k+x)) = (k+x)/(j(k+x)+1)
  ev.g = [m](int i, double x) {
    const auto [j, k] = gauss2_pair(i, m);
    const double u = k + x;
    return u / (j * u + 1.0);
  };
  ev.dg = [m](int i, double x) {
    const auto [j, k] = gauss2_pair(i, m);
    const double d = j * (k + x) + 1.0;
    return 1.0 / (d * d);
  };
  ev.d2g = [m](int i, double x) {
    const auto [j, k] = gauss2_pair(i, m);
    const double d = j * (k + x) + 1.0;
    return -2.0 * j / (d * d * d);
  };
  return ev;
}

} // namespace

TruncatedSystem build_system(const FamilySpec& spec, int n) {
  if (n < 1) raise(Errc::invalid_parameter, "n must be >= 1");
  switch (spec.variant) {
    case FamilySpec::Variant::geometric:
    case FamilySpec::Variant::power:
    case FamilySpec::Variant::luroth:
      return TruncatedSystem::linear_chain(spec.sequence(), n);
    case FamilySpec::Variant::table: {
      if (static_cast<std::size_t>(n) + 1 > spec.table.size())
        raise(Errc::n_too_large, "table family supports n <= table length - 1");
      return TruncatedSystem::linear_chain(spec.sequence(), n);
    }
    case FamilySpec::Variant::gauss:
      return TruncatedSystem::nonlinear_chain(spec.sequence(), n, gauss_evaluators());
    case FamilySpec::Variant::gauss2: {
      const int m = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n))));
      if (m * m != n)
        raise(Errc::invalid_parameter, "gauss2 counts pairs: n must be a perfect square");
      auto ev = gauss2_evaluators(m);
      std::vector<std::pair<double, double>> intervals;
      intervals.reserve(n);
      for (int i = 1; i <= n; ++i) {
        // increasing maps: interval = [g(0), g(1)]
        intervals.emplace_back(ev.g(i, 0.0), ev.g(i, 1.0));
      }
      return TruncatedSystem::nonlinear_general(n, std::move(intervals), std::move(ev));
    }
  }
  raise(Errc::internal, "unreachable");
}

std::optional<double> analytic_c2(const FamilySpec& spec) {
  switch (spec.variant) {
    case FamilySpec::Variant::geometric:
      // (b_k - b_{k+1})/b_{k+1} = (1-q)/q, constant in k
      return (1.0 - spec.q) / spec.q;
    case FamilySpec::Variant::power:
      // ((k+2)/(k+1))^alpha - 1, decreasing; attained at k = 0
      return std::pow(2.0, spec.alpha) - 1.0;
    case FamilySpec::Variant::luroth:
      return 1.0;
    default:
      return std::nullopt;
  }
}

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      raise(Errc::invalid_parameter, "unknown key in family spec: " + it.key());
  }
}

} // namespace

FamilySpec family_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(Errc::invalid_parameter, std::string("family spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    raise(Errc::invalid_parameter, "family spec must be an object with a \"family\" string");
  const std::string fam = j["family"].get<std::string>();
  std::string name;
  if (j.contains("name")) {
    if (!j["name"].is_string()) raise(Errc::invalid_parameter, "\"name\" must be a string");
    name = j["name"].get<std::string>();
  }
  FamilySpec out;
  if (fam == "geometric") {
    reject_unknown_keys(j, {"family", "q", "name"});
    if (!j.contains("q") || !j["q"].is_number())
      raise(Errc::invalid_parameter, "geometric requires numeric \"q\"");
    out = FamilySpec::geometric(j["q"].get<double>());
  } else if (fam == "power") {
    reject_unknown_keys(j, {"family", "alpha", "name"});
    if (!j.contains("alpha") || !j["alpha"].is_number())
      raise(Errc::invalid_parameter, "power requires numeric \"alpha\"");
    out = FamilySpec::power(j["alpha"].get<double>());
  } else if (fam == "luroth") {
    reject_unknown_keys(j, {"family", "name"});
    out = FamilySpec::luroth();
  } else if (fam == "gauss") {
    reject_unknown_keys(j, {"family", "name"});
    out = FamilySpec::gauss();
  } else if (fam == "gauss2") {
    reject_unknown_keys(j, {"family", "name"});
    out = FamilySpec::gauss2();
  } else if (fam == "table") {
    reject_unknown_keys(j, {"family", "b", "name"});
    if (!j.contains("b") || !j["b"].is_array())
      raise(Errc::invalid_parameter, "table requires an array \"b\"");
    std::vector<double> b;
    for (const auto& v : j["b"]) {
      if (!v.is_number()) raise(Errc::invalid_parameter, "table values must be numeric");
      b.push_back(v.get<double>());
    }
    // Validate through the sequence constructor.
    SequenceB::from_table(b);
    out = FamilySpec::from_table(std::move(b));
  } else {
    raise(Errc::invalid_parameter, "unknown family: " + fam);
  }
  out.name = std::move(name);
  return out;
}

std::string family_to_json(const FamilySpec& spec) {
  json j;
  j["family"] = spec.variant_name();
  switch (spec.variant) {
    case FamilySpec::Variant::geometric: j["q"] = spec.q; break;
    case FamilySpec::Variant::power: j["alpha"] = spec.alpha; break;
    case FamilySpec::Variant::table: j["b"] = spec.table; break;
    default: break;
  }
  if (!spec.name.empty()) j["name"] = spec.name;
  return j.dump();
}

std::uint64_t family_hash(const FamilySpec& spec) {
  // FNV-1a over the canonical JSON (name excluded: it is metadata).
  FamilySpec canonical = spec;
  canonical.name.clear();
  const std::string text = family_to_json(canonical);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace hausmeter
