#include "adsbrange/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "adsbrange/errors.hpp"

extern char** environ;

namespace adsbrange {
namespace {

using nlohmann::json;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigurationError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigurationError(std::string("invalid value for '") + key + "': " + e.what());
    }
  }
}

std::string coupling_name(AntennaCoupling c) { return c == AntennaCoupling::joint ? "joint" : "independent"; }

}  // namespace

json scenario_to_json(const Scenario& s) {
  json ranges = json::array();
  for (const auto& b : s.ranges) ranges.push_back({b.lo, b.hi});
  return json{
      {"version", s.version},
      {"K", s.K},
      {"ranges", ranges},
      {"powers", s.powers},
      {"M", s.M},
      {"num_antennas", s.num_antennas},
      {"lambda_c", s.lambda_c},
      {"gamma_db", s.gamma_db},
      {"trials", s.trials},
      {"seed", s.seed},
      {"threads", s.threads},
      {"em",
       {{"epsilon", s.em.epsilon},
        {"max_iterations", s.em.max_iterations},
        {"restarts", s.em.restarts},
        {"coupling", coupling_name(s.em.coupling)}}},
      {"reorder", std::string(to_string(s.reorder))},
      {"outlier_filter", {{"kind", std::string(to_string(s.filter.kind))}, {"cutoff", s.filter.cutoff}}},
      {"alpha_r", s.alpha_r},
      {"alpha_theta", s.alpha_theta},
      {"m_list", s.m_list},
      {"failure_ceiling", s.failure_ceiling},
      {"noiseless", s.noiseless},
      {"tracking", {{"packets", s.track_packets}, {"gamma_db", s.track_gamma_db}}},
  };
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ConfigurationError("scenario must be a JSON object");
  reject_unknown(j,
                 {"version", "K", "ranges", "powers", "M", "num_antennas", "lambda_c", "gamma_db", "trials",
                  "seed", "threads", "em", "reorder", "outlier_filter", "alpha_r", "alpha_theta", "m_list",
                  "failure_ceiling", "noiseless", "tracking"},
                 "scenario");
  Scenario s;
  read(j, "version", s.version);
  read(j, "K", s.K);
  if (j.contains("ranges")) {
    s.ranges.clear();
    for (const auto& pair : j.at("ranges")) {
      if (!pair.is_array() || pair.size() != 2) throw ConfigurationError("ranges entries must be [lo, hi]");
      s.ranges.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
  }
  read(j, "powers", s.powers);
  read(j, "M", s.M);
  read(j, "num_antennas", s.num_antennas);
  read(j, "lambda_c", s.lambda_c);
  read(j, "gamma_db", s.gamma_db);
  read(j, "trials", s.trials);
  read(j, "seed", s.seed);
  read(j, "threads", s.threads);
  if (j.contains("em")) {
    const json& e = j.at("em");
    reject_unknown(e, {"epsilon", "max_iterations", "restarts", "coupling"}, "em");
    read(e, "epsilon", s.em.epsilon);
    read(e, "max_iterations", s.em.max_iterations);
    read(e, "restarts", s.em.restarts);
    if (e.contains("coupling")) {
      const auto name = e.at("coupling").get<std::string>();
      if (name == "joint") s.em.coupling = AntennaCoupling::joint;
      else if (name == "independent") s.em.coupling = AntennaCoupling::independent;
      else throw ConfigurationError("em.coupling must be 'joint' or 'independent'");
    }
  }
  if (j.contains("reorder")) s.reorder = parse_reorder_method(j.at("reorder").get<std::string>());
  if (j.contains("outlier_filter")) {
    const json& f = j.at("outlier_filter");
    reject_unknown(f, {"kind", "cutoff"}, "outlier_filter");
    if (f.contains("kind")) {
      const auto kind = f.at("kind").get<std::string>();
      if (kind == "mad") s.filter.kind = OutlierFilter::Kind::mad;
      else if (kind == "none") s.filter.kind = OutlierFilter::Kind::none;
      else throw ConfigurationError("outlier_filter.kind must be 'mad' or 'none'");
    }
    read(f, "cutoff", s.filter.cutoff);
  }
  read(j, "alpha_r", s.alpha_r);
  read(j, "alpha_theta", s.alpha_theta);
  read(j, "m_list", s.m_list);
  read(j, "failure_ceiling", s.failure_ceiling);
  read(j, "noiseless", s.noiseless);
  if (j.contains("tracking")) {
    const json& t = j.at("tracking");
    reject_unknown(t, {"packets", "gamma_db"}, "tracking");
    read(t, "packets", s.track_packets);
    read(t, "gamma_db", s.track_gamma_db);
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigurationError("cannot open scenario file " + path.string());
  json j;
  try {
    j = json::parse(is, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigurationError("malformed scenario file " + path.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

void apply_overrides(json& tree, const std::vector<std::pair<std::string, std::string>>& variables,
                     std::string_view prefix) {
  for (const auto& [name, raw] : variables) {
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) continue;
    std::string rest = name.substr(prefix.size());

    std::vector<std::string> path;
    for (std::size_t pos = 0;;) {
      const std::size_t cut = rest.find("__", pos);
      path.push_back(rest.substr(pos, cut - pos));
      if (cut == std::string::npos) break;
      pos = cut + 2;
    }

    json* node = &tree;
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (!node->is_object()) throw ConfigurationError("override " + name + " descends into a non-object");
      // Match existing keys case-insensitively; new keys are lower case.
      std::string key = lower(path[i]);
      for (const auto& [existing, unused] : node->items()) {
        if (lower(existing) == key) {
          key = existing;
          break;
        }
      }
      node = &(*node)[key];
    }
    json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
    *node = value.is_discarded() ? json(raw) : value;
  }
}

std::vector<std::pair<std::string, std::string>> environment_overrides(std::string_view prefix) {
  std::vector<std::pair<std::string, std::string>> out;
  for (char** env = environ; env && *env; ++env) {
    std::string_view entry(*env);
    if (entry.substr(0, prefix.size()) != prefix) continue;
    const std::size_t eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    out.emplace_back(std::string(entry.substr(0, eq)), std::string(entry.substr(eq + 1)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace adsbrange
