/*
 * Copyright 2026 The dbl Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "core/scenario.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"

namespace dbl {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw ValidationError("field '" + field + "': " + what);
}

void only_keys(const json& obj, const std::string& field, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) invalid(field, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) invalid(field.empty() ? k : field + "." + k, "unknown key");
  }
}

const json& require(const json& obj, const std::string& field, const char* key) {
  if (!obj.contains(key)) invalid(field.empty() ? key : field + "." + key, "missing required key");
  return obj.at(key);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) invalid(field, "expected a number");
  return v.get<double>();
}

std::uint64_t count(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) invalid(field, "must be a nonnegative integer");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  invalid(field, "expected an integer");
}

std::string text(const json& v, const std::string& field) {
  if (!v.is_string()) invalid(field, "expected a string");
  return v.get<std::string>();
}

template <class Fn>
auto with_field(const std::string& field, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind("field '", 0) == 0) throw;
    invalid(field, msg);
  }
}

DelayModel parse_delay(const json& spec, const std::string& field, std::uint64_t horizon) {
  if (!spec.is_object()) invalid(field, "expected an object");
  const std::string type = text(require(spec, field, "type"), field + ".type");
  return with_field(field, [&]() -> DelayModel {
    if (type == "none") {
      only_keys(spec, field, {"type"});
      return DelayModel::none();
    }
    if (type == "never") {
      only_keys(spec, field, {"type"});
      return DelayModel::never();
    }
    if (type == "geometric") {
      only_keys(spec, field, {"type", "p"});
      return DelayModel::geometric(number(require(spec, field, "p"), field + ".p"));
    }
    if (type == "half_normal") {
      only_keys(spec, field, {"type", "sigma", "p_delay"});
      auto hn = DelayModel::half_normal(number(require(spec, field, "sigma"), field + ".sigma"));
      if (!spec.contains("p_delay")) return hn;
      return DelayModel::mixture(number(spec.at("p_delay"), field + ".p_delay"), std::move(hn));
    }
    if (type == "mixture") {
      only_keys(spec, field, {"type", "p_delay", "inner"});
      return DelayModel::mixture(number(require(spec, field, "p_delay"), field + ".p_delay"),
                                 parse_delay(require(spec, field, "inner"), field + ".inner", horizon));
    }
    if (type == "every_kth_never") {
      only_keys(spec, field, {"type", "k", "inner"});
      return DelayModel::every_kth_never(
          count(require(spec, field, "k"), field + ".k"),
          parse_delay(require(spec, field, "inner"), field + ".inner", horizon));
    }
    if (type == "quarterwise_never") {
      only_keys(spec, field, {"type", "ks", "inner"});
      const json& ks = require(spec, field, "ks");
      if (!ks.is_array() || ks.size() != 4) invalid(field + ".ks", "expected 4 integers");
      std::array<std::uint64_t, 4> k{};
      for (std::size_t i = 0; i < 4; ++i) k[i] = count(ks[i], field + ".ks");
      return DelayModel::quarterwise_never(
          k, horizon, parse_delay(require(spec, field, "inner"), field + ".inner", horizon));
    }
    invalid(field + ".type", "unknown delay type \"" + type + "\"");
  });
}

DecayRule parse_rule(const json& spec, const std::string& field, bool allow_loginv) {
  if (!spec.is_object()) invalid(field, "expected an object");
  const std::string rule = text(require(spec, field, "rule"), field + ".rule");
  DecayRule r;
  if (rule == "power") {
    only_keys(spec, field, {"rule", "a"});
    r = DecayRule::power(number(require(spec, field, "a"), field + ".a"));
  } else if (rule == "logpower") {
    only_keys(spec, field, {"rule", "b"});
    r = DecayRule::logpower(number(require(spec, field, "b"), field + ".b"));
  } else if (rule == "loginv" && allow_loginv) {
    only_keys(spec, field, {"rule"});
    r = DecayRule::loginv();
  } else {
    invalid(field + ".rule", "unknown rule \"" + rule + "\"");
  }
  if (!(r.exponent > 0.0)) invalid(field, "exponent must be > 0");
  return r;
}

InitPolicy parse_init(const json& spec, std::size_t ell) {
  const std::string field = "init";
  if (!spec.is_object()) invalid(field, "expected an object");
  only_keys(spec, field, {"mode", "r"});
  const std::string mode = text(require(spec, field, "mode"), "init.mode");
  if (mode == "until_all_observed") return InitPolicy::until_all_observed();
  const std::uint64_t r = spec.contains("r") ? count(spec.at("r"), "init.r") : ell;
  if (mode == "fixed_rounds") {
    if (r < ell) invalid("init.r", "r must be >= ell for fixed_rounds");
    return InitPolicy::fixed_rounds(r);
  }
  if (mode == "hybrid") {
    if (r < 1) invalid("init.r", "r must be >= 1");
    return InitPolicy::hybrid(r);
  }
  invalid("init.mode", "unknown mode \"" + mode + "\"");
}

std::string parse_error_context(const std::string& body, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < body.size() && i + 1 < byte; ++i) {
    if (body[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Scenario parse_scenario(const std::string& body, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": parse error at " + parse_error_context(body, e.byte) + ": " +
                     e.what());
  }
  try {
    only_keys(doc, "", {"name", "ell", "d", "reward_preset", "reward_values", "noise", "delay",
                        "pi", "h", "init", "horizon", "replications", "master_seed",
                        "trace_thinning", "growth"});
    Scenario s;
    if (doc.contains("name")) s.name = text(doc.at("name"), "name");
    s.ell = count(require(doc, "", "ell"), "ell");
    if (s.ell < 2) invalid("ell", "ell must be >= 2");
    s.d = count(require(doc, "", "d"), "d");
    if (s.d < 1 || s.d > kMaxDim) invalid("d", "d must be in [1, 4]");
    s.sim.horizon = count(require(doc, "", "horizon"), "horizon");
    if (s.sim.horizon < 1) invalid("horizon", "horizon must be >= 1");
    if (s.sim.horizon < s.ell) invalid("horizon", "horizon must be >= ell");

    s.reward_preset = text(require(doc, "", "reward_preset"), "reward_preset");
    std::vector<double> values;
    if (doc.contains("reward_values")) {
      const json& rv = doc.at("reward_values");
      if (!rv.is_array()) invalid("reward_values", "expected an array of numbers");
      for (const auto& v : rv) values.push_back(number(v, "reward_values"));
    }
    s.sim.rewards = with_field("reward_preset", [&] {
      return RewardFunctionSet::preset(s.reward_preset, s.ell, s.d, values);
    });

    const json& noise = require(doc, "", "noise");
    only_keys(noise, "noise", {"type", "sd"});
    if (text(require(noise, "noise", "type"), "noise.type") != "gaussian")
      invalid("noise.type", "only \"gaussian\" is supported");
    const double sd = number(require(noise, "noise", "sd"), "noise.sd");
    if (!(sd >= 0.0)) invalid("noise.sd", "sd must be >= 0");
    s.sim.noise = GaussianNoise::with_sd(sd);

    s.sim.delay = parse_delay(require(doc, "", "delay"), "delay", s.sim.horizon);
    s.sim.schedule.pi = parse_rule(require(doc, "", "pi"), "pi", false);
    s.sim.schedule.h = parse_rule(require(doc, "", "h"), "h", true);
    s.sim.init = doc.contains("init") ? parse_init(doc.at("init"), s.ell) : InitPolicy::hybrid(s.ell);

    if (doc.contains("replications")) s.replications = count(doc.at("replications"), "replications");
    if (s.replications < 1) invalid("replications", "replications must be >= 1");
    if (doc.contains("trace_thinning"))
      s.trace_thinning = count(doc.at("trace_thinning"), "trace_thinning");
    if (s.trace_thinning < 1) invalid("trace_thinning", "trace_thinning must be >= 1");
    if (doc.contains("master_seed")) s.master_seed = count(doc.at("master_seed"), "master_seed");

    s.growth.horizon = std::max<std::uint64_t>(s.sim.horizon, 10);
    if (doc.contains("growth")) {
      const json& g = doc.at("growth");
      only_keys(g, "growth", {"alpha", "beta", "c_lower"});
      if (g.contains("alpha")) s.growth.alpha = number(g.at("alpha"), "growth.alpha");
      if (g.contains("beta")) s.growth.beta = number(g.at("beta"), "growth.beta");
      if (g.contains("c_lower")) s.growth.c_lower = number(g.at("c_lower"), "growth.c_lower");
      if (!((s.growth.alpha > 0.0) || (s.growth.alpha == 0.0 && s.growth.beta > 1.0)))
        invalid("growth", "need alpha > 0, or alpha = 0 and beta > 1");
      if (!(s.growth.c_lower > 0.0)) invalid("growth.c_lower", "c_lower must be > 0");
    }

    with_field("scenario", [&] { s.sim.validate(); });
    return s;
  } catch (const ValidationError& e) {
    if (dynamic_cast<const ParseError*>(&e)) throw;
    throw ValidationError(origin + ": " + e.what());
  } catch (const json::exception& e) {
    throw ValidationError(origin + ": " + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  Scenario s = parse_scenario(buf.str(), path.string());
  if (s.name.empty()) s.name = path.stem().string();
  if (const char* env = std::getenv("DBL_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long seed = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw ValidationError("DBL_SEED must be an unsigned integer");
    s.master_seed = seed;
  }
  return s;
}

std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IoError("cannot open manifest " + manifest.string());
  std::vector<std::filesystem::path> paths;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::filesystem::path p = line.substr(first, last - first + 1);
    if (p.is_relative()) p = manifest.parent_path() / p;
    paths.push_back(p);
  }
  if (paths.empty()) throw ValidationError(manifest.string() + ": manifest lists no scenarios");
  return paths;
}

std::vector<Scenario> load_manifest(const std::filesystem::path& manifest) {
  std::vector<Scenario> out;
  std::set<std::string> names;
  for (const auto& p : read_manifest(manifest)) {
    out.push_back(load_scenario(p));
    if (!names.insert(out.back().name).second)
      throw ValidationError(manifest.string() + ": duplicate scenario name \"" + out.back().name + "\"");
  }
  return out;
}

}  // namespace dbl
