// Copyright 2026 The crowdcomp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crowdcomp/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace crowdcomp {
namespace {

using Json = nlohmann::ordered_json;

Json number_or_null(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

Json parse(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing");
  return *it;
}

double number(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

double number(const Json& obj, const char* key, const std::string& path) {
  return number(field(obj, key, path), path + "." + key);
}

// Null or absent reads as NaN.
double optional_number(const Json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return kNaN;
  return number(*it, path + "." + key);
}

int integer(const Json& obj, const char* key, const std::string& path) {
  const Json& v = field(obj, key, path);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

const Json& array(const Json& obj, const char* key, const std::string& path) {
  const Json& v = field(obj, key, path);
  if (!v.is_array()) fail(path + "." + key, "expected an array");
  return v;
}

std::string indexed(const std::string& base, std::size_t k) {
  return base + "[" + std::to_string(k) + "]";
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw InputError("error writing '" + path.string() + "'");
}

std::string instance_to_json(const ProblemInstance& inst) {
  Json doc;
  doc["plane_size"] = inst.plane_size;
  doc["store"] = {{"x", inst.store.x}, {"y", inst.store.y}};
  doc["rho"] = inst.rho;
  doc["mu"] = inst.mu;
  doc["seed"] = inst.seed;
  doc["model_kind"] = std::string(to_string(inst.model));
  Json tasks = Json::array();
  for (const Task& t : inst.tasks) {
    tasks.push_back({{"id", t.id},
                     {"x", t.dest.x},
                     {"y", t.dest.y},
                     {"c", t.cost},
                     {"c_prime", t.penalized_cost}});
  }
  doc["tasks"] = std::move(tasks);
  Json drivers = Json::array();
  for (const Driver& d : inst.drivers) {
    drivers.push_back({{"id", d.id}, {"x", d.dest.x}, {"y", d.dest.y}});
  }
  doc["drivers"] = std::move(drivers);
  Json pairs = Json::array();
  for (std::size_t i = 0; i < inst.num_tasks(); ++i) {
    for (std::size_t j = 0; j < inst.num_drivers(); ++j) {
      const PairParams& p = inst.pair(i, j);
      Json row = {{"i", i},
                  {"j", j},
                  {"alpha", number_or_null(p.alpha)},
                  {"beta", number_or_null(p.beta)},
                  {"gamma", number_or_null(p.gamma)},
                  {"delta", number_or_null(p.delta)},
                  {"cap", p.cap},
                  {"detour", p.detour}};
      if (!p.curve.empty()) {
        row["table"] = {{"c", p.curve.compensation}, {"p", p.curve.probability}};
      }
      pairs.push_back(std::move(row));
    }
  }
  doc["pairs"] = std::move(pairs);
  if (!inst.calibration.empty()) {
    Json cal = Json::object();
    for (const auto& [k, v] : inst.calibration) cal[k] = v;
    doc["calibration"] = std::move(cal);
  }
  return doc.dump(1) + "\n";
}

ProblemInstance instance_from_json(std::string_view text) {
  const Json doc = parse(text);
  const std::string root = "instance";
  if (!doc.is_object()) fail(root, "expected an object");
  ProblemInstance inst;
  inst.plane_size = number(doc, "plane_size", root);
  if (!(inst.plane_size > 0.0)) fail("plane_size", "must be > 0");
  const Json& store = field(doc, "store", root);
  inst.store = {number(store, "x", "store"), number(store, "y", "store")};
  inst.rho = number(doc, "rho", root);
  if (!(inst.rho >= 0.0)) fail("rho", "must be >= 0");
  inst.mu = number(doc, "mu", root);
  if (!(inst.mu >= 0.0 && inst.mu <= 1.0)) fail("mu", "must be in [0, 1]");
  const Json& seed = field(doc, "seed", root);
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
    fail("seed", "expected a non-negative integer");
  }
  inst.seed = seed.get<std::uint64_t>();
  const Json& kind = field(doc, "model_kind", root);
  if (!kind.is_string()) fail("model_kind", "expected a string");
  try {
    inst.model = parse_model_kind(kind.get<std::string>());
  } catch (const InputError& e) {
    fail("model_kind", e.what());
  }

  const Json& tasks = array(doc, "tasks", root);
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const std::string path = indexed("tasks", k);
    Task t;
    t.id = integer(tasks[k], "id", path);
    t.dest = {number(tasks[k], "x", path), number(tasks[k], "y", path)};
    t.cost = number(tasks[k], "c", path);
    t.penalized_cost = number(tasks[k], "c_prime", path);
    if (!(t.cost >= 0.0) || !std::isfinite(t.cost)) fail(path + ".c", "must be >= 0");
    if (!(t.penalized_cost >= t.cost) || !std::isfinite(t.penalized_cost)) {
      fail(path + ".c_prime", "must be >= c");
    }
    inst.tasks.push_back(t);
  }
  const Json& drivers = array(doc, "drivers", root);
  for (std::size_t k = 0; k < drivers.size(); ++k) {
    const std::string path = indexed("drivers", k);
    Driver d;
    d.id = integer(drivers[k], "id", path);
    d.dest = {number(drivers[k], "x", path), number(drivers[k], "y", path)};
    inst.drivers.push_back(d);
  }

  const std::size_t n = inst.num_tasks();
  const std::size_t m = inst.num_drivers();
  inst.pairs.resize(n * m);
  std::vector<std::uint8_t> seen(n * m, 0);
  const Json& pairs = array(doc, "pairs", root);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const std::string path = indexed("pairs", k);
    const Json& row = pairs[k];
    const int i = integer(row, "i", path);
    const int j = integer(row, "j", path);
    if (i < 0 || static_cast<std::size_t>(i) >= n) fail(path + ".i", "task index out of range");
    if (j < 0 || static_cast<std::size_t>(j) >= m) fail(path + ".j", "driver index out of range");
    const std::size_t cell = static_cast<std::size_t>(i) * m + static_cast<std::size_t>(j);
    if (seen[cell]) {
      fail(path, "duplicate pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    seen[cell] = 1;
    PairParams& p = inst.pairs[cell];
    p.task = i;
    p.driver = j;
    p.kind = inst.model;
    p.alpha = optional_number(row, "alpha", path);
    p.beta = optional_number(row, "beta", path);
    p.gamma = optional_number(row, "gamma", path);
    p.delta = optional_number(row, "delta", path);
    p.cap = number(row, "cap", path);
    p.detour = number(row, "detour", path);
    if (!(p.cap >= 0.0) || !std::isfinite(p.cap)) fail(path + ".cap", "cap must be >= 0");
    if (!std::isfinite(p.detour)) fail(path + ".detour", "must be finite");
    switch (p.kind) {
      case ModelKind::kLinear:
        if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) fail(path + ".alpha", "alpha must be in [0, 1]");
        if (!(p.beta > 0.0) || !std::isfinite(p.beta)) fail(path + ".beta", "beta must be > 0");
        break;
      case ModelKind::kLogistic:
        if (!std::isfinite(p.gamma)) fail(path + ".gamma", "gamma must be finite");
        if (!(p.delta > 0.0) || !std::isfinite(p.delta)) fail(path + ".delta", "delta must be > 0");
        break;
      case ModelKind::kGeneric: {
        const Json& table = field(row, "table", path);
        const std::string tp = path + ".table";
        const Json& c = array(table, "c", tp);
        const Json& pr = array(table, "p", tp);
        if (c.empty() || c.size() != pr.size()) fail(tp, "c and p must be non-empty and of equal length");
        for (std::size_t q = 0; q < c.size(); ++q) {
          const double cq = number(c[q], indexed(tp + ".c", q));
          const double pq = number(pr[q], indexed(tp + ".p", q));
          if (!(cq > 0.0) || (q > 0 && !(cq > p.curve.compensation.back()))) {
            fail(indexed(tp + ".c", q), "compensations must be positive and increasing");
          }
          if (!(pq >= 0.0 && pq <= 1.0)) fail(indexed(tp + ".p", q), "probability must be in [0, 1]");
          p.curve.compensation.push_back(cq);
          p.curve.probability.push_back(pq);
        }
        break;
      }
    }
  }
  for (std::size_t cell = 0; cell < n * m; ++cell) {
    if (!seen[cell]) {
      fail("pairs", "missing pair (" + std::to_string(cell / m) + ", " +
                        std::to_string(cell % m) + ")");
    }
  }

  if (const auto it = doc.find("calibration"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) fail("calibration", "expected an object");
    for (const auto& [k, v] : it->items()) {
      inst.calibration[k] = number(v, "calibration." + k);
    }
  }
  return inst;
}

void save_instance(const ProblemInstance& inst, const std::filesystem::path& path) {
  write_file(path, instance_to_json(inst));
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return instance_from_json(text);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string plan_to_json(const OfferPlan& plan) {
  Json doc;
  Json allocations = Json::array();
  for (std::size_t i = 0; i < plan.allocations.size(); ++i) {
    const Allocation& a = plan.allocations[i];
    if (a.offered()) {
      allocations.push_back({{"task", i},
                             {"kind", "offer"},
                             {"driver", a.driver},
                             {"compensation", a.compensation}});
    } else {
      allocations.push_back({{"task", i}, {"kind", "company"}});
    }
  }
  doc["allocations"] = std::move(allocations);
  doc["expected_cost"] =
      plan.expected_cost ? Json(*plan.expected_cost) : Json(nullptr);
  doc["expected_distance"] =
      plan.expected_distance ? Json(*plan.expected_distance) : Json(nullptr);
  return doc.dump(1) + "\n";
}

OfferPlan plan_from_json(std::string_view text) {
  const Json doc = parse(text);
  const Json& allocations = array(doc, "allocations", "plan");
  OfferPlan plan;
  plan.allocations.resize(allocations.size());
  std::vector<std::uint8_t> seen(allocations.size(), 0);
  for (std::size_t k = 0; k < allocations.size(); ++k) {
    const std::string path = indexed("allocations", k);
    const Json& row = allocations[k];
    const int task = integer(row, "task", path);
    if (task < 0 || static_cast<std::size_t>(task) >= allocations.size()) {
      fail(path + ".task", "task index out of range");
    }
    if (seen[static_cast<std::size_t>(task)]) fail(path + ".task", "task allocated twice");
    seen[static_cast<std::size_t>(task)] = 1;
    const Json& kind = field(row, "kind", path);
    if (kind == "company") continue;
    if (kind != "offer") fail(path + ".kind", "expected \"company\" or \"offer\"");
    plan.allocations[static_cast<std::size_t>(task)] =
        Allocation::offer(integer(row, "driver", path), number(row, "compensation", path));
  }
  const double cost = optional_number(doc, "expected_cost", "plan");
  const double dist = optional_number(doc, "expected_distance", "plan");
  if (!std::isnan(cost)) plan.expected_cost = cost;
  if (!std::isnan(dist)) plan.expected_distance = dist;
  return plan;
}

void save_plan(const OfferPlan& plan, const std::filesystem::path& path) {
  write_file(path, plan_to_json(plan));
}

OfferPlan load_plan(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return plan_from_json(text);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::vector<NonSepConstraint> constraints_from_json(std::string_view text,
                                                    const ProblemInstance& inst) {
  const Json doc = parse(text);
  if (!doc.is_array()) fail("constraints", "expected an array");
  const std::size_t n = inst.num_tasks();
  const std::size_t m = inst.num_drivers();
  std::vector<NonSepConstraint> out;
  for (std::size_t l = 0; l < doc.size(); ++l) {
    const std::string path = indexed("constraints", l);
    NonSepConstraint con;
    con.a.assign(n * m, 0.0);
    con.b.assign(n * m, 0.0);
    con.limit = number(doc[l], "B", path);
    for (const char* key : {"a", "b"}) {
      const auto it = doc[l].find(key);
      if (it == doc[l].end() || it->is_null()) continue;
      const std::string tp = path + "." + key;
      if (!it->is_array() || it->size() != n) fail(tp, "expected " + std::to_string(n) + " rows");
      std::vector<double>& dst = key[0] == 'a' ? con.a : con.b;
      for (std::size_t i = 0; i < n; ++i) {
        const Json& r = (*it)[i];
        if (!r.is_array() || r.size() != m) {
          fail(indexed(tp, i), "expected " + std::to_string(m) + " entries");
        }
        for (std::size_t j = 0; j < m; ++j) {
          dst[i * m + j] = number(r[j], indexed(indexed(tp, i), j));
        }
      }
    }
    out.push_back(std::move(con));
  }
  validate_constraints(out, inst);
  return out;
}

std::vector<NonSepConstraint> load_constraints(const std::filesystem::path& path,
                                               const ProblemInstance& inst) {
  const std::string text = read_file(path);
  try {
    return constraints_from_json(text, inst);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace crowdcomp
