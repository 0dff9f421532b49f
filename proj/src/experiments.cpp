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

#include "crowdcomp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "crowdcomp/io.hpp"

namespace crowdcomp {
namespace {

void append(std::string& out, double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, r.ptr);
}

template <typename T>
T parse_field(std::string_view s, std::string_view what) {
  T v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw InputError("bad " + std::string(what) + " value '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> lines(std::string_view text) {
  std::vector<std::string_view> out;
  for (std::string_view line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string instance_key(const ExperimentRecord& r) {
  std::string key = record_key(r);
  return key.substr(0, key.rfind(','));
}

}  // namespace

double saving_pct(double baseline, double value) {
  if (baseline == 0.0) return 0.0;
  return 100.0 * (baseline - value) / baseline;
}

ExperimentRecord make_record(const ProblemInstance& inst, SchemeKind scheme, double p,
                             OfferPlan plan) {
  ExperimentRecord r;
  r.model = inst.model;
  r.drivers = inst.num_drivers();
  r.tasks = inst.num_tasks();
  r.rho = inst.rho;
  r.mu = inst.mu;
  r.seed = inst.seed;
  r.scheme = scheme;
  r.p = p;
  if (!plan.expected_cost || !plan.expected_distance) evaluate_plan(plan, inst);
  r.expected_cost = *plan.expected_cost;
  r.expected_distance = *plan.expected_distance;
  r.baseline_cost = baseline_cost(inst);
  r.baseline_distance = baseline_distance(inst);
  r.cost_saving_pct = saving_pct(r.baseline_cost, r.expected_cost);
  r.distance_saving_pct = saving_pct(r.baseline_distance, r.expected_distance);
  const std::size_t offers = plan.num_offers();
  r.fraction_offered =
      r.tasks ? static_cast<double>(offers) / static_cast<double>(r.tasks) : 0.0;
  if (offers > 0) {
    const std::vector<double> probs = acceptance_probabilities(plan, inst);
    double sum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (plan.allocations[i].offered()) sum += probs[i];
    }
    r.mean_acceptance = sum / static_cast<double>(offers);
  }
  r.plan = std::move(plan);
  return r;
}

ExperimentRecord evaluate(const ProblemInstance& inst, SchemeKind scheme,
                          const TuneOptions& options, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  TuneResult tuned = tune_scheme(scheme, inst, options);
  const auto stop = std::chrono::steady_clock::now();
  ExperimentRecord r = make_record(inst, scheme, tuned.p, std::move(tuned.plan));
  if (timing) {
    r.wall_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  }
  return r;
}

std::string record_key(const ExperimentRecord& r) {
  std::string out(to_string(r.model));
  out += ',';
  out += std::to_string(r.drivers);
  out += ',';
  append(out, r.rho);
  out += ',';
  append(out, r.mu);
  out += ',';
  out += std::to_string(r.seed);
  out += ',';
  out += to_string(r.scheme);
  return out;
}

std::string to_csv_row(const ExperimentRecord& r) {
  std::string out = record_key(r);
  out += ',';
  if (!std::isnan(r.p)) append(out, r.p);
  for (double v : {r.expected_cost, r.cost_saving_pct, r.expected_distance,
                   r.distance_saving_pct, r.fraction_offered}) {
    out += ',';
    append(out, v);
  }
  out += ',';
  if (r.mean_acceptance) append(out, *r.mean_acceptance);
  out += ',';
  if (r.wall_time_ms) append(out, *r.wall_time_ms);
  return out;
}

std::vector<ExperimentRecord> records_from_csv(std::string_view text) {
  const std::vector<std::string_view> rows = lines(text);
  if (rows.empty() || rows.front() != kCsvHeader) {
    throw InputError("results CSV must start with the header: " + std::string(kCsvHeader));
  }
  std::vector<ExperimentRecord> out;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto f = split(rows[k], ',');
    if (f.size() != 14) {
      throw InputError("results CSV line " + std::to_string(k + 1) + ": expected 14 fields");
    }
    ExperimentRecord r;
    r.model = parse_model_kind(f[0]);
    r.drivers = parse_field<std::size_t>(f[1], "O");
    r.rho = parse_field<double>(f[2], "rho");
    r.mu = parse_field<double>(f[3], "mu");
    r.seed = parse_field<std::uint64_t>(f[4], "seed");
    r.scheme = parse_scheme_kind(f[5]);
    r.p = f[6].empty() ? kNaN : parse_field<double>(f[6], "p");
    r.expected_cost = parse_field<double>(f[7], "expected_cost");
    r.cost_saving_pct = parse_field<double>(f[8], "cost_saving_pct");
    r.expected_distance = parse_field<double>(f[9], "expected_distance");
    r.distance_saving_pct = parse_field<double>(f[10], "distance_saving_pct");
    r.fraction_offered = parse_field<double>(f[11], "fraction_offered");
    if (!f[12].empty()) r.mean_acceptance = parse_field<double>(f[12], "mean_acceptance");
    if (!f[13].empty()) r.wall_time_ms = parse_field<double>(f[13], "wall_time_ms");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ExperimentRecord> sweep(const SweepConfig& cfg,
                                    const std::filesystem::path* csv) {
  const auto models = sorted_unique(cfg.models);
  const auto drivers = sorted_unique(cfg.drivers);
  const auto rhos = sorted_unique(cfg.rhos);
  const auto mus = sorted_unique(cfg.mus);
  const auto seeds = sorted_unique(cfg.seeds);
  const auto schemes = sorted_unique(cfg.schemes);

  struct Unit {
    GenConfig gen;
    std::vector<SchemeKind> schemes;
    std::vector<std::string> keys;
  };
  std::vector<Unit> units;
  for (ModelKind model : models) {
    for (std::size_t o : drivers) {
      for (double rho : rhos) {
        for (double mu : mus) {
          for (std::uint64_t seed : seeds) {
            Unit u;
            u.gen.tasks = cfg.tasks;
            u.gen.drivers = o;
            u.gen.rho = rho;
            u.gen.mu = mu;
            u.gen.seed = seed;
            u.gen.model = model;
            u.gen.dataset_rows = cfg.dataset_rows;
            validate(u.gen);
            ExperimentRecord probe;
            probe.model = model;
            probe.drivers = o;
            probe.rho = rho;
            probe.mu = mu;
            probe.seed = seed;
            for (SchemeKind s : schemes) {
              probe.scheme = s;
              u.schemes.push_back(s);
              u.keys.push_back(record_key(probe));
            }
            units.push_back(std::move(u));
          }
        }
      }
    }
  }

  std::map<std::string, std::string> existing;
  std::filesystem::path partial;
  if (csv) {
    partial = *csv;
    partial += ".partial";
    for (const auto& path : {*csv, partial}) {
      if (!std::filesystem::exists(path)) continue;
      const std::string text = read_file(path);
      const auto rows = lines(text);
      for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto f = split(rows[k], ',');
        if (f.size() != 14) continue;  // torn final line of an interrupted run
        std::string key;
        for (std::size_t q = 0; q < 6; ++q) {
          if (q) key += ',';
          key += f[q];
        }
        existing.emplace(std::move(key), std::string(rows[k]));
      }
    }
  }

  // Logistic fits are shared by every instance with the same (seed, mu).
  std::map<std::pair<std::uint64_t, double>, LogisticFit> fits;
  std::vector<std::uint8_t> needed(units.size(), 0);
  for (std::size_t u = 0; u < units.size(); ++u) {
    for (const auto& key : units[u].keys) {
      if (!existing.count(key)) needed[u] = 1;
    }
    if (needed[u] && units[u].gen.model == ModelKind::kLogistic) {
      const auto fk = std::make_pair(units[u].gen.seed, units[u].gen.mu);
      if (!fits.count(fk)) {
        fits.emplace(fk, fit_logistic(simulate_decisions(units[u].gen, cfg.dataset_rows)));
      }
    }
  }

  std::vector<std::vector<ExperimentRecord>> results(units.size());
  std::vector<std::exception_ptr> errors(units.size());
  std::vector<std::uint8_t> done(units.size(), 0);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};

  const auto work = [&](std::size_t u) {
    const Unit& unit = units[u];
    std::vector<ExperimentRecord> out;
    const LogisticFit* fit = nullptr;
    if (unit.gen.model == ModelKind::kLogistic) {
      fit = &fits.at({unit.gen.seed, unit.gen.mu});
    }
    const ProblemInstance inst = generate(unit.gen, fit);
    for (std::size_t s = 0; s < unit.schemes.size(); ++s) {
      if (existing.count(unit.keys[s])) continue;
      out.push_back(evaluate(inst, unit.schemes[s], cfg.tune, cfg.timing));
    }
    return out;
  };
  const auto worker = [&]() {
    while (!stop) {
      const std::size_t u = next.fetch_add(1);
      if (u >= units.size()) return;
      std::vector<ExperimentRecord> out;
      std::exception_ptr err;
      if (needed[u]) {
        try {
          out = work(u);
        } catch (...) {
          err = std::current_exception();
        }
      }
      {
        std::lock_guard lock(mu);
        results[u] = std::move(out);
        errors[u] = err;
        done[u] = 1;
      }
      cv.notify_all();
    }
  };

  const unsigned jobs = std::max(1u, cfg.jobs);
  std::vector<std::thread> pool;
  if (jobs > 1) {
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  std::ofstream out;
  if (csv) {
    out.open(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + partial.string() + "'");
    out << kCsvHeader << '\n';
  }

  std::vector<ExperimentRecord> computed;
  std::exception_ptr failure;
  for (std::size_t u = 0; u < units.size() && !failure; ++u) {
    if (jobs == 1) {
      // Run inline: claim the unit ourselves.
      next = u + 1;
      std::vector<ExperimentRecord> res;
      if (needed[u]) {
        try {
          res = work(u);
        } catch (...) {
          failure = std::current_exception();
          break;
        }
      }
      results[u] = std::move(res);
    } else {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return done[u] != 0; });
      if (errors[u]) {
        failure = errors[u];
        break;
      }
    }
    std::size_t r = 0;
    for (const auto& key : units[u].keys) {
      const auto it = existing.find(key);
      std::string line;
      if (it != existing.end()) {
        line = it->second;
      } else {
        line = to_csv_row(results[u][r]);
        computed.push_back(std::move(results[u][r]));
        ++r;
      }
      if (csv) out << line << '\n';
    }
    if (csv) out.flush();
  }
  stop = true;
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  if (csv) {
    out.close();
    if (!out) throw InputError("error writing '" + partial.string() + "'");
    std::filesystem::rename(partial, *csv);
  }
  return computed;
}

std::optional<double> metric_value(const ExperimentRecord& r, std::string_view metric) {
  if (metric == "expected_cost") return r.expected_cost;
  if (metric == "cost_saving_pct") return r.cost_saving_pct;
  if (metric == "expected_distance") return r.expected_distance;
  if (metric == "distance_saving_pct") return r.distance_saving_pct;
  if (metric == "fraction_offered") return r.fraction_offered;
  if (metric == "mean_acceptance") return r.mean_acceptance;
  if (metric == "p") return std::isnan(r.p) ? std::nullopt : std::optional<double>(r.p);
  throw InputError("unknown metric '" + std::string(metric) + "'");
}

PairedT paired_t(const std::vector<ExperimentRecord>& a,
                 const std::vector<ExperimentRecord>& b, std::string_view metric) {
  std::map<std::string, double> left, right;
  const auto collect = [&](const std::vector<ExperimentRecord>& recs,
                           std::map<std::string, double>& dst) {
    for (const auto& r : recs) {
      const auto v = metric_value(r, metric);
      if (!v) throw InputError("metric " + std::string(metric) + " is null for " + record_key(r));
      if (!dst.emplace(instance_key(r), *v).second) {
        throw InputError("duplicate instance " + instance_key(r));
      }
    }
  };
  collect(a, left);
  collect(b, right);
  if (left.size() != right.size()) throw InputError("record sets cover different instances");
  std::vector<double> xa, xb;
  for (const auto& [key, v] : left) {
    const auto it = right.find(key);
    if (it == right.end()) throw InputError("instance " + key + " missing from second set");
    xa.push_back(v);
    xb.push_back(it->second);
  }
  return paired_t(xa, xb);
}

TrendAxis parse_trend_axis(std::string_view name) {
  if (name == "O" || name == "drivers") return TrendAxis::kDrivers;
  if (name == "rho") return TrendAxis::kRho;
  if (name == "mu") return TrendAxis::kMu;
  throw InputError("unknown axis '" + std::string(name) + "' (expected O, rho or mu)");
}

std::vector<TrendLevel> trend_report(const std::vector<ExperimentRecord>& records,
                                     TrendAxis axis, std::string_view metric) {
  std::map<double, std::pair<double, std::size_t>> acc;
  for (const auto& r : records) {
    const auto v = metric_value(r, metric);
    if (!v) continue;
    double level = 0.0;
    switch (axis) {
      case TrendAxis::kDrivers:
        level = static_cast<double>(r.drivers);
        break;
      case TrendAxis::kRho:
        level = r.rho;
        break;
      case TrendAxis::kMu:
        level = r.mu;
        break;
    }
    auto& slot = acc[level];
    slot.first += *v;
    slot.second += 1;
  }
  std::vector<TrendLevel> out;
  for (const auto& [level, s] : acc) {
    out.push_back({level, s.first / static_cast<double>(s.second), s.second});
  }
  return out;
}

}  // namespace crowdcomp
