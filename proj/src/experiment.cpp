#include "persuade/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <stdexcept>

#include "persuade/parallel.hpp"

namespace persuade {

namespace {

AlgorithmChoice parse_algorithm(const std::string& name) {
  if (name == "alg1") return AlgorithmChoice::alg1;
  if (name == "alg2") return AlgorithmChoice::alg2;
  if (name == "baseline-no-info") return AlgorithmChoice::baseline_no_info;
  if (name == "baseline-full-info") return AlgorithmChoice::baseline_full_info;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out.good()) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::string algorithm_name(AlgorithmChoice a) {
  switch (a) {
    case AlgorithmChoice::alg1:
      return "alg1";
    case AlgorithmChoice::alg2:
      return "alg2";
    case AlgorithmChoice::baseline_no_info:
      return "baseline-no-info";
    case AlgorithmChoice::baseline_full_info:
      return "baseline-full-info";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::parse(const ordered_json& j) {
  ExperimentConfig cfg;
  cfg.instance_json = j.at("instance");
  cfg.instance = parse_instance(cfg.instance_json);
  cfg.demand = parse_demand(cfg.instance_json.at("demand"));
  cfg.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  cfg.horizons = j.at("horizons").get<std::vector<std::int64_t>>();
  if (cfg.horizons.empty()) throw std::invalid_argument("config: horizons empty");
  for (std::size_t i = 1; i < cfg.horizons.size(); ++i)
    if (cfg.horizons[i] <= cfg.horizons[i - 1]) throw std::invalid_argument("config: horizons must strictly increase");
  cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (cfg.seeds.empty()) throw std::invalid_argument("config: seeds empty");
  if (std::set<std::uint64_t>(cfg.seeds.begin(), cfg.seeds.end()).size() != cfg.seeds.size())
    throw std::invalid_argument("config: seeds must be distinct");

  if (j.contains("epsilon")) {
    const auto& e = j.at("epsilon");
    std::string policy = e.at("policy").get<std::string>();
    if (policy == "theorem1-default") {
      cfg.epsilon_policy = EpsilonPolicy::theorem1_default;
    } else if (policy == "equally-spaced") {
      cfg.epsilon_policy = EpsilonPolicy::equally_spaced;
    } else if (policy == "explicit") {
      cfg.epsilon_policy = EpsilonPolicy::explicit_value;
      cfg.epsilon_value = e.at("value").get<double>();
      if (!(cfg.epsilon_value > 0.0) || cfg.epsilon_value > 1.0)
        throw std::invalid_argument("config: explicit epsilon must lie in (0,1]");
    } else {
      throw std::invalid_argument("config: unknown epsilon policy " + policy);
    }
  }
  if (j.contains("epsilon_hat")) {
    cfg.epsilon_hat = j.at("epsilon_hat").get<double>();
    if (!(*cfg.epsilon_hat > 0.0) || *cfg.epsilon_hat > 1.0)
      throw std::invalid_argument("config: epsilon_hat must lie in (0,1]");
  }
  if (j.contains("epsilon_opt")) {
    cfg.epsilon_opt = j.at("epsilon_opt").get<double>();
    if (!(cfg.epsilon_opt > 0.0) || cfg.epsilon_opt > 1.0)
      throw std::invalid_argument("config: epsilon_opt must lie in (0,1]");
  }
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  return cfg;
}

std::string ExperimentConfig::fingerprint() const {
  ordered_json j;
  j["instance"] = instance_json;
  j["algorithm"] = algorithm_name(algorithm);
  j["horizons"] = horizons;
  j["seeds"] = seeds;
  j["epsilon_policy"] = static_cast<int>(epsilon_policy);
  j["epsilon_value"] = epsilon_value;
  if (epsilon_hat) j["epsilon_hat"] = *epsilon_hat;
  j["epsilon_opt"] = epsilon_opt;
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

double ExperimentConfig::epsilon_hat_for(std::int64_t horizon) const {
  if (epsilon_hat) return *epsilon_hat;
  double t = static_cast<double>(horizon);
  return std::clamp(std::pow(std::log(t) / t, 0.25), 1e-6, 1.0);
}

double ExperimentConfig::epsilon_for(std::int64_t horizon) const {
  switch (epsilon_policy) {
    case EpsilonPolicy::explicit_value:
      return epsilon_value;
    case EpsilonPolicy::equally_spaced:
      return epsilon_equally_spaced(instance.num_qualities(), horizon);
    case EpsilonPolicy::theorem1_default:
      break;
  }
  if (algorithm == AlgorithmChoice::alg2) return epsilon_hat_for(horizon);  // eps = eps_hat default
  return epsilon_theorem1(instance.num_qualities(), horizon);
}

std::string rounds_to_csv(const RunResult& run, double opt_per_round) {
  std::string out = "t,p,q,x,a,revenue_realized,revenue_expected,regret_expected\n";
  out.reserve(run.rounds.size() * 96 + out.size());
  double cum_regret = 0.0;
  char buf[256];
  for (const RoundRecord& rec : run.rounds) {
    cum_regret += opt_per_round - rec.revenue_expected;
    std::snprintf(buf, sizeof buf, "%lld,%.12g,%.12g,%.12g,%d,%.12g,%.12g,%.12g\n",
                  static_cast<long long>(rec.t), rec.price, rec.posterior_mean, rec.critical_type,
                  rec.purchased ? 1 : 0, rec.revenue_realized, rec.revenue_expected, cum_regret);
    out += buf;
  }
  return out;
}

ordered_json ExperimentSummary::to_json(const ExperimentConfig& cfg) const {
  ordered_json j;
  j["fingerprint"] = fingerprint;
  j["algorithm"] = algorithm_name(cfg.algorithm);
  j["benchmark"] = {{"revenue_per_round", opt_revenue},
                    {"price", opt_price},
                    {"epsilon_opt", epsilon_opt},
                    {"note", "grid-restricted clairvoyant value; true OPT exceeds it by at most "
                             "2*epsilon_opt, so reported regret carries a systematic slack of up to "
                             "2*epsilon_opt*T"}};
  ordered_json cells_json = ordered_json::array();
  for (const CellResult& c : cells) {
    cells_json.push_back({{"algorithm", algorithm_name(c.algorithm)},
                          {"horizon", c.horizon},
                          {"seed", c.seed},
                          {"epsilon", c.epsilon},
                          {"final_regret_expected", c.final_regret_expected},
                          {"final_regret_realized", c.final_regret_realized},
                          {"total_expected", c.total_expected},
                          {"total_realized", c.total_realized},
                          {"rounds_csv", c.rounds_csv},
                          {"tracker_csv", c.tracker_csv}});
  }
  j["cells"] = cells_json;

  ordered_json per_h = ordered_json::array();
  for (std::int64_t horizon : cfg.horizons) {
    std::vector<double> finals;
    for (const CellResult& c : cells)
      if (c.horizon == horizon) finals.push_back(c.final_regret_expected);
    if (finals.empty()) continue;
    double mean = 0.0;
    for (double f : finals) mean += f;
    mean /= static_cast<double>(finals.size());
    double var = 0.0;
    for (double f : finals) var += (f - mean) * (f - mean);
    double stderr_v = finals.size() > 1
                          ? std::sqrt(var / (static_cast<double>(finals.size()) - 1.0) /
                                      static_cast<double>(finals.size()))
                          : 0.0;
    per_h.push_back({{"horizon", horizon},
                     {"mean_final_regret", mean},
                     {"stderr", stderr_v},
                     {"seeds", finals.size()}});
  }
  j["per_horizon"] = per_h;
  if (loglog_slope) j["loglog_slope"] = *loglog_slope;
  return j;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                 std::uint64_t seed_offset, bool verbose) {
  std::filesystem::create_directories(out_dir);
  int threads = cfg.threads > 0 ? cfg.threads : hardware_threads();

  ExperimentSummary summary;
  summary.fingerprint = cfg.fingerprint();
  summary.epsilon_opt = cfg.epsilon_opt;
  auto opt = clairvoyant_opt(cfg.instance, cfg.demand, cfg.epsilon_opt, threads);
  summary.opt_revenue = opt.revenue;
  summary.opt_price = opt.price;

  struct Cell {
    std::int64_t horizon;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::int64_t horizon : cfg.horizons)
    for (std::uint64_t seed : cfg.seeds) cells.push_back({horizon, seed + seed_offset});

  summary.cells.resize(cells.size());
  std::mutex io_mu;
  parallel_for(cells.size(), threads, [&](std::size_t idx) {
    const Cell& cell = cells[idx];
    RunConfig rc;
    rc.horizon = cell.horizon;
    rc.seed = cell.seed;
    rc.epsilon = cfg.epsilon_for(cell.horizon);

    RunResult run = [&] {
      switch (cfg.algorithm) {
        case AlgorithmChoice::alg1:
          return run_algorithm1(cfg.instance, cfg.demand, rc);
        case AlgorithmChoice::alg2:
          return run_algorithm2(cfg.instance, cfg.demand, rc, cfg.epsilon_hat_for(cell.horizon));
        case AlgorithmChoice::baseline_no_info:
          return run_fixed_advertising_baseline(cfg.instance, cfg.demand, rc, AdvKind::fixed_no_info);
        case AlgorithmChoice::baseline_full_info:
          return run_fixed_advertising_baseline(cfg.instance, cfg.demand, rc, AdvKind::fixed_full_info);
      }
      throw std::logic_error("unreachable");
    }();

    auto curve = regret_curve(run, summary.opt_revenue);
    char stem[128];
    std::snprintf(stem, sizeof stem, "%s_T%lld_s%llu", algorithm_name(cfg.algorithm).c_str(),
                  static_cast<long long>(cell.horizon), static_cast<unsigned long long>(cell.seed));

    CellResult res;
    res.algorithm = cfg.algorithm;
    res.horizon = cell.horizon;
    res.seed = cell.seed;
    res.epsilon = rc.epsilon;
    res.final_regret_expected = curve.expected.back();
    res.final_regret_realized = curve.realized.back();
    res.total_expected = run.total_expected;
    res.total_realized = run.total_realized;
    res.rounds_csv = std::string(stem) + ".csv";
    res.tracker_csv = std::string(stem) + "_tracker.csv";

    write_file(out_dir / res.rounds_csv, rounds_to_csv(run, summary.opt_revenue));
    write_file(out_dir / res.tracker_csv, run.tracker.to_csv());
    summary.cells[idx] = res;
    if (verbose) {
      std::lock_guard<std::mutex> lock(io_mu);
      std::fprintf(stderr, "[persuade] cell %s done: final expected regret %.6g\n", stem,
                   res.final_regret_expected);
    }
  });

  // Log-log slope over seed-averaged final regrets, one point per horizon.
  if (cfg.horizons.size() >= 2) {
    std::vector<double> xs, ys;
    for (std::int64_t horizon : cfg.horizons) {
      double mean = 0.0;
      int n = 0;
      for (const CellResult& c : summary.cells)
        if (c.horizon == horizon) {
          mean += c.final_regret_expected;
          ++n;
        }
      mean /= static_cast<double>(n);
      if (mean > 0.0) {
        xs.push_back(std::log(static_cast<double>(horizon)));
        ys.push_back(std::log(mean));
      }
    }
    if (xs.size() >= 2) {
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
      }
      mx /= static_cast<double>(xs.size());
      my /= static_cast<double>(xs.size());
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
      }
      summary.loglog_slope = num / den;
    }
  }

  write_file(out_dir / "summary.json", summary.to_json(cfg).dump(2) + "\n");
  return summary;
}

ordered_json opt_report(const ExperimentConfig& cfg) {
  int threads = cfg.threads > 0 ? cfg.threads : hardware_threads();
  auto opt = clairvoyant_opt(cfg.instance, cfg.demand, cfg.epsilon_opt, threads);
  auto rep = validate(opt.advertising, cfg.instance);
  ordered_json j;
  j["price"] = opt.price;
  j["revenue_per_round"] = opt.revenue;
  j["epsilon_opt"] = opt.epsilon;
  j["advertising"] = advertising_to_json(opt.advertising);
  j["advertising_valid"] = rep.ok;
  j["note"] = "true OPT exceeds the reported grid value by at most 2*epsilon_opt";
  return j;
}

}  // namespace persuade
