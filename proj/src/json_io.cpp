#include "persuade/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace persuade {

namespace {

PiecewiseLinear parse_table(const ordered_json& j) {
  std::vector<double> xs, ys;
  for (const auto& knot : j) {
    if (!knot.is_array() || knot.size() != 2) throw std::invalid_argument("table knots must be [x, y] pairs");
    xs.push_back(knot[0].get<double>());
    ys.push_back(knot[1].get<double>());
  }
  return PiecewiseLinear(xs, ys);
}

ordered_json table_to_json(const PiecewiseLinear& t) {
  ordered_json out = ordered_json::array();
  for (std::size_t i = 0; i < t.knots().size(); ++i) out.push_back({t.knots()[i], t.values()[i]});
  return out;
}

Valuation parse_valuation(const ordered_json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "additive") return Valuation::additive();
  if (kind == "multiplicative") return Valuation::multiplicative();
  if (kind == "linear_generic")
    return Valuation::linear_generic(parse_table(j.at("alpha")), parse_table(j.at("beta")));
  throw std::invalid_argument("unknown valuation kind: " + kind);
}

}  // namespace

TypeDistribution parse_demand(const ordered_json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform") return TypeDistribution::uniform();
  if (kind == "atoms")
    return TypeDistribution::discrete_atoms(j.at("points").get<std::vector<double>>(),
                                            j.at("masses").get<std::vector<double>>());
  if (kind == "piecewise_cdf") return TypeDistribution::piecewise_cdf(parse_table(j.at("knots")));
  throw std::invalid_argument("unknown demand kind: " + kind);
}

Instance parse_instance(const ordered_json& j) {
  std::optional<double> cap;
  if (j.contains("price_cap")) cap = j.at("price_cap").get<double>();
  return Instance::make(j.at("qualities").get<std::vector<double>>(), j.at("prior").get<std::vector<double>>(),
                        parse_valuation(j.at("valuation")), cap, /*declared=*/true);
}

ordered_json instance_to_json(const Instance& inst, const TypeDistribution& dist) {
  ordered_json j;
  j["qualities"] = inst.qualities.qualities;
  j["prior"] = inst.prior.weights;
  ordered_json val;
  switch (inst.valuation.family()) {
    case Valuation::Family::additive:
      val["kind"] = "additive";
      break;
    case Valuation::Family::multiplicative:
      val["kind"] = "multiplicative";
      break;
    case Valuation::Family::linear_generic:
      val["kind"] = "linear_generic";
      val["alpha"] = table_to_json(inst.valuation.alpha_table());
      val["beta"] = table_to_json(inst.valuation.beta_table());
      break;
  }
  j["valuation"] = val;
  ordered_json dem;
  switch (dist.kind()) {
    case TypeDistribution::Kind::uniform:
      dem["kind"] = "uniform";
      break;
    case TypeDistribution::Kind::discrete_atoms:
      dem["kind"] = "atoms";
      dem["points"] = dist.atom_points();
      dem["masses"] = dist.atom_masses();
      break;
    case TypeDistribution::Kind::piecewise_cdf:
      dem["kind"] = "piecewise_cdf";
      break;
  }
  j["demand"] = dem;
  j["price_cap"] = inst.price_cap;
  return j;
}

std::vector<std::string> instance_diagnostics(const ordered_json& j) {
  std::vector<std::string> out;
  auto note = [&](const std::string& path, const std::string& msg) { out.push_back(path + ": " + msg); };

  std::vector<double> qualities, prior;
  if (!j.contains("qualities") || !j.at("qualities").is_array()) {
    note("qualities", "missing or not an array");
  } else {
    qualities = j.at("qualities").get<std::vector<double>>();
    for (std::size_t i = 0; i < qualities.size(); ++i) {
      if (qualities[i] < 0.0 || qualities[i] > 1.0) note("qualities[" + std::to_string(i) + "]", "outside [0,1]");
      if (i > 0 && qualities[i] <= qualities[i - 1])
        note("qualities[" + std::to_string(i) + "]", "quality-order: not strictly increasing");
    }
  }
  if (!j.contains("prior") || !j.at("prior").is_array()) {
    note("prior", "missing or not an array");
  } else {
    prior = j.at("prior").get<std::vector<double>>();
    if (!qualities.empty() && prior.size() != qualities.size()) note("prior", "length differs from qualities");
    double sum = 0.0;
    for (std::size_t i = 0; i < prior.size(); ++i) {
      if (prior[i] < 0.0) note("prior[" + std::to_string(i) + "]", "negative weight");
      sum += prior[i];
    }
    char buf[64];
    if (std::abs(sum - 1.0) > 1e-9) {
      std::snprintf(buf, sizeof buf, "%.6g", sum);
      note("prior", std::string("prior-mass: weights sum to ") + buf);
    }
  }

  // Zero-mass entries are dropped on ingest; the declared endpoints must
  // survive that drop.
  if (!qualities.empty() && qualities.size() == prior.size()) {
    std::vector<double> kept;
    for (std::size_t i = 0; i < qualities.size(); ++i)
      if (prior[i] > 0.0) kept.push_back(qualities[i]);
    if (kept.empty() || std::abs(kept.front()) > 1e-12) note("qualities", "lowest retained quality must be 0");
    if (kept.empty() || std::abs(kept.back() - 1.0) > 1e-12) note("qualities", "highest retained quality must be 1");
  }

  if (!j.contains("valuation")) {
    note("valuation", "missing");
  } else {
    try {
      (void)parse_valuation(j.at("valuation"));
    } catch (const std::exception& e) {
      std::string msg = e.what();
      if (msg.find("increasing") != std::string::npos || msg.find("Lipschitz") != std::string::npos)
        note("valuation", std::string("assumption-1b: ") + msg);
      else if (msg.find("nonnegative") != std::string::npos)
        note("valuation", std::string("assumption-1a: ") + msg);
      else
        note("valuation", msg);
    }
  }
  if (j.contains("demand")) {
    try {
      (void)parse_demand(j.at("demand"));
    } catch (const std::exception& e) {
      note("demand", e.what());
    }
  }
  if (j.contains("price_cap") && j.at("price_cap").get<double>() <= 0.0) note("price_cap", "must be positive");
  return out;
}

ordered_json advertising_to_json(const Advertising& adv) {
  ordered_json j;
  j["support"] = adv.support;
  j["conditionals"] = adv.conditionals;
  return j;
}

Advertising parse_advertising(const ordered_json& j) {
  Advertising adv;
  adv.support = j.at("support").get<std::vector<double>>();
  adv.conditionals = j.at("conditionals").get<std::vector<std::vector<double>>>();
  for (const auto& row : adv.conditionals)
    if (row.size() != adv.support.size()) throw std::invalid_argument("advertising: ragged conditionals");
  return adv;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace persuade
