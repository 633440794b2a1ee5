#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "persuade/market.hpp"
#include "persuade/signaling.hpp"

namespace persuade {

using ordered_json = nlohmann::ordered_json;

/// Instance schema:
/// {"qualities": [...], "prior": [...],
///  "valuation": {"kind": "additive"|"multiplicative"|"linear_generic",
///                "alpha": [[x,y],...], "beta": [[x,y],...]},
///  "demand": {"kind": "uniform"} |
///            {"kind": "atoms", "points": [...], "masses": [...]} |
///            {"kind": "piecewise_cdf", "knots": [[x,F],...]},
///  "price_cap": optional}
Instance parse_instance(const ordered_json& j);
TypeDistribution parse_demand(const ordered_json& j);
ordered_json instance_to_json(const Instance& inst, const TypeDistribution& dist);

/// Collects human-readable diagnostics for a raw instance document instead
/// of throwing: quality ordering/range, prior normalization, valuation
/// assumptions at the knots. Empty means the document is well formed.
std::vector<std::string> instance_diagnostics(const ordered_json& j);

ordered_json advertising_to_json(const Advertising& adv);
Advertising parse_advertising(const ordered_json& j);

std::string format_double(double v);  // 12 significant digits, locale-free

}  // namespace persuade
