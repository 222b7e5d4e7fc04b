#pragma once

#include <string>

#include "coopt/settlement.hpp"

namespace coopt {

/// Structured-document (JSON) serialization for results. Numbers round-trip
/// losslessly (shortest-exact rendering).
std::string clearing_to_json(const MarketCase& c, const ClearingSolution& s);
ClearingSolution clearing_from_json(const std::string& text);

std::string prices_to_json(const MarketCase& c, const PriceReport& p);
std::string settlement_to_json(const MarketCase& c, const SettlementReport& r);

/// Per-bus price CSV: bus, omega0, omega_<scenario>..., then per-resource
/// eta rows appended as separate sections.
std::string prices_csv(const MarketCase& c, const PriceReport& p);

void save_clearing(const MarketCase& c, const ClearingSolution& s, const std::string& path);
ClearingSolution load_clearing(const std::string& path);

}  // namespace coopt
