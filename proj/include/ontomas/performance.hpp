#pragma once

#include "ontomas/kb/decimal.hpp"

namespace ontomas {

// Metric bundle attached to a process plan (expected) or an execution (real).
struct Performance {
  kb::Decimal durationMin;
  kb::Decimal energyKwh;
  kb::Decimal emissions;
  kb::Decimal quality;

  friend bool operator==(const Performance&, const Performance&) = default;
};

// Throws Error(DomainViolation) unless duration > 0, energy >= 0,
// emissions >= 0 and 0 <= quality <= 1.
void validatePerformance(const Performance& p);

}  // namespace ontomas
