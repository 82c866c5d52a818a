#include "ontomas/performance.hpp"

#include "ontomas/error.hpp"

namespace ontomas {

void validatePerformance(const Performance& p) {
  const kb::Decimal zero(0);
  if (p.durationMin <= zero) {
    throw Error(ErrorCode::DomainViolation, "durationMin must be > 0, got " + p.durationMin.toString());
  }
  if (p.energyKwh < zero) {
    throw Error(ErrorCode::DomainViolation, "energyKwh must be >= 0, got " + p.energyKwh.toString());
  }
  if (p.emissions < zero) {
    throw Error(ErrorCode::DomainViolation, "emissions must be >= 0, got " + p.emissions.toString());
  }
  if (p.quality < zero || p.quality > kb::Decimal(1)) {
    throw Error(ErrorCode::DomainViolation, "quality must be in [0, 1], got " + p.quality.toString());
  }
}

}  // namespace ontomas
