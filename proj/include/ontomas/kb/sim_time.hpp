#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ontomas::kb {

// Whole minutes since 2023-01-01T00:00Z. All runtime timestamps use this clock;
// the KB stores them as xsd:dateTime literals.
using SimMinute = std::int64_t;

// "2023-01-01T00:20Z"
std::string formatDateTime(SimMinute minute);

// Accepts "YYYY-MM-DDTHH:MMZ" and "YYYY-MM-DDTHH:MM:00Z". Anything finer than a
// minute, or without the UTC designator, is rejected.
std::optional<SimMinute> parseDateTime(std::string_view text);

}  // namespace ontomas::kb
