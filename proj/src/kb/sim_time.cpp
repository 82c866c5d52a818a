#include "ontomas/kb/sim_time.hpp"

#include <charconv>
#include <chrono>

#include <fmt/format.h>

namespace ontomas::kb {

namespace {

using namespace std::chrono;

constexpr sys_days kEpoch = sys_days{year{2023} / January / 1};

SimMinute floorDiv(SimMinute a, SimMinute b) {
  SimMinute q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool readInt(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
  return ec == std::errc{};
}

}  // namespace

std::string formatDateTime(SimMinute minute) {
  const SimMinute day = floorDiv(minute, 24 * 60);
  const SimMinute inDay = minute - day * 24 * 60;
  const year_month_day ymd{kEpoch + days{day}};
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}Z",
                     static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()), inDay / 60, inDay % 60);
}

std::optional<SimMinute> parseDateTime(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  if (!readInt(text, 0, 4, y) || text.size() < 17 || text[4] != '-' ||
      !readInt(text, 5, 2, mo) || text[7] != '-' || !readInt(text, 8, 2, d) ||
      text[10] != 'T' || !readInt(text, 11, 2, h) || text[13] != ':' ||
      !readInt(text, 14, 2, mi)) {
    return std::nullopt;
  }
  std::string_view rest = text.substr(16);
  if (rest == ":00Z") rest = "Z";
  if (rest != "Z") return std::nullopt;
  if (h > 23 || mi > 59) return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  const SimMinute dayOffset = (sys_days{ymd} - kEpoch).count();
  return dayOffset * 24 * 60 + h * 60 + mi;
}

}  // namespace ontomas::kb
