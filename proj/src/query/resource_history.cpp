#include "ontomas/query/resource_history.hpp"

#include <stdexcept>

namespace ontomas::query {

namespace {

void replaceOnce(std::string& text, std::string_view from, const std::string& to) {
  const auto pos = text.find(from);
  if (pos == std::string::npos) {
    throw std::logic_error("resource-history template lacks " + std::string(from));
  }
  text.replace(pos, from.size(), to);
}

}  // namespace

std::string resourceHistoryQuery(const kb::Term& resource, std::string_view status) {
  std::string text(resourceHistoryTemplate());
  replaceOnce(text, "<resource>", resource.canonical());
  replaceOnce(text, "\"successful\"", kb::Term::string(std::string(status)).canonical());
  return text;
}

}  // namespace ontomas::query
