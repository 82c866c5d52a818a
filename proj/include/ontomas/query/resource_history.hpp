#pragma once

#include <string>
#include <string_view>

#include "ontomas/kb/term.hpp"

namespace ontomas::query {

/// The resource-history query as shipped in fixtures/queries, with the
/// `<resource>` placeholder and the "successful" status literal.
std::string_view resourceHistoryTemplate();

/// The template with the placeholder bound to `resource` and the status filter
/// bound to `status`.
std::string resourceHistoryQuery(const kb::Term& resource, std::string_view status = "successful");

}  // namespace ontomas::query
