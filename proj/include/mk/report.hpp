#pragma once

// Rendering of verification results as JSON or plain text.

#include "mk/verifier.hpp"

#include <iosfwd>
#include <json.hpp>
#include <string>

namespace mk {

nlohmann::ordered_json to_json(const CheckResult& c);
/// {"params":{s,n,M},"group":"Gk","checks":[...],"chi":{formula,cohomology,bruteforce}}
nlohmann::ordered_json to_json(const GroupReport& g);
nlohmann::ordered_json to_json(const RunReport& r);

void write_text(std::ostream& os, const RunReport& r, bool verbose = false);

/// Cuts long element strings for terminal output.
std::string abbreviate(const std::string& text, std::size_t limit = 160);

} // namespace mk
