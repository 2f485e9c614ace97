#include "mk/report.hpp"

#include <iomanip>
#include <ostream>

namespace mk {

namespace {

using Json = nlohmann::ordered_json;

Json optional_int(const std::optional<std::uint64_t>& v) { return v ? Json(*v) : Json(nullptr); }

} // namespace

std::string abbreviate(const std::string& text, std::size_t limit)
{
    if (text.size() <= limit)
        return text;
    return text.substr(0, limit) + " ... (" + std::to_string(text.size()) + " chars)";
}

Json to_json(const CheckResult& c)
{
    return Json{{"name", c.name},
                {"status", c.pass ? "pass" : "fail"},
                {"detail", c.detail},
                {"witness", c.witness ? Json(*c.witness) : Json(nullptr)}};
}

Json to_json(const GroupReport& g)
{
    Json checks = Json::array();
    for (const auto& c : g.checks)
        checks.push_back(to_json(c));
    return Json{{"params", {{"s", g.params.s}, {"n", g.params.n}, {"M", g.params.M}}},
                {"group", g.spec.name()},
                {"checks", std::move(checks)},
                {"chi",
                 {{"formula", optional_int(g.chi.formula)},
                  {"cohomology", optional_int(g.chi.cohomology)},
                  {"bruteforce", optional_int(g.chi.bruteforce)}}}};
}

Json to_json(const RunReport& r)
{
    Json groups = Json::array();
    for (const auto& g : r.groups)
        groups.push_back(to_json(g));
    return Json{{"params", {{"s", r.params.s}, {"n", r.params.n}, {"M", r.params.M}}},
                {"mode", to_string(r.mode)},
                {"seed", r.seed},
                {"status", r.pass() ? "pass" : "fail"},
                {"groups", std::move(groups)}};
}

void write_text(std::ostream& os, const RunReport& r, bool verbose)
{
    os << "s=" << r.params.s << " n=" << r.params.n << " M=" << r.params.M << " dim=" << r.params.dim
       << " mode=" << to_string(r.mode) << " seed=" << r.seed << "\n";
    std::size_t passed = 0;
    for (const auto& g : r.groups) {
        const bool ok = g.pass();
        passed += ok;
        os << "\n" << describe(g.spec) << "  [" << (ok ? "PASS" : "FAIL") << "]\n";
        for (const auto& c : g.checks) {
            if (!verbose && c.pass)
                os << "  ok    " << c.name << "\n";
            else
                os << "  " << std::left << std::setw(6) << (c.pass ? "ok" : "FAIL") << c.name << ": " << c.detail
                   << "\n";
            if (!c.pass && c.witness)
                os << "        witness: " << abbreviate(*c.witness) << "\n";
        }
    }
    os << "\n" << passed << "/" << r.groups.size() << " groups pass\n";
}

} // namespace mk
