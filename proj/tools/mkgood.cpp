// mkgood: verify goodness of the extensions of C_2 by C_{2^{n+1}}^2 in
// Morava K-theory at concrete (s, n).
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 usage or guard error.

#include "mk/error.hpp"
#include "mk/fgl.hpp"
#include "mk/report.hpp"
#include "mk/verifier.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Config {
    int s = 2;
    int n = 1;
    std::vector<std::string> groups;
    std::vector<std::string> checks;
    std::string mode = "auto";
    std::string format = "text";
    std::string out;
    bool force = false;
    bool verbose = false;
    std::uint64_t seed = 1;
    std::size_t samples = 1000;
    std::string method = "all";
    std::size_t bound = 0;
    std::vector<std::int64_t> m;
};

std::size_t max_dim(bool force)
{
    std::size_t guard = mk::kDefaultMaxDim;
    if (const char* env = std::getenv("MK_MAX_DIM")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v == 0)
            throw mk::ParameterError(std::string("MK_MAX_DIM is not a positive integer: ") + env);
        guard = v;
    }
    if (force)
        guard = std::max(guard, mk::kForcedMaxDim);
    return guard;
}

std::vector<int> parse_groups(const std::vector<std::string>& names)
{
    std::vector<int> ids;
    for (const auto& g : names)
        ids.push_back(mk::parse_group_id(g));
    return ids;
}

// Writes to --out when given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw mk::ParameterError("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

int run_verify(const Config& c)
{
    const mk::RingParams p = mk::make_ring(c.s, c.n, max_dim(c.force));
    mk::VerifyOptions opts;
    opts.groups = parse_groups(c.groups);
    if (!c.checks.empty()) {
        opts.checks = 0;
        for (const auto& name : c.checks)
            opts.checks |= mk::parse_check(name);
    }
    opts.mode = c.mode == "paper" ? mk::GoodMode::listed : mk::GoodMode::automatic;
    opts.seed = c.seed;
    opts.samples = c.samples;

    const mk::RunReport rep = mk::verify_all(p, opts);
    Sink sink(c.out);
    if (c.format == "json")
        sink.stream() << mk::to_json(rep).dump(2) << "\n";
    else
        mk::write_text(sink.stream(), rep, c.verbose);
    return rep.pass() ? kExitPass : kExitFail;
}

int run_fgl(const Config& c)
{
    if (c.s < 1)
        throw mk::ParameterError("s must be at least 1");
    const std::size_t bound = c.bound ? c.bound : mk::default_approx_bound(c.s);
    if (bound > 4096)
        throw mk::InfeasibleSize("--bound above 4096");
    const mk::BiSeries F = mk::honda_fgl(c.s, bound, bound);
    Sink sink(c.out);
    auto& os = sink.stream();
    bool ok = true;
    if (c.format == "json") {
        nlohmann::ordered_json j;
        j["s"] = c.s;
        j["bound"] = bound;
        nlohmann::ordered_json terms = nlohmann::ordered_json::array();
        for (const auto& [a, b] : F.terms())
            terms.push_back({a, b});
        j["terms"] = std::move(terms);
        for (std::int64_t m : c.m)
            j["m_series"][std::to_string(m)] = mk::m_series(F, m, bound).exponents();
        j["inverse"] = mk::formal_inverse(F, bound).exponents();
        const auto rep = mk::check_fgl_approximations(F, c.s);
        j["approximations"] = {{"leading", rep.eq_leading.pass}, {"next", rep.eq_phi.pass}};
        ok = rep.pass();
        os << j.dump(2) << "\n";
        return ok ? kExitPass : kExitFail;
    }
    os << "# F(x,y) mod 2, s=" << c.s << ", degrees < " << bound << " in each variable: exponents a b of x^a y^b\n";
    for (const auto& [a, b] : F.terms())
        os << a << " " << b << "\n";
    auto exps = [&](const char* label, const mk::BitPoly& f) {
        os << "# " << label << ":";
        for (auto e : f.exponents())
            os << " " << e;
        os << "\n";
    };
    for (std::int64_t m : c.m)
        exps(("[" + std::to_string(m) + "](x) exponents").c_str(), mk::m_series(F, m, bound));
    exps("inverse exponents", mk::formal_inverse(F, bound));
    const auto rep = mk::check_fgl_approximations(F, c.s);
    os << "# leading approximation: " << (rep.eq_leading.pass ? "pass" : "fail") << "\n";
    os << "# second approximation: " << (rep.eq_phi.pass ? "pass" : "fail") << "\n";
    return rep.pass() ? kExitPass : kExitFail;
}

int run_chi(const Config& c)
{
    const bool want_formula = c.method == "all" || c.method == "formula";
    const bool want_coh = c.method == "all" || c.method == "cohomology";
    const bool want_brute = c.method == "all" || c.method == "bruteforce";
    if (c.s < 2 || c.n < 1)
        throw mk::ParameterError("need s >= 2 and n >= 1");
    std::vector<int> ids = parse_groups(c.groups);
    if (ids.empty())
        for (int id = 1; id <= mk::kGroupCount; ++id)
            ids.push_back(id);
    std::optional<mk::RingParams> p;
    std::optional<mk::BiSeries> F;
    if (want_coh) {
        p = mk::make_ring(c.s, c.n, max_dim(c.force));
        F = mk::ring_fgl(*p);
    }
    Sink sink(c.out);
    auto& os = sink.stream();
    nlohmann::ordered_json all = nlohmann::ordered_json::array();
    bool ok = true;
    for (int id : ids) {
        const mk::GroupSpec g = mk::group_spec(id, c.n);
        std::vector<std::pair<const char*, std::uint64_t>> values;
        if (want_formula)
            values.emplace_back("formula", mk::chi_formula(id, c.s, c.n));
        if (want_coh)
            values.emplace_back("cohomology", mk::chi_cohomology(mk::GroupContext(g, *p, *F)));
        if (want_brute)
            values.emplace_back("bruteforce", mk::chi_bruteforce(g, c.s));
        for (const auto& v : values)
            ok = ok && v.second == values.front().second;
        if (c.format == "json") {
            nlohmann::ordered_json j{{"group", g.name()}, {"s", c.s}, {"n", c.n}};
            for (const auto& [name, value] : values)
                j[name] = value;
            all.push_back(std::move(j));
        } else {
            for (const auto& [name, value] : values)
                os << g.name() << " " << name << " " << value << "\n";
        }
    }
    if (c.format == "json")
        os << all.dump(2) << "\n";
    return ok ? kExitPass : kExitFail;
}

int run_list(const Config& c)
{
    if (c.n < 1)
        throw mk::ParameterError("n must be at least 1");
    Sink sink(c.out);
    auto& os = sink.stream();
    if (c.format == "json") {
        nlohmann::ordered_json all = nlohmann::ordered_json::array();
        for (const auto& g : mk::catalog(c.n))
            all.push_back({{"group", g.name()}, {"i", g.i}, {"j", g.j}, {"k", g.k}, {"l", g.l},
                           {"order", g.order()}});
        os << all.dump(2) << "\n";
    } else {
        for (const auto& g : mk::catalog(c.n))
            os << mk::describe(g) << "\n";
    }
    return kExitPass;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Checks goodness of C_2 extensions of C_{2^{n+1}}^2 in Morava K-theory"};
    app.require_subcommand(1);
    Config c;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--out", c.out, "Write the report to this file");
    };

    auto* verify = app.add_subcommand("verify", "Run the verification pipeline");
    verify->add_option("--s", c.s, "Morava height (s >= 2)");
    verify->add_option("--n", c.n, "Cyclic factors have order 2^{n+1} (n >= 1)");
    verify->add_option("--group", c.groups, "Groups to check, e.g. G3 (default all)")->delimiter(',');
    verify->add_option("--checks", c.checks, "involution,basis,criterion,congruences,tprime,goodness,chi")
        ->delimiter(',');
    verify->add_option("--good-mode", c.mode, "Generator list for goodness")->check(CLI::IsMember({"auto", "paper"}));
    verify->add_option("--seed", c.seed, "Seed for randomized samples");
    verify->add_option("--samples", c.samples, "Random samples per sampled check");
    verify->add_flag("--force", c.force, "Raise the ring dimension guard to 16384");
    verify->add_flag("--verbose", c.verbose, "Show details of passing checks");
    add_common(verify);

    auto* fgl = app.add_subcommand("fgl", "Print the mod-2 Honda formal group law");
    fgl->add_option("--s", c.s, "Height");
    fgl->add_option("--bound", c.bound, "Truncation degree in each variable");
    fgl->add_option("--m", c.m, "Also print [m](x) for these m")->delimiter(',');
    add_common(fgl);

    auto* chi = app.add_subcommand("chi", "Euler characteristic of BG");
    chi->add_option("--s", c.s, "Height (s >= 2)");
    chi->add_option("--n", c.n, "n >= 1");
    chi->add_option("--group", c.groups, "Groups (default all)")->delimiter(',');
    chi->add_option("--method", c.method, "Which computation")
        ->check(CLI::IsMember({"formula", "cohomology", "bruteforce", "all"}));
    chi->add_flag("--force", c.force, "Raise the ring dimension guard to 16384");
    add_common(chi);

    auto* list = app.add_subcommand("list-groups", "Print the group catalog");
    list->add_option("--n", c.n, "n >= 1");
    add_common(list);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*verify)
            return run_verify(c);
        if (*fgl)
            return run_fgl(c);
        if (*chi)
            return run_chi(c);
        return run_list(c);
    } catch (const mk::ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const mk::InfeasibleSize& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
}
