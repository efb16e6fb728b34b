// Acceptance run: one PASS/FAIL line per criterion over the standard grid.
//
// Exit status is 0 exactly when the failing criteria are the known-red set
// below; an unexpected failure or an unexpected pass both exit 1.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "clsets/suite.hpp"

using namespace clsets;

namespace {

constexpr double kCountsBudgetSeconds = 60;
constexpr double kRankBudgetSeconds = 120;
constexpr double kClassificationBudgetSeconds = 60;
constexpr std::uint64_t kSeed = 0;
constexpr int kShownFailures = 12;

// The closed-form valuation table disagrees with direct evaluation of the
// eigenvalues; see the README.
const std::set<int> kKnownRed = {7};

struct Space {
    suite::GridPoint at;
    geometry::SpaceConfig cfg;
    flats::MaximalFlats catalog;
    cl::Battery battery;
    explicit Space(const suite::GridPoint& p)
        : at(p), cfg(geometry::make_config(p.kind, p.q, p.nu)), catalog(cfg), battery(catalog) {}
    bool dense() const { return catalog.size() <= suite::kDenseFlatBound; }
};

std::vector<std::unique_ptr<Space>> grid;

Report over_grid(const std::function<bool(const Space&)>& keep, const std::function<Report(const Space&)>& run) {
    Report r;
    for (const auto& s : grid)
        if (keep(*s)) r.merge(s->at.str() + ": ", run(*s));
    return r;
}

bool everywhere(const Space&) { return true; }
bool dense(const Space& s) { return s.dense(); }

void add_budget(Report& r, double seconds, double budget) {
    r.add_bool("finished within " + std::to_string(static_cast<int>(budget)) + " s", seconds < budget);
}

struct Capture {
    int status = -1;
    std::string out;
};

Capture run_command(const std::string& cmd) {
    Capture c;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return c;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) c.out.append(buf.data(), got);
    c.status = pclose(pipe);
    return c;
}

Report determinism() {
    Report r;
    const std::string cli = CLSETS_CLI_PATH;
    for (const char* flags : {"--case symplectic --q 2 --nu 2", "--case orthogonal --q 3 --nu 1"}) {
        const std::string cmd = "\"" + cli + "\" verify --suite paper " + flags + " --seed 0";
        auto a = run_command(cmd);
        auto b = run_command(cmd);
        r.add(std::string(flags) + ": exit status", "0", std::to_string(a.status));
        r.add_bool(std::string(flags) + ": report is nonempty", !a.out.empty());
        r.add_bool(std::string(flags) + ": reports byte-identical", a.out == b.out && a.status == b.status);
    }
    return r;
}

}  // namespace

int main() {
    for (const auto& p : suite::standard_grid()) grid.push_back(std::make_unique<Space>(p));

    struct Criterion {
        int id;
        std::string title;
        std::function<Report(double&)> run;
    };
    auto timed = [](auto&& body) {
        return [body](double& seconds) {
            auto start = std::chrono::steady_clock::now();
            Report r = body();
            seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return r;
        };
    };

    std::vector<Criterion> criteria = {
        {1, "flat counts",
         [](double& seconds) {
             auto start = std::chrono::steady_clock::now();
             Report r = over_grid(everywhere, [](const Space& s) { return suite::flat_counts(s.cfg); });
             seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
             add_budget(r, seconds, kCountsBudgetSeconds);
             return r;
         }},
        {2, "incidence rank",
         [](double& seconds) {
             auto start = std::chrono::steady_clock::now();
             Report r = over_grid(everywhere, [](const Space& s) { return suite::incidence_rank(s.catalog); });
             seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
             add_budget(r, seconds, kRankBudgetSeconds);
             return r;
         }},
        {3, "gram identity", timed([] { return over_grid(dense, [](const Space& s) { return suite::gram_identity(s.catalog); }); })},
        {4, "point graph", timed([] {
             Report r = over_grid(everywhere, [](const Space& s) { return suite::point_graph_check(s.cfg); });
             // Pinned spot values.
             auto spot = [&](field::FormCase kind, int q, const std::string& want) {
                 for (const auto& s : grid)
                     if (s->at.kind == kind && s->at.q == q && s->at.nu == 1)
                         for (const auto& c : suite::point_graph_check(s->cfg).checks) r.add(s->at.str() + ": spot", want, c.actual);
             };
             spot(field::FormCase::unitary, 4, "(16,9,4,6)");
             spot(field::FormCase::orthogonal, 3, "(9,4,1,2)");
             return r;
         })},
        {5, "scheme tables and idempotents", timed([] { return over_grid(everywhere, [](const Space& s) { return suite::scheme_check(s.battery); }); })},
        {6, "valencies", timed([] { return over_grid(everywhere, [](const Space& s) { return suite::valency_check(s.battery); }); })},
        {7, "valuations", timed([] { return suite::valuation_grid(); })},
        {8, "column uniqueness", timed([] { return suite::uniqueness_grid(); })},
        {9, "equivalent characterizations", timed([] {
             return over_grid(dense, [](const Space& s) { return suite::equivalence_check(s.battery, kSeed); });
         })},
        {10, "count table", timed([] { return over_grid(dense, [](const Space& s) { return suite::count_table_check(s.battery); }); })},
        {11, "classification at nu = 1",
         [](double& seconds) {
             auto start = std::chrono::steady_clock::now();
             Report r = over_grid([](const Space& s) { return s.at.nu == 1; },
                                  [](const Space& s) { return suite::nu1_check(s.battery); });
             seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
             add_budget(r, seconds, kClassificationBudgetSeconds);
             return r;
         }},
        {12, "spread stack ranks", timed([] { return over_grid(everywhere, [](const Space& s) { return suite::span_check(s.battery); }); })},
        {13, "containers and pencil profiles", timed([] {
             return over_grid(
                 [](const Space& s) {
                     return (s.at.kind == field::FormCase::symplectic && s.at.q == 2 && s.at.nu == 2) ||
                            (s.at.kind == field::FormCase::orthogonal && s.at.q == 3 && s.at.nu == 2);
                 },
                 [](const Space& s) { return suite::container_check(s.battery); });
         })},
        {14, "determinism", timed([] { return determinism(); })},
    };

    std::set<int> red;
    for (const auto& c : criteria) {
        double seconds = 0;
        Report r;
        try {
            r = c.run(seconds);
        } catch (const std::exception& e) {
            r.add("completed without error", "no exception", e.what());
        }
        const auto failed = r.failures();
        if (!failed.empty() || r.checks.empty()) red.insert(c.id);
        char line[256];
        std::snprintf(line, sizeof line, "%s %2d %-32s %5zu checks, %4zu failed, %7.1f s",
                      failed.empty() && !r.checks.empty() ? "PASS" : "FAIL", c.id, c.title.c_str(), r.checks.size(),
                      failed.size(), seconds);
        std::cout << line << (kKnownRed.count(c.id) ? "  (known red)" : "") << "\n";
        for (std::size_t k = 0; k < failed.size() && k < static_cast<std::size_t>(kShownFailures); ++k)
            std::cout << "       " << failed[k].name << ": expected " << failed[k].expected << ", got " << failed[k].actual
                      << "\n";
        if (failed.size() > static_cast<std::size_t>(kShownFailures))
            std::cout << "       ... " << failed.size() - kShownFailures << " more\n";
        std::cout.flush();
    }

    std::cout << criteria.size() - red.size() << "/" << criteria.size() << " criteria pass\n";
    if (red != kKnownRed) {
        std::cout << "failing set differs from the known-red set\n";
        return 1;
    }
    return 0;
}
