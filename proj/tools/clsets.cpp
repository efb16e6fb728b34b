#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "clsets/cl.hpp"
#include "clsets/suite.hpp"

using namespace clsets;
using json = nlohmann::ordered_json;

namespace {

// Thrown for bad flags or configs; exits 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string kind;
    int q = 0;
    int nu = 0;
    std::uint64_t seed = 0;
    std::string out;
    bool emit_matrices = false;
    bool timings = false;
};

geometry::SpaceConfig config_of(const Globals& g) {
    if (g.kind.empty() || g.q == 0 || g.nu == 0) throw UsageError("--case, --q and --nu are required");
    try {
        return geometry::make_config(field::form_case_from_string(g.kind), g.q, g.nu);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

std::string s(long v) { return std::to_string(v); }
std::string s(const BigInt& v) { return v.get_str(); }
std::string s(const Rational& v) { return v.get_str(); }

json config_json(const geometry::SpaceConfig& cfg) {
    return {{"case", field::to_string(cfg.kind)}, {"q", s(cfg.q)}, {"nu", s(cfg.nu)}};
}

json vec_json(const geometry::Vec& v) {
    json a = json::array();
    for (auto x : v) a.push_back(s(x));
    return a;
}

json flat_json(const flats::Flat& f) {
    json basis = json::array();
    for (const auto& row : f.direction.basis) basis.push_back(vec_json(row));
    return {{"dimension", s(f.dim())}, {"direction", basis}, {"rep", vec_json(f.rep)}};
}

json ids_json(const std::vector<int>& ids) {
    json a = json::array();
    for (int id : ids) a.push_back(s(id));
    return a;
}

json set_json(const cl::FlatSet& l) { return {{"ids", ids_json(l.ids)}, {"size", s(static_cast<long>(l.size()))}, {"x", s(l.x)}}; }

long parse_id(const json& v) {
    if (v.is_string()) {
        std::size_t used = 0;
        long x = std::stol(v.get<std::string>(), &used);
        if (used != v.get<std::string>().size()) throw UsageError("bad flat id " + v.dump());
        return x;
    }
    if (v.is_number_integer()) return v.get<long>();
    throw UsageError("bad flat id " + v.dump());
}

// Accepts {"ids": [...]}, {"sets": [{"ids": [...]}, ...]}, a bare id list, or a list of either.
std::vector<cl::FlatSet> read_sets(const std::string& path, const flats::MaximalFlats& catalog) {
    json doc;
    try {
        if (path == "-") {
            doc = json::parse(std::cin);
        } else {
            std::ifstream in(path);
            if (!in) throw UsageError("cannot open " + path);
            doc = json::parse(in);
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("input is not JSON: ") + e.what());
    }
    auto one = [&](const json& ids) {
        if (!ids.is_array()) throw UsageError("ids must be an array");
        std::vector<int> v;
        for (const auto& x : ids) v.push_back(static_cast<int>(parse_id(x)));
        try {
            return cl::FlatSet::from_ids(catalog, v);
        } catch (const std::out_of_range&) {
            throw UsageError("flat id out of range");
        }
    };
    std::vector<cl::FlatSet> out;
    std::function<void(const json&)> walk = [&](const json& d) {
        if (d.is_object() && d.contains("sets")) {
            for (const auto& x : d.at("sets")) walk(x);
        } else if (d.is_object() && d.contains("ids")) {
            out.push_back(one(d.at("ids")));
        } else if (d.is_array() && (d.empty() || !d.front().is_structured())) {
            out.push_back(one(d));
        } else if (d.is_array()) {
            for (const auto& x : d) walk(x);
        } else {
            throw UsageError("unrecognized set input");
        }
    };
    walk(doc);
    return out;
}

void emit(const Globals& g, const json& doc) {
    const std::string text = doc.dump(2) + "\n";
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + g.out);
    f << text;
}

std::string millis(double seconds) { return s(std::lround(seconds * 1000)); }

json checks_json(const Report& r) {
    json a = json::array();
    for (const auto& c : r.checks)
        a.push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass}});
    return a;
}

// Subcommands ----------------------------------------------------------------

int space_info(const Globals& g) {
    auto cfg = config_of(g);
    flats::MaximalFlats catalog(cfg);
    json counts = json::object();
    for (int m = 0; m <= cfg.nu; ++m)
        counts["O_" + std::to_string(m)] = s(static_cast<long>(flats::enumerate_flats(cfg, m).size()));
    json doc = {{"config", config_json(cfg)},
                {"e2", s(cfg.e2)},
                {"points", s(cfg.point_count())},
                {"flat_counts", counts},
                {"directions", s(static_cast<long>(catalog.directions().size()))},
                {"cosets_per_direction", s(catalog.cosets_per_direction())},
                {"pencil_size", s(cl::pencil_size(cfg))}};
    doc["rank_M"] = suite::incidence_rank(catalog).checks.front().actual;
    if (auto srg = geometry::strongly_regular_parameters(geometry::point_graph(cfg)))
        doc["point_graph"] = {{"v", s(srg->v)}, {"k", s(srg->k)}, {"lambda", s(srg->lambda)}, {"mu", s(srg->mu)}};
    emit(g, doc);
    return 0;
}

int enumerate_cmd(const Globals& g, int m) {
    auto cfg = config_of(g);
    if (m < 0) m = cfg.nu;
    if (m > cfg.nu) throw UsageError("--m must not exceed nu");
    json list = json::array();
    if (m == cfg.nu) {
        flats::MaximalFlats catalog(cfg);
        for (int id = 0; id < catalog.size(); ++id) {
            json f = flat_json(catalog.flat(id));
            f["id"] = s(id);
            f["direction_index"] = s(catalog.direction_of(id));
            list.push_back(f);
        }
    } else {
        auto all = flats::enumerate_flats(cfg, m);
        for (std::size_t k = 0; k < all.size(); ++k) {
            json f = flat_json(all[k]);
            f["id"] = s(static_cast<long>(k));
            list.push_back(f);
        }
    }
    emit(g, {{"config", config_json(cfg)}, {"m", s(m)}, {"count", s(static_cast<long>(list.size()))}, {"flats", list}});
    return 0;
}

int scheme_eigenmatrix(const Globals& g) {
    auto cfg = config_of(g);
    auto t = scheme::scheme_tables(cfg);
    json index = json::array(), val = json::array(), mult = json::array(), P = json::array(), Q = json::array();
    for (int k = 0; k < t.size(); ++k) {
        index.push_back(t.index[k].str());
        val.push_back(s(t.valencies[k]));
        mult.push_back(s(t.multiplicities[k]));
        json prow = json::array(), qrow = json::array();
        for (int c = 0; c < t.size(); ++c) {
            prow.push_back(s(t.P[k][c]));
            qrow.push_back(s(t.Q[k][c]));
        }
        P.push_back(prow);
        Q.push_back(qrow);
    }
    json doc = {{"config", config_json(cfg)}, {"order", s(t.order)}, {"index", index}, {"valencies", val},
                {"multiplicities", mult},       {"P", P},                  {"Q", Q}};
    if (g.emit_matrices) {
        flats::MaximalFlats catalog(cfg);
        if (catalog.size() > scheme::RelationTable::kBound) throw UsageError("relation table too large to emit");
        scheme::RelationTable rt(catalog);
        json rel = json::array();
        for (int a = 0; a < rt.size(); ++a) {
            json row = json::array();
            for (int b = 0; b < rt.size(); ++b) row.push_back(scheme::index_at(rt.at(a, b)).str());
            rel.push_back(row);
        }
        doc["relations"] = rel;
    }
    emit(g, doc);
    return 0;
}

int spreads_enumerate(const Globals& g, const std::string& type, const std::string& scope, int container) {
    auto cfg = config_of(g);
    flats::MaximalFlats catalog(cfg);
    std::optional<flats::Flat> big;
    if (scope.rfind("flat:", 0) == 0) {
        long id = std::stol(scope.substr(5));
        if (id < 0 || id >= catalog.size()) throw UsageError("flat id out of range");
        if (cfg.nu < 2) throw UsageError("containers need nu >= 2");
        auto all = flats::container_flats(cfg, catalog.flat(static_cast<int>(id)), 1);
        if (container < 0 || container >= static_cast<int>(all.size())) throw UsageError("--container out of range");
        big = all[container];
    } else if (scope != "full") {
        throw UsageError("--scope is full or flat:<id>");
    }
    auto found = spreads::enumerate_spreads(catalog, big);
    json list = json::array();
    for (const auto& sp : found.spreads) {
        const auto t = spreads::to_string(sp.type);
        if (type != "all" && type != t) continue;
        list.push_back({{"type", t}, {"members", ids_json(sp.members)}});
    }
    json doc = {{"config", config_json(cfg)}, {"type", type}};
    doc["scope"] = big ? flat_json(*big) : json("full");
    doc["exhaustive"] = found.exhaustive;
    doc["count"] = s(static_cast<long>(list.size()));
    doc["spreads"] = list;
    emit(g, doc);
    return 0;
}

int cl_test(const Globals& g, const std::string& in, const std::string& method) {
    auto cfg = config_of(g);
    flats::MaximalFlats catalog(cfg);
    cl::Battery b(catalog);
    std::vector<cl::Method> methods;
    if (method == "all") {
        methods = {cl::Method::image, cl::Method::kernel, cl::Method::spectrum, cl::Method::counts, cl::Method::spreads};
    } else {
        try {
            methods = {cl::method_from_string(method)};
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }
    json results = json::array();
    for (const auto& l : read_sets(in, catalog)) {
        json r = set_json(l);
        json verdicts = json::object();
        bool all = true;
        for (auto m : methods) {
            bool v = b.test(l, m);
            verdicts[cl::to_string(m)] = v;
            all = all && v;
        }
        r["verdicts"] = verdicts;
        r["cl"] = all;
        results.push_back(r);
    }
    emit(g, {{"config", config_json(cfg)}, {"method", method}, {"results", results}});
    return 0;
}

int cl_construct(const Globals& g, int pencil, bool complement, bool unite, const std::string& in) {
    auto cfg = config_of(g);
    flats::MaximalFlats catalog(cfg);
    if ((pencil >= 0) + complement + unite != 1) throw UsageError("give exactly one of --pencil, --complement, --union");
    cl::FlatSet out;
    try {
        if (pencil >= 0) {
            if (pencil >= catalog.point_count()) throw UsageError("point out of range");
            out = cl::construct_pencil(catalog, pencil);
        } else {
            if (in.empty()) throw UsageError("--complement and --union read sets from --in");
            auto sets = read_sets(in, catalog);
            if (complement) {
                if (sets.size() != 1) throw UsageError("--complement needs one set");
                out = cl::complement(catalog, sets[0]);
            } else {
                if (sets.size() != 2) throw UsageError("--union needs two sets");
                out = cl::combine(catalog, sets[0], sets[1], cl::CombineMode::disjoint_union);
            }
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    json doc = set_json(out);
    doc["config"] = config_json(cfg);
    emit(g, doc);
    return 0;
}

int cl_profile(const Globals& g, const std::string& in, int i, int s_id) {
    auto cfg = config_of(g);
    flats::MaximalFlats catalog(cfg);
    auto sets = read_sets(in, catalog);
    if (sets.size() != 1) throw UsageError("--in must hold one set");
    const auto& l = sets[0];
    if (i < 1 || i >= cfg.nu) throw UsageError("--i must lie in [1, nu)");
    std::vector<int> where = s_id >= 0 ? std::vector<int>{s_id} : l.ids;
    json list = json::array();
    for (int sid : where) {
        if (sid >= catalog.size() || !l.contains(sid)) throw UsageError("--s must be a member of the set");
        auto d = cl::degree_identity(catalog, l, sid, i);
        auto p = cl::pencil_distribution(catalog, l, sid, i);
        json xt = json::array();
        for (const auto& r : d.containers) xt.push_back(s(r.x_f));
        json hist = json::object();
        for (auto [theta, count] : p.histogram) hist[s(theta)] = s(count);
        bool restrictions_ok = true;
        for (const auto& r : d.containers) restrictions_ok = restrictions_ok && r.in_image && r.integral && r.within_bounds;
        json entry = {{"s", s(sid)},
                      {"containers", s(static_cast<long>(d.containers.size()))},
                      {"x_t", xt},
                      {"restrictions_cl", restrictions_ok},
                      {"degree_identity", {{"sum_x", s(d.sum_x)}, {"rhs", s(d.rhs)}, {"holds", d.holds}}},
                      {"histogram", hist},
                      {"evaluated", p.evaluated}};
        if (p.evaluated) {
            entry["count_identity"] = p.count_identity;
            entry["weighted_identity"] = p.weighted_identity;
            entry["bound"] = p.bound_i;
            entry["branch"] = p.branch == 'e' ? "equality" : "strict";
            entry["branch_consistent"] = p.branch_consistent;
            if (p.branch == 'l') {
                entry["ell"] = s(p.ell);
                entry["ell_below_limit"] = p.ell_below_limit;
            }
        }
        list.push_back(entry);
    }
    emit(g, {{"config", config_json(cfg)}, {"set", set_json(l)}, {"i", s(i)}, {"profiles", list}});
    return 0;
}

int cl_search(const Globals& g, long x, const std::string& strategy) {
    auto cfg = config_of(g);
    flats::MaximalFlats catalog(cfg);
    cl::Battery b(catalog);
    std::vector<cl::FlatSet> found;
    try {
        found = cl::search_cl(b, x, cl::strategy_from_string(strategy), g.seed);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    } catch (const std::length_error& e) {
        throw UsageError(e.what());
    }
    json list = json::array();
    for (const auto& l : found) list.push_back(set_json(l));
    emit(g, {{"config", config_json(cfg)},
             {"x", s(x)},
             {"strategy", strategy},
             {"seed", s(static_cast<long>(g.seed))},
             {"count", s(static_cast<long>(found.size()))},
             {"sets", list}});
    return 0;
}

int verify(const Globals& g, const std::string& name) {
    std::vector<suite::Section> sections;
    json doc = json::object();
    if (name == "paper") {
        auto cfg = config_of(g);
        doc["config"] = config_json(cfg);
        sections = suite::paper_suite(cfg, g.seed);
    } else if (name == "valuations" || name == "uniqueness") {
        auto start = std::chrono::steady_clock::now();
        Report r = name == "valuations" ? suite::valuation_grid() : suite::uniqueness_grid();
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        sections.push_back({name, r, dt.count()});
    } else {
        throw UsageError("--suite is paper, valuations or uniqueness");
    }
    doc["suite"] = name;
    doc["seed"] = s(static_cast<long>(g.seed));
    json list = json::array();
    bool all = true;
    for (const auto& sec : sections) {
        json j = {{"name", sec.name}, {"pass", sec.report.passed()}, {"checks", checks_json(sec.report)}};
        if (g.timings) j["wall_ms"] = millis(sec.seconds);
        all = all && sec.report.passed();
        list.push_back(j);
    }
    doc["sections"] = list;
    doc["pass"] = all;
    emit(g, doc);
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cameron-Liebler sets of maximal totally isotropic flats"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--case", g.kind, "symplectic, unitary or orthogonal");
    app.add_option("--q", g.q, "field order");
    app.add_option("--nu", g.nu, "Witt index");
    app.add_option("--seed", g.seed, "seed for randomized checks")->capture_default_str();
    app.add_option("--out", g.out, "write JSON here instead of standard output");
    app.add_flag("--emit-matrices", g.emit_matrices, "include large tables");
    app.add_flag("--timings", g.timings, "add wall-clock milliseconds per section");

    std::function<int()> action;

    auto* space = app.add_subcommand("space", "space construction")->require_subcommand(1)->fallthrough();
    space->add_subcommand("info", "counts, rank and point graph")->fallthrough()->callback([&] {
        action = [&] { return space_info(g); };
    });

    int m = -1;
    auto* en = app.add_subcommand("enumerate", "list flats of one dimension")->fallthrough();
    en->add_option("--m", m, "flat dimension (default nu)");
    en->callback([&] { action = [&] { return enumerate_cmd(g, m); }; });

    auto* sch = app.add_subcommand("scheme", "association scheme tables")->require_subcommand(1)->fallthrough();
    sch->add_subcommand("eigenmatrix", "P and Q")->fallthrough()->callback([&] {
        action = [&] { return scheme_eigenmatrix(g); };
    });

    std::string sp_type = "all", sp_scope = "full";
    int sp_container = 0;
    auto* sp = app.add_subcommand("spreads", "spread tools")->require_subcommand(1)->fallthrough();
    auto* sp_en = sp->add_subcommand("enumerate", "list spreads")->fallthrough();
    sp_en->add_option("--type", sp_type, "I, II or all")->check(CLI::IsMember({"I", "II", "all"}));
    sp_en->add_option("--scope", sp_scope, "full or flat:<id>");
    sp_en->add_option("--container", sp_container, "which container of the flat, for flat scopes");
    sp_en->callback([&] { action = [&] { return spreads_enumerate(g, sp_type, sp_scope, sp_container); }; });

    auto* clc = app.add_subcommand("cl", "Cameron-Liebler sets")->require_subcommand(1)->fallthrough();
    std::string in, method = "auto", strategy = "pencil_closure";
    int pencil = -1, prof_i = 1, prof_s = -1;
    bool comp = false, uni = false;
    long x = 1;
    auto* t = clc->add_subcommand("test", "membership tests")->fallthrough();
    t->add_option("--in", in, "JSON file of sets, or - for standard input")->required();
    t->add_option("--method", method, "image, kernel, spectrum, counts, spreads, auto or all");
    t->callback([&] { action = [&] { return cl_test(g, in, method); }; });
    auto* c = clc->add_subcommand("construct", "pencils and combinations")->fallthrough();
    c->add_option("--pencil", pencil, "point index");
    c->add_flag("--complement", comp, "complement of the set in --in");
    c->add_flag("--union", uni, "disjoint union of the two sets in --in");
    c->add_option("--in", in, "JSON file of sets, or -");
    c->callback([&] { action = [&] { return cl_construct(g, pencil, comp, uni, in); }; });
    auto* p = clc->add_subcommand("profile", "container restrictions and pencil distribution")->fallthrough();
    p->add_option("--in,--set", in, "JSON file holding one set, or -")->required();
    p->add_option("--i", prof_i, "container index i");
    p->add_option("--s", prof_s, "one member flat (default: every member)");
    p->callback([&] { action = [&] { return cl_profile(g, in, prof_i, prof_s); }; });
    auto* se = clc->add_subcommand("search", "find sets with a given parameter")->fallthrough();
    se->add_option("--x", x, "parameter")->required();
    se->add_option("--strategy", strategy, "exhaustive, pencil_closure or seeded_random");
    se->callback([&] { action = [&] { return cl_search(g, x, strategy); }; });

    std::string suite_name = "paper";
    auto* v = app.add_subcommand("verify", "run a check suite")->fallthrough();
    v->add_option("--suite", suite_name, "paper (per space), valuations or uniqueness");
    v->callback([&] { action = [&] { return verify(g, suite_name); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        return action ? action() : 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
