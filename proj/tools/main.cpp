#include "ia/canon.hpp"
#include "ia/games.hpp"
#include "ia/interp.hpp"
#include "ia/lang.hpp"
#include "ia/oracle.hpp"
#include "ia/splays.hpp"
#include "ia/translate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace ia;
using nlohmann::json;

namespace {

struct RunConfig {
    int N = 2;
    std::uint64_t fuel = 0;  ///< 0 picks the per-command default
    int max_context = 15;
    std::string format = "text";
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// A file or an inline judgment.
Judgment load(const std::string& arg) {
    std::string src = std::filesystem::exists(arg) ? slurp(arg) : arg;
    Judgment j = parse_judgment(src);
    j.term = elaborate(j.ctx, j.term);
    TypeP got = typecheck(j.ctx, j.term);
    if (!j.type) j.type = got;
    else if (!type_eq(got, j.type))
        throw TypeError("term has type " + to_string(got) + ", declared " + to_string(j.type));
    return j;
}

std::pair<Context, TypeP> load_sequent(const std::string& arg) {
    std::string src = std::filesystem::exists(arg) ? slurp(arg) : arg;
    try {
        return parse_sequent(src);
    } catch (const SyntaxError&) {
        Judgment j = load(arg);
        return {j.ctx, j.type};
    }
}

std::string label_text(const Prearena& p, int m) {
    std::string s = to_string(p.label(m));
    if (p.is_initial(m)) s += " initial";
    return s;
}

int cmd_eval(const RunConfig& cfg, const std::string& file) {
    Judgment j = load(file);
    if (!j.ctx.empty()) throw std::runtime_error("eval needs a closed term");
    EvalResult r = eval(Heap{}, j.term, cfg.fuel ? cfg.fuel : 100000, cfg.N);
    if (cfg.format == "machine") {
        json out = {{"converged", r.converged}, {"fuel_used", r.used}};
        if (r.converged) out["value"] = to_string(r.value);
        std::cout << out.dump() << "\n";
    } else if (r.converged) {
        std::cout << "value " << to_string(r.value) << "\n";
    } else {
        std::cout << "out-of-fuel\n";
    }
    return r.converged ? 0 : 2;
}

int cmd_canon(const RunConfig& cfg, const std::string& file) {
    Judgment j = load(file);
    TermP c = canonicalize(j.ctx, j.term);
    if (cfg.format == "machine")
        std::cout << json{{"canonical", to_string(c)}, {"type", to_string(j.type)}}.dump() << "\n";
    else
        std::cout << to_string(j.ctx) << (j.ctx.empty() ? "" : " ") << "|- " << to_string(c) << " : " << to_string(j.type)
                  << "\n";
    return 0;
}

int cmd_arena(const RunConfig& cfg, const std::string& arg) {
    auto [ctx, ty] = load_sequent(arg);
    Prearena p = prearena_of_judgment(ctx, ty, cfg.N);
    if (cfg.format == "dot") {
        std::cout << to_dot(p);
        return 0;
    }
    if (cfg.format == "machine") {
        json moves = json::array();
        for (int m = 0; m < p.size(); ++m) {
            json en = json::array();
            for (int n = 0; n < p.size(); ++n)
                if (p.enabled_by(n, m)) en.push_back(n);
            moves.push_back({{"name", p.name(m)},
                             {"side", p.side[m] == Side::Left ? "L" : "R"},
                             {"label", to_string(p.label(m))},
                             {"initial", p.is_initial(m)},
                             {"enablers", en}});
        }
        std::cout << json{{"moves", moves}}.dump(2) << "\n";
        return 0;
    }
    for (int m = 0; m < p.size(); ++m) {
        std::cout << m << " " << (p.side[m] == Side::Left ? "L:" : "R:") << p.name(m) << " " << label_text(p, m);
        bool first = true;
        for (int n = 0; n < p.size(); ++n)
            if (p.enabled_by(n, m)) {
                std::cout << (first ? " <- " : ",") << n;
                first = false;
            }
        std::cout << "\n";
    }
    return 0;
}

int cmd_translate(const RunConfig& cfg, const std::string& file) {
    Judgment j = load(file);
    TermP c = canonicalize(j.ctx, j.term);
    ComponentLang l = translate(j.ctx, c, j.type, cfg.N);
    if (cfg.format == "machine") {
        json comps = json::array();
        for (const auto& comp : l.components)
            comps.push_back({{"initial", comp.initial}, {"automaton", lang::to_text(lang::minimize(comp.lang))}});
        std::cout << json{{"canonical", to_string(c)}, {"components", comps}}.dump(2) << "\n";
        return 0;
    }
    for (std::size_t i = 0; i < l.components.size(); ++i) {
        const auto& comp = l.components[i];
        Nfa m = lang::minimize(comp.lang);
        if (cfg.format == "dot") {
            std::cout << lang::to_dot(m, "component" + std::to_string(i));
        } else {
            std::cout << "# initial " << comp.initial << "\n" << lang::to_text(m);
        }
    }
    return 0;
}

int find_context(const RunConfig& cfg, const Judgment& a, const Judgment& b) {
    OracleConfig oc;
    oc.N = cfg.N;
    if (cfg.fuel) oc.fuel = cfg.fuel;
    oc.max_size = cfg.max_context;
    DistinguishResult r = distinguish(a, b, oc);
    if (cfg.format == "machine") {
        json out = {{"examined", r.examined}, {"found", r.witness.has_value()}};
        if (r.witness) {
            out["context"] = r.witness->context.to_string();
            out["size"] = r.witness->context.size;
            out["converges"] = r.witness->first_converges ? "first" : "second";
        }
        std::cout << out.dump() << "\n";
    } else if (r.witness) {
        std::cout << "context: " << r.witness->context.to_string() << "\n"
                  << "converges with the " << (r.witness->first_converges ? "first" : "second") << " term only ("
                  << r.examined << " contexts tried)\n";
    } else {
        std::cout << "no distinguishing context up to size " << cfg.max_context << " (" << r.examined
                  << " contexts tried)\n";
    }
    return r.witness ? 1 : 0;
}

int cmd_check(const RunConfig& cfg, const std::string& fa, const std::string& fb, bool with_context) {
    Judgment a = load(fa), b = load(fb);
    EquivResult r = decide_equiv(a, b, cfg.N);
    if (cfg.format == "machine") {
        json out = {{"equivalent", r.equivalent}};
        if (!r.equivalent) {
            out["initial"] = r.initial;
            out["witness"] = r.witness_text();
            out["accepted_by"] = r.witness_in_first ? "first" : "second";
        }
        std::cout << out.dump() << "\n";
    } else if (r.equivalent) {
        std::cout << "EQUIVALENT\n";
    } else {
        std::cout << "INEQUIVALENT\n"
                  << "witness: " << r.witness_text() << " (play of the " << (r.witness_in_first ? "first" : "second")
                  << " term only)\n";
    }
    if (with_context && !r.equivalent) find_context(cfg, a, b);
    return r.equivalent ? 0 : 1;
}

int cmd_validate(const RunConfig& cfg, const std::string& file, const std::string& arena, bool innocent) {
    auto [ctx, ty] = load_sequent(arena);
    auto p = std::make_shared<const Prearena>(prearena_of_judgment(ctx, ty, cfg.N));
    SPlay s = parse_splay(slurp(file), p);
    std::optional<Violation> v = validate_splay(s, cfg.N);
    if (!v && innocent) v = check_innocent(s);
    if (cfg.format == "machine") {
        json out = {{"valid", !v}};
        if (v) out["violation"] = to_string(*v);
        std::cout << out.dump() << "\n";
    } else {
        std::cout << (v ? "INVALID: " + to_string(*v) : std::string("VALID")) << "\n";
    }
    return v ? 1 : 0;
}

}

int main(int argc, char** argv) {
    CLI::App app{"Equivalence checker for finitary call-by-value Idealized Algol"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--n", cfg.N, "integers range over 0..N")->envname("IACBV_N")->check(CLI::PositiveNumber);
    app.add_option("--fuel", cfg.fuel, "evaluation steps per run (eval: 100000, oracle: 10000)");
    app.add_option("--max-context", cfg.max_context, "largest context size for the oracle");
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "dot", "machine"}));

    std::string a, b, arena;
    bool with_context = false, innocent = false;
    int code = 0;
    std::function<int()> run;

    auto* ev = app.add_subcommand("eval", "run a closed program");
    ev->add_option("file", a)->required();
    ev->callback([&] { run = [&] { return cmd_eval(cfg, a); }; });

    auto* cn = app.add_subcommand("canon", "print the canonical form");
    cn->add_option("file", a)->required();
    cn->callback([&] { run = [&] { return cmd_canon(cfg, a); }; });

    auto* ar = app.add_subcommand("arena", "print the prearena of `ctx |- type` or of a judgment");
    ar->add_option("sequent", a)->required();
    ar->callback([&] { run = [&] { return cmd_arena(cfg, a); }; });

    auto* tr = app.add_subcommand("translate", "print the automata of each initial move");
    tr->add_option("file", a)->required();
    tr->callback([&] { run = [&] { return cmd_translate(cfg, a); }; });

    auto* ck = app.add_subcommand("check", "decide equivalence of two judgments");
    ck->add_option("first", a)->required();
    ck->add_option("second", b)->required();
    ck->add_flag("--find-context", with_context, "also search for a distinguishing context");
    ck->callback([&] { run = [&] { return cmd_check(cfg, a, b, with_context); }; });

    auto* ds = app.add_subcommand("distinguish", "search for a distinguishing context");
    ds->add_option("first", a)->required();
    ds->add_option("second", b)->required();
    ds->callback([&] { run = [&] { return find_context(cfg, load(a), load(b)); }; });

    auto* vp = app.add_subcommand("validate-play", "check an S-play file");
    vp->add_option("file", a)->required();
    vp->add_option("--arena", arena, "`ctx |- type` naming the prearena")->required();
    vp->add_flag("--innocent", innocent, "also require innocence");
    vp->callback([&] { run = [&] { return cmd_validate(cfg, a, arena, innocent); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        code = run();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return code;
}
