// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "prgc/cli.hpp"

#include "prgc/dsl.hpp"
#include "prgc/sieve.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace prgc {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("io", "cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json rational_json(const Rat& q) {
    return json{{"exact", rat_to_string(q)}, {"decimal", rat_to_decimal(q)}};
}

json distribution_json(const Distribution& d) {
    json out = json::object();
    for (const auto& [s, w] : d.entries()) out[d.space()->name(s)] = rat_to_string(w);
    return out;
}

json set_json(const ConvexSet& c) {
    json out;
    switch (c.form()) {
    case ConvexSet::Form::PointSimplex:
    case ConvexSet::Form::Vertices: {
        json verts = json::array();
        c.for_each_vertex([&](const Distribution& d) { verts.push_back(distribution_json(d)); });
        out["vertices"] = std::move(verts);
        break;
    }
    case ConvexSet::Form::Halfspaces: {
        json cs = json::array();
        for (const auto& hc : c.constraints()) {
            json one;
            json coeff = json::object();
            for (int s = 0; s < c.space()->size(); ++s)
                if (hc.coeff[static_cast<std::size_t>(s)] != 0)
                    coeff[c.space()->name(s)] = rat_to_string(hc.coeff[static_cast<std::size_t>(s)]);
            one["coeff"] = std::move(coeff);
            one["rel"] = hc.equality ? "==" : ">=";
            one["rhs"] = rat_to_string(hc.rhs);
            cs.push_back(std::move(one));
        }
        out["constraints"] = std::move(cs);
        break;
    }
    }
    return out;
}

json structure_json(const IpBes& es) {
    json out;
    json events = json::array();
    for (const auto& e : es.events()) events.push_back(e.name);
    out["events"] = std::move(events);
    json conflicts = json::array();
    for (auto [a, b] : es.conflicts()) conflicts.push_back(json::array({a, b}));
    out["conflicts"] = std::move(conflicts);
    json bundles = json::array();
    for (const auto& b : es.bundles())
        bundles.push_back(json{{"sources", b.sources}, {"target", b.target}});
    out["bundles"] = std::move(bundles);
    out["finals"] = es.finals();
    return out;
}

struct Common {
    std::string input;
    std::string format = "json";
    std::size_t cap = 1u << 20;
    std::uint64_t seed = 20240901;
};

ParsedFile load(const Common& c) {
    if (c.input.empty()) fail("io", "this query needs --input FILE");
    return parse_file(read_file(c.input));
}

const Term& program_of(const ParsedFile& f, const std::string& name) {
    auto it = f.decls.programs.find(name);
    if (it == f.decls.programs.end()) fail("syntax", "no program named '" + name + "'");
    return it->second;
}

int run_validate(const Common& c, const std::string& prog, std::ostream& out) {
    ParsedFile f = load(c);
    IpBes es = elaborate(program_of(f, prog), f.decls);
    ValidationReport rep = validate(es);
    TraceSet ts = TraceSet::enumerate(es, c.cap);
    bool feasible = is_feasible(es, ts);
    json j;
    j["query"] = "validate";
    j["program"] = prog;
    j["structure"] = structure_json(es);
    j["valid"] = rep.ok();
    j["problems"] = rep.problems;
    j["feasible"] = feasible;
    out << j.dump(2) << "\n";
    return rep.ok() && feasible ? 0 : 1;
}

int run_traces(const Common& c, const std::string& prog, std::ostream& out) {
    ParsedFile f = load(c);
    IpBes es = elaborate(program_of(f, prog), f.decls);
    TraceSet ts = TraceSet::enumerate(es, c.cap);
    json j;
    j["query"] = "traces";
    j["program"] = prog;
    json traces = json::array();
    for (int i = 0; i < ts.size(); ++i) {
        json names = json::array();
        for (int e : ts.events_of(i)) names.push_back(es.event(e).name);
        traces.push_back(json{{"events", std::move(names)}, {"maximal", ts.node(i).maximal}});
    }
    j["traces"] = std::move(traces);
    j["count"] = ts.size();
    j["maximal_count"] = ts.maximal_nodes().size();
    out << j.dump(2) << "\n";
    return 0;
}

int run_semantics(const Common& c, const std::string& prog, const std::string& state,
                  std::uint64_t mc_trials, std::ostream& out) {
    ParsedFile f = load(c);
    IpBes es = elaborate(program_of(f, prog), f.decls);
    if (!is_feasible(es)) fail("feasibility", "structure is not feasible");
    SemanticsLimits lim{c.cap, c.cap};
    json j;
    j["query"] = "semantics";
    j["program"] = prog;
    json result = json::object();
    auto emit_state = [&](int s) {
        ConvexSet sem = semantics(es, s, lim);
        result[f.decls.space->name(s)] = set_json(sem);
        if (mc_trials > 0) {
            MonteCarloResult mc = monte_carlo_oracle(es, s, mc_trials, c.seed);
            json counts = json::object();
            for (int t = 0; t < f.decls.space->size(); ++t)
                if (mc.counts[static_cast<std::size_t>(t)] > 0)
                    counts[f.decls.space->name(t)] = mc.counts[static_cast<std::size_t>(t)];
            result[f.decls.space->name(s)]["monte_carlo"] =
                json{{"trials", mc.trials}, {"seed", c.seed}, {"counts", std::move(counts)}};
        }
    };
    if (state.empty())
        for (int s = 0; s < f.decls.space->size(); ++s) emit_state(s);
    else
        emit_state(f.decls.space->index_of(state));
    j["result"] = std::move(result);
    out << j.dump(2) << "\n";
    return 0;
}

int run_refine(const Common& c, const std::string& left, const std::string& right,
               std::ostream& out) {
    ParsedFile f = load(c);
    IpBes a = elaborate(program_of(f, left), f.decls);
    IpBes b = elaborate(program_of(f, right), f.decls);
    SemanticsLimits lim{c.cap, c.cap};
    bool holds = refines_seq(a, b, lim);
    json j;
    j["query"] = "refine";
    j["left"] = left;
    j["right"] = right;
    j["refines"] = holds;
    out << j.dump(2) << "\n";
    return holds ? 0 : 1;
}

int run_simulate(const Common& c, const std::string& left, const std::string& right,
                 std::ostream& out) {
    ParsedFile f = load(c);
    IpBes a = elaborate(program_of(f, left), f.decls);
    IpBes b = elaborate(program_of(f, right), f.decls);
    TraceSet ta = TraceSet::enumerate(a, c.cap);
    TraceSet tb = TraceSet::enumerate(b, c.cap);
    auto sim = find_t_simulation(a, b, c.cap);
    json j;
    j["query"] = "simulate";
    j["left"] = left;
    j["right"] = right;
    j["simulated"] = sim.has_value();
    if (sim) {
        json mapping = json::array();
        for (int i = 0; i < ta.size(); ++i) {
            json from = json::array();
            for (int e : ta.events_of(i)) from.push_back(a.event(e).name);
            json to = json::array();
            for (int e : tb.events_of(sim->image[static_cast<std::size_t>(i)]))
                to.push_back(b.event(e).name);
            mapping.push_back(json{{"from", std::move(from)}, {"to", std::move(to)}});
        }
        j["witness"] = std::move(mapping);
        j["verified"] = verify_t_simulation(a, b, *sim);
    } else {
        j["witness"] = nullptr;
    }
    out << j.dump(2) << "\n";
    return sim.has_value() ? 0 : 1;
}

int run_quintuple(const Common& c, const std::string& prog, const std::string& rely_name,
                  const std::string& guar_name, const std::string& pre_name,
                  const std::string& post_name, int depth, std::ostream& out) {
    ParsedFile f = load(c);
    const auto& d = f.decls;
    IpBes es = elaborate(program_of(f, prog), d);
    auto atom = [&](const std::string& n) -> const ConvexProgram& {
        auto it = d.atoms.find(n);
        if (it == d.atoms.end()) fail("syntax", "no atom named '" + n + "'");
        return it->second;
    };
    RelyCondition rely = RelyCondition::from_atomic(atom(rely_name));
    RelyCondition guar =
        guar_name.empty() ? rely : RelyCondition::from_atomic(atom(guar_name));
    ConvexProgram pre = ConvexProgram::skip(d.space);
    if (!pre_name.empty()) {
        auto it = d.guards.find(pre_name);
        if (it == d.guards.end()) fail("syntax", "no guard named '" + pre_name + "'");
        pre = ConvexProgram::test(d.space, it->second);
    }
    auto pit = d.posts.find(post_name);
    if (pit == d.posts.end()) fail("syntax", "no post named '" + post_name + "'");
    Quintuple q{pre, rely, es, guar, PostCondition{{post_to_program(pit->second, d)}}};
    CheckOptions opt;
    opt.rely_law_depth = depth;
    Verdict v = check_quintuple(q, opt);
    json j;
    j["query"] = "quintuple";
    j["component"] = prog;
    j["rely"] = rely_name;
    j["guarantee"] = guar_name.empty() ? rely_name : guar_name;
    j["post"] = post_name;
    j["verdict"] = v.valid ? "VALID" : "INVALID";
    j["refinement_ok"] = v.refinement_ok;
    j["guarantee_ok"] = v.guarantee_ok;
    j["rely_ok"] = v.rely_ok;
    j["detail"] = v.detail;
    try {
        ConvexProgram bound = interleave_rely(rely, es, ComposeLimits{c.cap});
        json bj = json::object();
        for (int s = 0; s < d.space->size(); ++s)
            if (!bound.is_empty_at(s)) bj[d.space->name(s)] = set_json(bound.at(s));
        j["bound"] = std::move(bj);
    } catch (const Error& e) {
        j["bound"] = std::string("not materialized: ") + e.what();
    }
    out << j.dump(2) << "\n";
    return v.valid ? 0 : 1;
}

int run_bound(const std::string& p1, const std::string& p2, std::ostream& out) {
    Rat q1 = rat_from_string(p1);
    Rat q2 = rat_from_string(p2);
    require_probability(q1, "premise bound p1");
    require_probability(q2, "premise bound p2");
    // The raw rule value; deliberately not clamped at 0.
    Rat b = q1 + q2 - 1;
    json j;
    j["query"] = "bound";
    j["p1"] = rational_json(q1);
    j["p2"] = rational_json(q2);
    j["bound"] = rational_json(b);
    out << j.dump(2) << "\n";
    return 0;
}

int run_sieve(const Common& c, int n, const std::string& p_text, bool sweep,
              const std::string& step_text, bool exact_check, std::ostream& out) {
    if (sweep) {
        Rat step = rat_from_string(step_text);
        if (step <= 0 || step > 1) fail("domain", "sweep step must be in (0,1]");
        out << "p,f,g,exact\n";
        for (Rat p(0); p <= 1; p += step) {
            auto [f, g] = sieve_bounds(n, p);
            Rat ex = sieve_exact(n, p);
            out << rat_to_decimal(p) << "," << rat_to_decimal(f) << "," << rat_to_decimal(g)
                << "," << rat_to_decimal(ex) << "\n";
        }
        return 0;
    }
    Rat p = rat_from_string(p_text);
    auto [f, g] = sieve_bounds(n, p);
    Rat ex = sieve_exact(n, p);
    json j;
    j["query"] = "sieve";
    j["n"] = n;
    j["p"] = rat_to_string(p);
    j["f"] = rational_json(f);
    j["g"] = rational_json(g);
    j["exact"] = rational_json(ex);
    if (exact_check) {
        SieveModel m = sieve_generate(n, p);
        Rat sem = sieve_exact_semantics(m, SemanticsLimits{c.cap, c.cap});
        j["semantics_cross_check"] = rational_json(sem);
        j["semantics_agrees"] = sem == ex;
        j["prime_preserving"] = sieve_prime_preserving(m);
    }
    out << j.dump(2) << "\n";
    return 0;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    // --query NAME is an alias for leading subcommand syntax.
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string name;
        if (args[i] == "--query" && i + 1 < args.size()) {
            name = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
        } else if (args[i].rfind("--query=", 0) == 0) {
            name = args[i].substr(8);
            args.erase(args.begin() + static_cast<long>(i));
        }
        if (!name.empty()) {
            args.insert(args.begin(), name);
            break;
        }
    }

    CLI::App app{"probabilistic rely-guarantee verification toolkit"};
    app.require_subcommand(0, 1);

    Common common;
    if (const char* env = std::getenv("PRG_CAP")) common.cap = std::strtoull(env, nullptr, 10);
    app.add_option("--input", common.input, "input declaration file")->envname("PRG_INPUT");
    app.add_option("--format", common.format, "output format: json or csv");
    app.add_option("--cap", common.cap, "enumeration cap (PRG_CAP overrides the default)");
    app.add_option("--seed", common.seed, "seed for stochastic cross-checks");

    std::string prog = "main", left, right, state;
    std::string rely_name, guar_name, pre_name, post_name;
    std::uint64_t mc_trials = 0;
    int depth = 1;
    int sieve_n = 15;
    std::string sieve_p = "9/10", sweep_step = "1/100";
    bool sweep = false, exact_check = false;
    std::string bound_p1, bound_p2;

    auto* v = app.add_subcommand("validate", "structural and feasibility report");
    v->add_option("--program", prog);
    auto* t = app.add_subcommand("traces", "enumerate traces in canonical order");
    t->add_option("--program", prog);
    auto* s = app.add_subcommand("semantics", "scheduler semantics vertex sets");
    s->add_option("--program", prog);
    s->add_option("--state", state);
    s->add_option("--mc-trials", mc_trials, "append a Monte Carlo cross-check");
    auto* r = app.add_subcommand("refine", "sequential refinement of two programs");
    r->add_option("left", left)->required();
    r->add_option("right", right)->required();
    auto* sim = app.add_subcommand("simulate", "t-simulation search between two programs");
    sim->add_option("left", left)->required();
    sim->add_option("right", right)->required();
    auto* qt = app.add_subcommand("quintuple", "check {pre rely} component {guar post}");
    qt->add_option("--component", prog)->required();
    qt->add_option("--rely", rely_name)->required();
    qt->add_option("--guar", guar_name);
    qt->add_option("--pre", pre_name);
    qt->add_option("--post", post_name)->required();
    qt->add_option("--depth", depth, "depth for the bounded rely-law validation");
    auto* b = app.add_subcommand("bound", "two-premise probability bound arithmetic");
    b->add_option("--p1", bound_p1)->required();
    b->add_option("--p2", bound_p2)->required();
    auto* sv = app.add_subcommand("sieve", "faulty sieve case study");
    sv->add_option("--n", sieve_n);
    sv->add_option("--p", sieve_p);
    sv->add_flag("--sweep", sweep, "emit the p,f,g,exact CSV sweep");
    sv->add_option("--step", sweep_step, "sweep grid step");
    sv->add_flag("--exact-check", exact_check,
                 "run the full scheduler-semantics cross-check (n <= 15)");

    for (CLI::App* sc : {v, t, s, r, sim, qt, b, sv}) sc->fallthrough();

    try {
        // CLI11 consumes the vector in reverse order.
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(std::move(rev));
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    try {
        std::string sub;
        for (auto* chosen : app.get_subcommands())
            sub = chosen->get_name();
        if (sub == "validate") return run_validate(common, prog, out);
        if (sub == "traces") return run_traces(common, prog, out);
        if (sub == "semantics") return run_semantics(common, prog, state, mc_trials, out);
        if (sub == "refine") return run_refine(common, left, right, out);
        if (sub == "simulate") return run_simulate(common, left, right, out);
        if (sub == "quintuple")
            return run_quintuple(common, prog, rely_name, guar_name, pre_name, post_name, depth,
                                 out);
        if (sub == "bound") return run_bound(bound_p1, bound_p2, out);
        if (sub == "sieve")
            return run_sieve(common, sieve_n, sieve_p, sweep, sweep_step, exact_check, out);
        err << "no query selected; see --help\n";
        return 2;
    } catch (const Error& e) {
        err << "error [" << e.code() << "] " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error [internal] " << e.what() << "\n";
        return 2;
    }
}

} // namespace prgc
