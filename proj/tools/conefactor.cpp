// conefactor: command-line front end for the decision procedures.
// Exit codes: 0 true/feasible, 1 false/infeasible, 2 input error, 3 inconclusive (heuristic).

#include <CLI11.hpp>
#include <chrono>
#include <iostream>

#include "conefactor/io.hpp"
#include "criteria.hpp"

using namespace conefactor;

namespace {

struct Row {
    std::string job, status, value;
    double ms = 0;
};

struct JobResult {
    int code = 0;
    json report;
    std::vector<Row> rows;
};

struct Options {
    std::string input, target, behavior, format = "json", construction, t, source, middle = "3,1", reproduce_target = "all";
    std::uint64_t seed = 1;
    std::size_t iters = 200, seeds = 20, n = 1;
};

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
JobResult timed(const std::string& job, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    JobResult r = f();
    double ms = elapsed_ms(t0);
    r.report["job"] = job;
    r.report["runtime_ms"] = static_cast<long>(ms);
    if (r.rows.empty()) r.rows.push_back({job, r.report.value("status", ""), r.report.contains("value") ? r.report["value"].dump() : "", ms});
    for (auto& row : r.rows)
        if (row.ms == 0) row.ms = ms;
    return r;
}

std::string unquote(const std::string& s) {
    return s.size() >= 2 && s.front() == '"' && s.back() == '"' ? s.substr(1, s.size() - 2) : s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) out.push_back(part);
    return out;
}

std::size_t parse_count(const std::string& s, const std::string& flag) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(flag, "expected a positive integer, got '" + s + "'");
    return std::stoul(s);
}

PolyShape parse_shape(const std::string& s, const std::string& flag) {
    auto p = split(s, ',');
    if (p.size() != 2) throw ParseError(flag, "expected 'k,g'");
    return {parse_count(p[0], flag), parse_count(p[1], flag)};
}

Rational parse_flag_rational(const std::string& s, const std::string& flag) {
    try {
        return parse_rational(s);
    } catch (const std::exception& e) {
        throw ParseError(flag, e.what());
    }
}

bool is_behavior_input(const std::string& input) {
    if (input == "pr-box") return true;
    if (input == "cube-multimeter" || input == "octa-faces") return false;
    json j = load_json_input(input);
    return j.is_object() && j.contains("parties");
}

// ---------------------------------------------------------------------------

JobResult run_compat(const Options& o) {
    Multimeter M = load_multimeter(o.input);
    auto J = is_compatible(M);
    JobResult r;
    r.code = J ? 0 : 1;
    r.report = {{"status", J ? "compatible" : "incompatible"}, {"value", J.has_value()}};
    if (J) {
        r.report["joint_measurement"] = to_json(*J);
        r.report["verified"] = verify_joint_measurement(M, *J);
    }
    return r;
}

JobResult run_robustness(const Options& o) {
    Multimeter M = load_multimeter(o.input);
    auto res = compatibility_robustness_full(M);
    JobResult r;
    r.report = {{"status", "decided"}, {"value", to_string(res.value)}, {"noise", to_json(res.noise)}, {"joint_measurement", to_json(res.joint)}};
    return r;
}

JobResult run_simulate(const Options& o) {
    if (o.target.empty()) throw ParseError("--target", "simulate needs --target");
    Multimeter N = load_multimeter(o.input), M = load_multimeter(o.target);
    auto d = classical_simulates(N, M);
    JobResult r;
    r.code = d ? 0 : 1;
    r.report = {{"status", d ? "simulable" : "not_simulable"}, {"value", d.has_value()}};
    if (d) {
        r.report["simulation"] = to_json(*d);
        r.report["verified"] = apply_simulation(*d, N).effects == M.effects;
    }
    return r;
}

JobResult run_steer(const Options& o) {
    Assemblage A = load_assemblage(o.input);
    auto m = has_lhs(A);
    auto rob = steering_robustness_full(A);
    JobResult r;
    r.code = m ? 0 : 1;
    r.report = {{"status", m ? "lhs" : "steerable"}, {"value", m.has_value()}, {"robustness", to_string(rob.value)}};
    if (m) {
        r.report["lhs_model"] = to_json(*m);
        r.report["verified"] = verify_lhs(A, *m);
    }
    return r;
}

JobResult run_bell_lhv(const Options& o) {
    Behavior P = load_behavior(o.input);
    auto m = has_lhv(P);
    JobResult r;
    r.code = m ? 0 : 1;
    r.report = {{"status", m ? "local" : "nonlocal"}, {"value", m.has_value()}};
    if (m) {
        r.report["lhv_model"] = to_json(*m);
        r.report["verified"] = verify_lhv(P, *m);
    }
    return r;
}

JobResult run_bell_chsh(const Options& o) {
    std::string in = o.behavior.empty() ? o.input : o.behavior;
    if (in.empty()) throw ParseError("--behavior", "bell chsh needs --behavior");
    Behavior P = load_behavior(in);
    json vals = json::array();
    Rational mn = 0;
    bool first = true;
    for (const auto& W : chsh_family()) {
        Rational v = evaluate_witness(W, P);
        vals.push_back({{"member", W.name}, {"value", to_string(v)}});
        if (first || v < mn) mn = v;
        first = false;
    }
    JobResult r;
    r.code = mn >= 0 ? 0 : 1;
    r.report = {{"status", mn >= 0 ? "no_violation" : "violation"}, {"value", to_string(mn)}, {"members", vals}};
    return r;
}

JobResult run_extend(const Options& o) {
    JobResult r;
    if (is_behavior_input(o.input)) {
        Behavior P = load_behavior(o.input);
        auto ext = behavior_extension(P, o.n);
        bool gn = gn_lhv_ns(P, o.n);
        r.code = ext ? 0 : 1;
        r.report = {{"status", ext ? "extendable" : "not_extendable"}, {"value", ext.has_value()}, {"n", o.n}, {"gn_lhv", gn}};
        if (ext) r.report["verified"] = verify_extension(*ext, all_effects({P.ks[1], P.gs[1]}), {P.ks[0], P.gs[0]}, o.n, ns_encode(P));
    } else {
        Multimeter M = load_multimeter(o.input);
        auto ext = multimeter_extension(M, o.n);
        auto fam = nwise_compatible_ns(M, o.n);
        r.code = ext ? 0 : 1;
        r.report = {{"status", ext ? "extendable" : "not_extendable"}, {"value", ext.has_value()}, {"n", o.n},
                    {"nwise_compatible", fam.has_value()}};
        if (ext) r.report["verified"] = verify_extension(*ext, M.space.cone.generators(), M.shape(), o.n, multimeter_tensor(M));
    }
    return r;
}

FactorizationCertificate build_construction(const std::string& name, const Rational& t) {
    if (name == "3outcome") return three_outcome_construction(t);
    if (name == "2binary") return two_binary_construction(t);
    if (name == "joint4") return joint4_construction(t);
    if (name == "tilted") return tilted_triangle_construction(t);
    throw ParseError("--construction", "unknown construction '" + name + "' (3outcome, 2binary, joint4, tilted)");
}

JobResult run_factorize(const Options& o) {
    JobResult r;
    if (!o.construction.empty()) {
        if (o.t.empty()) throw ParseError("--t", "a construction needs --t");
        Rational t = parse_flag_rational(o.t, "--t");
        try {
            auto c = build_construction(o.construction, t);
            bool ok = verify_factorization(c);
            bool inc = c.middle.dim >= c.target.dim &&
                       verify_inclusion_certificate(inclusion_from_factorization(c), c.source, c.middle, c.target);
            r.code = ok ? 0 : 1;
            r.report = {{"status", ok ? "feasible" : "invalid"}, {"value", ok}, {"t", to_string(t)}, {"inclusion_verified", inc},
                        {"certificate", to_json(c)}};
        } catch (const Error& e) {
            if (e.code() != "construction_infeasible") throw;
            r.code = 1;
            r.report = {{"status", "infeasible"}, {"value", false}, {"t", to_string(t)}, {"reason", e.what()}};
        }
        return r;
    }
    if (o.source.empty()) throw ParseError("--source", "factorize needs --construction or --source k,g,t");
    auto p = split(o.source, ',');
    if (p.size() != 3) throw ParseError("--source", "expected 'k,g,t'");
    PolyShape shape{parse_count(p[0], "--source"), parse_count(p[1], "--source")};
    Rational t = parse_flag_rational(p[2], "--source");
    PolyShape mid = parse_shape(o.middle, "--middle");
    json tried = json::array();
    for (std::uint64_t s = o.seed; s < o.seed + o.seeds; ++s) {
        auto res = seesaw_search(shape, RatVec(shape.g, t), mid, o.iters, s);
        tried.push_back({{"seed", s}, {"iterations", res.iterations}, {"residual", to_string(res.residual)}});
        if (res.certificate) {
            r.report = {{"status", "feasible"}, {"feasible", true}, {"value", true}, {"tag", SeesawResult::tag},
                        {"certificate", to_json(*res.certificate)}, {"verified", verify_factorization(*res.certificate)},
                        {"seeds_tried", tried}};
            return r;
        }
    }
    r.code = 3;
    r.report = {{"status", "inconclusive"}, {"feasible", nullptr}, {"value", nullptr}, {"tag", SeesawResult::tag},
                {"note", "no certificate found; this is not an infeasibility proof"}, {"seeds_tried", tried}};
    return r;
}

JobResult reproduce_cube() {
    Rational v = compatibility_robustness(cube_face_multimeter());
    JobResult r;
    r.code = v == rat(1, 3) ? 0 : 1;
    r.report = {{"status", r.code ? "fail" : "pass"}, {"value", to_string(v)}};
    return r;
}

JobResult reproduce_octa() {
    Rational rs = steering_robustness(octahedron_counterexample());
    Rational floor = compatibility_robustness(octahedron_face_multimeter());
    JobResult r;
    bool gap = rs < rat(1, 2);
    r.code = gap && rs <= rat(1, 3) ? 0 : 1;
    r.report = {{"status", r.code ? "fail" : "pass"}, {"value", to_string(rs)}, {"R_s", to_string(rs)},
                {"dichotomic_lower_bound", "1/2"}, {"octa_faces_R_m", to_string(floor)}, {"gap", gap}};
    return r;
}

JobResult reproduce_chsh() {
    json vals = json::array();
    Rational mn = 1;
    JobResult r;
    for (const auto& W : chsh_family()) {
        Rational v = evaluate_witness(W, pr_box());
        vals.push_back(to_string(v));
        mn = std::min(mn, v);
        r.rows.push_back({"chsh[" + W.name + "]", "evaluated", to_string(v), 0});
    }
    r.code = mn == rat(-1, 2) ? 0 : 1;
    r.report = {{"status", r.code ? "fail" : "pass"}, {"value", to_string(mn)}, {"values", vals}};
    r.rows.push_back({"chsh", r.code ? "fail" : "pass", to_string(mn), 0});
    return r;
}

JobResult reproduce_all() {
    JobResult r;
    json table = json::array();
    for (const auto& c : acceptance::criteria()) {
        auto rep = acceptance::run_criterion(c);
        std::string status = rep.pass() ? "pass" : "fail";
        table.push_back({{"criterion", c.id}, {"name", c.name}, {"status", status}, {"value", rep.outcome.value},
                         {"detail", rep.outcome.detail}, {"runtime_ms", static_cast<long>(rep.seconds * 1000)}});
        r.rows.push_back({"criterion-" + std::to_string(c.id), status, rep.outcome.value, rep.seconds * 1000});
        if (!rep.pass()) r.code = 1;
    }
    r.report = {{"status", r.code ? "fail" : "pass"}, {"criteria", table}};
    return r;
}

JobResult run_reproduce(const Options& o) {
    const std::string& w = o.reproduce_target;
    if (w == "cube-robustness") return reproduce_cube();
    if (w == "octa-counterexample") return reproduce_octa();
    if (w == "chsh") return reproduce_chsh();
    if (w == "all") return reproduce_all();
    throw ParseError("target", "unknown reproduce target '" + w + "' (cube-robustness, octa-counterexample, chsh, all)");
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

void emit(const JobResult& r, const std::string& format) {
    if (format == "csv") {
        std::cout << "job,status,value,runtime_ms\n";
        for (const auto& row : r.rows)
            std::cout << csv_field(row.job) << "," << csv_field(row.status) << "," << csv_field(unquote(row.value)) << ","
                      << static_cast<long>(row.ms) << "\n";
    } else {
        std::cout << r.report.dump(2) << "\n";
    }
}

void emit_error(const std::string& status, const std::string& pointer, const std::string& message, const std::string& format) {
    if (format == "csv") {
        std::cout << "job,status,value,runtime_ms\nerror," << status << "," << csv_field(pointer + " " + message) << ",0\n";
    } else {
        json j{{"status", status}, {"message", message}};
        if (!pointer.empty()) j["pointer"] = pointer;
        std::cout << j.dump(2) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact cone-factorization toolkit for GPT incompatibility, steering and nonlocality"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", o.seed, "first see-saw seed");
    app.add_option("--iters", o.iters, "see-saw iterations per seed");

    std::string which;
    auto input = [&](CLI::App* sub, bool required = true) {
        auto opt = sub->add_option("--input", o.input, "built-in name, inline JSON or file path");
        if (required) opt->required();
    };
    auto* compat = app.add_subcommand("compat", "is the multimeter compatible?");
    input(compat);
    auto* rob = app.add_subcommand("robustness", "compatibility robustness R_m");
    input(rob);
    auto* sim = app.add_subcommand("simulate", "does --input classically simulate --target?");
    input(sim);
    sim->add_option("--target", o.target)->required();
    auto* steer = app.add_subcommand("steer", "LHS model and steering robustness of an assemblage");
    input(steer);
    auto* bell = app.add_subcommand("bell", "Bell nonlocality");
    bell->require_subcommand(1);
    auto* lhv = bell->add_subcommand("lhv", "LHV model of a behavior");
    input(lhv);
    auto* chsh = bell->add_subcommand("chsh", "CHSH family values");
    chsh->add_option("--behavior", o.behavior, "behavior (built-in, JSON or path)");
    input(chsh, false);
    auto* ext = app.add_subcommand("extend", "symmetric n-extendability of a multimeter or behavior");
    input(ext);
    ext->add_option("--n", o.n)->required();
    auto* fac = app.add_subcommand("factorize", "noisy polysimplex factorizations");
    fac->add_option("--construction", o.construction, "3outcome, 2binary, joint4 or tilted");
    fac->add_option("--t", o.t, "noise parameter");
    fac->add_option("--source", o.source, "k,g,t for a see-saw search");
    fac->add_option("--middle", o.middle, "middle polysimplex k,g");
    fac->add_option("--seeds", o.seeds, "number of seeds");
    auto* rep = app.add_subcommand("reproduce", "reproduce the reference results");
    rep->add_option("target", o.reproduce_target, "cube-robustness, octa-counterexample, chsh or all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::function<JobResult()> job;
    std::string name;
    auto pick = [&](CLI::App* sub, const std::string& n, std::function<JobResult()> f) {
        if (sub->parsed()) {
            name = n;
            job = std::move(f);
        }
    };
    pick(compat, "compat", [&] { return run_compat(o); });
    pick(rob, "robustness", [&] { return run_robustness(o); });
    pick(sim, "simulate", [&] { return run_simulate(o); });
    pick(steer, "steer", [&] { return run_steer(o); });
    pick(lhv, "bell-lhv", [&] { return run_bell_lhv(o); });
    pick(chsh, "bell-chsh", [&] { return run_bell_chsh(o); });
    pick(ext, "extend", [&] { return run_extend(o); });
    pick(fac, "factorize", [&] { return run_factorize(o); });
    pick(rep, o.reproduce_target, [&] { return run_reproduce(o); });
    if (!job) {
        emit_error("input_error", "", "no command given", o.format);
        return 2;
    }

    try {
        JobResult r = timed(name, job);
        emit(r, o.format);
        return r.code;
    } catch (const ParseError& e) {
        emit_error("input_error", e.pointer().empty() ? "/" : e.pointer(), e.what(), o.format);
    } catch (const std::invalid_argument& e) {
        emit_error("input_error", "", e.what(), o.format);
    } catch (const Error& e) {
        emit_error(e.code(), "", e.what(), o.format);
    } catch (const std::exception& e) {
        emit_error("internal_error", "", e.what(), o.format);
    }
    return 2;
}
