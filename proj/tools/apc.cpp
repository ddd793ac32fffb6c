#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "apc/bohr.hpp"
#include "apc/io.hpp"
#include "apc/sifting.hpp"
#include "apc/spread.hpp"
#include "apc/suites.hpp"
#include "apc/threeap.hpp"

using namespace apc;
using nlohmann::json;

namespace {

void emit(const json& j, const std::string& out) {
    if (out.empty() || out == "-") std::cout << j.dump(2) << "\n";
    else write_file(out, j.dump(2) + "\n");
}

json subset_json(const GroupSpec& G, const Subset& A) {
    json a = json::array();
    for (int x : A) a.push_back(G.coords(x));
    return a;
}

json subspace_json(const AffineSubspace& V) {
    return {{"describe", V.describe()}, {"dim", V.dim()}, {"codim", V.codim()}, {"size", V.size()}};
}

json stages_json(const std::vector<StageRecord>& st) {
    json a = json::array();
    for (const auto& r : st)
        a.push_back({{"id", r.id}, {"value", r.value}, {"threshold", r.threshold}, {"holds", r.holds}, {"note", r.note}});
    return a;
}

json outcome_json(const GroupSpec& G, const SiftOutcome& o) {
    json sets = json::array();
    for (const auto& s : o.sets) sets.push_back(subset_json(G, s));
    json shifts = json::array();
    for (int s : o.shifts) shifts.push_back(G.coords(s));
    return {{"variant", o.variant},
            {"shifts", shifts},
            {"sets", sets},
            {"achieved_ratio", o.achieved_ratio},
            {"achieved_ratio_exact", o.achieved_ratio_exact},
            {"achieved_sizes", o.achieved_sizes},
            {"guarantee_ratio", o.guarantee_ratio},
            {"guarantee_ratio_exact", o.guarantee_ratio_exact},
            {"guarantee_sizes", o.guarantee_sizes},
            {"certified", o.certified},
            {"vacuous", o.vacuous},
            {"budget_exhausted", o.budget_exhausted},
            {"nodes", o.nodes},
            {"tried", o.tried},
            {"successes", o.successes},
            {"note", o.note}};
}

struct Loaded {
    GroupSpec G;
    Subset A;
};

Loaded load_group_set(const std::string& path) {
    SetFile f = load_set(path);
    GroupSpec G = set_group(f);
    return {G, set_subset(G, f)};
}

std::vector<long long> load_interval_set(const std::string& path, long long& N) {
    SetFile f = load_set(path);
    if (f.dims.size() != 1) fail_usage(path + ": expected a one-dimensional set");
    N = f.dims[0];
    std::vector<long long> A;
    for (const Point& p : f.points) A.push_back(f.kind == "box" ? p[0] : p[0] + 1);
    std::sort(A.begin(), A.end());
    return A;
}

double parse_number(const std::string& s) { return parse_rational(s).get_d(); }

// ---- subcommands ----

int cmd_verify(const std::string& suite, long long budget, uint64_t seed, const std::string& format,
               const std::string& out, const std::string& results, double scale) {
    SuiteOptions opt;
    opt.seed = seed;
    opt.size_budget = budget;
    opt.scale = scale;
    if (budget > 0) set_size_budget(budget);
    ExperimentReport r = run_suite(suite, opt);
    emit_report(r, out, format);
    if (!results.empty()) std::cerr << "stored " << store_report(r, results) << "\n";
    return r.passed() ? 0 : 1;
}

int cmd_count(const std::string& path) {
    SetFile f = load_set(path);
    ApCount c;
    json j = {{"set", path}, {"size", f.points.size()}};
    if (f.kind == "group") {
        GroupSpec G = set_group(f);
        c = count_3aps(G, set_subset(G, f));
        j["group"] = G.describe();
    } else {
        c = count_3aps(f.points);
        j["box"] = f.dims;
    }
    j["total"] = c.total;
    j["trivial"] = c.trivial;
    j["nontrivial"] = c.nontrivial;
    emit(j, "-");
    return 0;
}

int cmd_behrend(long long N, const std::string& out) {
    if (N < 1) fail_usage("--n must be positive");
    auto b = behrend_set(N);
    if (!out.empty()) save_set(box_set(N, b.set), out);
    json j = {{"N", N},           {"size", b.set.size()}, {"density", b.density}, {"dim", b.dim},
              {"digits", b.digits}, {"radius2", b.radius2}, {"certified", b.certified}};
    if (out.empty()) j["set"] = b.set;
    emit(j, "-");
    return b.certified ? 0 : 1;
}

int cmd_pipeline(const std::string& path, const std::string& eps, uint64_t seed, long long budget,
                 int max_iter, const std::string& nice_eps, const std::string& out) {
    long long N = 0;
    auto A = load_interval_set(path, N);
    SpreadnessConfig sc;
    if (!eps.empty()) sc.eps = parse_number(eps);
    SearchBudget b;
    if (budget > 0) b.node_cap = budget;
    auto r = pass_to_spread(N, A, sc, seed, b, max_iter, parse_number(nice_eps));
    json trace = json::array();
    for (const auto& t : r.trace)
        trace.push_back({{"stage", t.stage}, {"inputs_hash", t.inputs_hash}, {"certificate", t.certificate},
                         {"achieved", t.achieved}, {"bound_shape", t.bound_shape}, {"wallclock", t.wallclock}});
    json j = {{"command", "pipeline"},
              {"N", N},
              {"seed", seed},
              {"eps", sc.eps},
              {"iterations", r.iterations},
              {"iteration_bound", r.iteration_bound},
              {"within_bound", r.within_bound},
              {"composition_hom", r.composition_hom},
              {"stop_reason", r.stop_reason},
              {"final_box", r.final_cfg.N},
              {"final_density", r.final_cfg.A.empty() ? 0.0 : r.final_cfg.density()},
              {"Aprime", r.Aprime},
              {"trace", trace}};
    emit(j, out);
    return r.within_bound && r.composition_hom ? 0 : 1;
}

int cmd_increment(const std::string& path, const std::string& eps, int r) {
    auto [G, A] = load_group_set(path);
    auto t = greedy_spread(G, A, parse_number(eps), r);
    json steps = json::array();
    for (const auto& s : t.steps)
        steps.push_back({{"subspace", subspace_json(s.chosen)}, {"density_before", s.density_before},
                         {"density_after", s.density_after}, {"ratio_exact", s.ratio_exact}});
    json j = {{"group", G.describe()},
              {"iterations", t.iterations},
              {"iteration_bound", t.iteration_bound},
              {"codim_bound", t.codim_bound},
              {"initial_density", t.initial_density},
              {"final_density", t.final_density},
              {"final_perp", t.final_perp},
              {"spread_certified", t.spread_certified},
              {"exhaustive", t.exhaustive},
              {"container", subspace_json(t.final_container)},
              {"steps", steps},
              {"note", t.note}};
    emit(j, "-");
    return t.iterations <= t.iteration_bound ? 0 : 1;
}

int cmd_sunflower(const std::string& path, const std::string& eps, double k, double factor, const std::string& out) {
    auto [G, A] = load_group_set(path);
    auto r = robust_sunflower(G, A, parse_number(eps), k, factor);
    json j = {{"group", G.describe()},
              {"Aprime", subset_json(G, r.Aprime)},
              {"span", subspace_json(r.span)},
              {"r_formula", r.r_formula},
              {"r_used", r.r_used},
              {"r_capped", r.r_capped},
              {"k", r.k},
              {"divergence", r.divergence},
              {"divergence_pow_exact", r.divergence_pow_exact},
              {"sumset_ratio", r.sumset_ratio},
              {"density_no_loss", r.density_no_loss},
              {"triple_sum_forced", r.triple_sum_forced},
              {"triple_sum_is_span", r.triple_sum_is_span},
              {"reference_codim", r.reference_codim},
              {"note", r.note}};
    emit(j, out);
    return r.density_no_loss ? 0 : 1;
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& kv) {
    std::map<std::string, std::string> m;
    for (const auto& s : kv) {
        auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) fail_usage("--params expects key=value, got '" + s + "'");
        m[s.substr(0, eq)] = s.substr(eq + 1);
    }
    return m;
}

long long param(const std::map<std::string, std::string>& m, const std::string& key, long long dflt) {
    auto it = m.find(key);
    if (it == m.end()) return dflt;
    try {
        return std::stoll(it->second);
    } catch (const std::exception&) {
        fail_usage("--params " + key + ": expected an integer");
    }
}

int cmd_compare(const std::string& suite, const std::vector<std::string>& kv) {
    auto p = parse_params(kv);
    const uint64_t seed = static_cast<uint64_t>(param(p, "seed", 1));
    json j = {{"suite", suite}, {"params", p}};
    if (suite == "roth-meshulam") {
        const int n = static_cast<int>(param(p, "n", 5));
        const long long trials = param(p, "trials", 50);
        GroupSpec G = make_group(std::vector<int>(n, 2));
        Rng rng(stage_seed(seed, "compare/roth-meshulam"));
        std::bernoulli_distribution half(0.5);
        long long ok2 = 0, ok1 = 0, with1 = 0;
        double worst = 1e300;
        for (long long t = 0; t < trials; ++t) {
            Subset S[3];
            for (auto& s : S) {
                for (int x = 0; x < G.order(); ++x)
                    if (half(rng)) s.push_back(x);
                if (s.empty()) s.push_back(0);
            }
            auto r = roth_meshulam_stats(G, S[0], S[1], S[2]);
            ok2 += r.bound2_holds;
            worst = std::min(worst, r.rhs_l2 - std::abs(r.star - 1));
            if (r.bound1_holds) {
                ++with1;
                ok1 += *r.bound1_holds;
            }
        }
        j["group"] = G.describe();
        j["trials"] = trials;
        j["bound2_holds"] = ok2;
        j["bound1_checked"] = with1;
        j["bound1_holds"] = ok1;
        j["worst_l2_margin"] = worst;
        emit(j, "-");
        return ok2 == trials && ok1 == with1 ? 0 : 1;
    }
    if (suite == "planted") {
        const int n = static_cast<int>(param(p, "n", 5)), d = static_cast<int>(param(p, "d", n - 1));
        const int w = static_cast<int>(param(p, "w", 2)), c = static_cast<int>(param(p, "c", 3));
        GroupSpec G = make_group(std::vector<int>(n, 2));
        Subset P = planted_subspace(G, d, w, c, seed);
        DensityFn Pd = indicator_density(G, P);
        const double eps = std::min(1.0, knorm(crosscorr(Pd, Pd), 2) - 1);
        auto perp = perp_norm(G, P, n - w);
        j["group"] = G.describe();
        j["size"] = P.size();
        j["eps"] = eps;
        j["perp_norm"] = perp.gamma;
        if (perp.subspace) j["perp_subspace"] = subspace_json(*perp.subspace);
        if (eps <= 0) {
            j["note"] = "planted set is already uniform";
            emit(j, "-");
            return 0;
        }
        auto r = ii_part2(G, P, 2, eps, SearchBudget{});
        j["ii_part2"] = {{"certified", r.certified},       {"failed_stage", r.failed_stage},
                         {"witness", subspace_json(r.witness)}, {"witness_value", r.witness_value},
                         {"target", 1 + eps / 4},           {"stages", stages_json(r.stages)}};
        emit(j, "-");
        return r.certified ? 0 : 1;
    }
    fail_usage("unknown comparison '" + suite + "' (roth-meshulam|planted)");
}

int cmd_bohr(const std::vector<int>& group, const std::vector<std::string>& freq_tokens, const std::string& rho,
             const std::string& check) {
    GroupSpec G = make_group(group);
    if (G.order() > size_budget()) fail_budget("bohr", "group order exceeds APC_BUDGET");
    std::vector<std::vector<int>> freqs;
    for (const auto& tok : freq_tokens) {
        std::vector<int> f;
        std::stringstream ss(tok);
        std::string part;
        while (std::getline(ss, part, ',')) {
            try {
                f.push_back(std::stoi(part));
            } catch (const std::exception&) {
                fail_usage("--freqs: bad coordinate '" + part + "' in '" + tok + "'");
            }
        }
        freqs.push_back(f);
    }
    Subset gam;
    for (const auto& f : freqs) {
        if (f.size() != group.size()) fail_usage("--freqs: each frequency needs " + std::to_string(group.size()) + " coordinates");
        Elem e(f.begin(), f.end());
        for (size_t i = 0; i < e.size(); ++i) e[i] = ((e[i] % group[i]) + group[i]) % group[i];
        gam.push_back(G.index(e));
    }
    std::sort(gam.begin(), gam.end());
    gam.erase(std::unique(gam.begin(), gam.end()), gam.end());
    BohrSet B{G, gam, parse_number(rho)};
    json j = {{"group", G.describe()}, {"rank", B.rank()}, {"rho", B.rho}, {"check", check}};
    bool ok = true;
    if (check == "sizes") {
        auto e = size_estimates(B);
        json dil = json::array();
        for (const auto& d : e.dilates)
            dil.push_back({{"delta", d.delta}, {"size", d.size}, {"bound", d.bound}, {"holds", d.holds},
                           {"sumset_inclusion", d.sumset_inclusion}});
        j.update({{"size", e.size}, {"lower", e.lower}, {"lower_holds", e.lower_holds}, {"size2", e.size2},
                  {"doubling", e.doubling}, {"doubling_holds", e.doubling_holds}, {"dilates", dil},
                  {"all_hold", e.all_hold}});
        ok = e.all_hold;
    } else if (check == "regular") {
        auto r = is_regular(B);
        auto g = regularize(B);
        j.update({{"regular", r.regular}, {"points", r.points}, {"failing_delta", r.failing_delta},
                  {"failing_side", r.failing_side}, {"worst_upper", r.worst_upper}, {"worst_lower", r.worst_lower},
                  {"grid_steps", g.grid_steps}, {"regularize_note", g.note}});
        j["delta_star"] = g.delta_star ? json(*g.delta_star) : json(nullptr);
        ok = g.delta_star.has_value();
    } else if (check == "progression") {
        auto r = progression_in_bohr(B);
        j.update({{"a", r.P.a}, {"c", r.P.c}, {"lengths", r.P.lengths}, {"volume", r.P.volume()},
                  {"proper", r.proper}, {"contained", r.contained}, {"bound", r.bound},
                  {"meets_bound", r.meets_bound}, {"method", r.method}, {"note", r.note}});
        ok = r.proper && r.contained;
    } else {
        fail_usage("--check must be sizes, regular or progression");
    }
    emit(j, "-");
    return ok ? 0 : 1;
}

int cmd_freiman(const std::string& set_path, const std::string& map_path, int t, std::vector<long long> cod) {
    SetFile s = load_set(set_path);
    MapFile m = load_map(map_path);
    std::map<Point, Point> table;
    for (size_t i = 0; i < m.x.size(); ++i) table[m.x[i]] = m.y[i];
    FreimanMap phi;
    phi.dom.moduli = s.kind == "group" ? s.dims : std::vector<long long>(s.dims.size(), 0);
    const size_t ydim = m.y.empty() ? 0 : m.y[0].size();
    if (cod.empty()) cod.assign(ydim, 0);
    if (cod.size() != ydim) fail_usage("--cod needs one modulus per target coordinate");
    phi.cod.moduli = cod;
    for (const Point& p : s.points) {
        auto it = table.find(p);
        if (it == table.end()) fail_usage(map_path + ": no image listed for a point of " + set_path);
        phi.x.push_back(p);
        phi.y.push_back(phi.cod.reduce(it->second));
    }
    auto c = check_freiman(phi, t);
    json j = {{"t", c.t}, {"verified", c.verified}, {"exhaustive", c.exhaustive}, {"tuples", c.tuples}, {"note", c.note}};
    if (c.counterexample) {
        json lhs = json::array(), rhs = json::array();
        for (int i : c.counterexample->first) lhs.push_back(phi.x[i]);
        for (int i : c.counterexample->second) rhs.push_back(phi.x[i]);
        j["counterexample"] = {{"lhs", lhs}, {"rhs", rhs}};
    }
    emit(j, "-");
    return c.verified ? 0 : 1;
}

struct SiftArgs {
    std::string variant = "self", set, set2, set3, mode = "exhaustive", out, eps = "1/2";
    double k = 2, c = 2;
    int kprime = 4;
    long long samples = 2000;
    uint64_t seed = 1;
};

int cmd_sift(const SiftArgs& a) {
    SearchBudget b;
    if (a.mode == "sample") b.mode = SearchMode::Sampled;
    else if (a.mode != "exhaustive") fail_usage("--mode must be exhaustive or sample");
    b.samples = a.samples;
    b.seed = a.seed;
    auto [G, A] = load_group_set(a.set);
    auto second = [&](const std::string& path, const char* flag) {
        if (path.empty()) fail_usage(std::string("--variant ") + a.variant + " needs " + flag);
        auto [H, S] = load_group_set(path);
        if (H.moduli() != G.moduli()) fail_usage(path + ": group differs from " + a.set);
        return S;
    };
    const int k = static_cast<int>(a.k);
    const double eps = parse_number(a.eps);
    RealFn one(G, 1.0);
    json j = {{"group", G.describe()}, {"variant", a.variant}, {"k", a.k}};
    bool ok = false;
    if (a.variant == "self") {
        auto o = sift_self(G, A, one, k, b);
        j["outcome"] = outcome_json(G, o);
        ok = o.certified || o.vacuous;
    } else if (a.variant == "pair") {
        auto o = sift_pair(G, A, second(a.set2, "--set2"), one, k, b);
        j["outcome"] = outcome_json(G, o);
        ok = o.certified || o.vacuous;
    } else if (a.variant == "local") {
        auto o = sift_local(G, A, second(a.set2, "--set2"), second(a.set3, "--set3"), one, k, b);
        j["outcome"] = outcome_json(G, o);
        ok = o.certified || o.vacuous;
    } else if (a.variant == "robust") {
        auto w = sift_robust_witness(G, A, a.k, eps, b);
        j["outcome"] = outcome_json(G, w.outcome);
        j.update({{"S", subset_json(G, w.S)}, {"k_used", w.k_used}, {"eps_bar", w.eps_bar},
                  {"witness_mass", w.witness_mass}, {"corollary_certified", w.corollary_certified},
                  {"chain_value", w.chain_value}, {"chain_holds", w.chain_holds}, {"note", w.note}});
        ok = w.corollary_certified;
    } else if (a.variant == "local-witness") {
        auto w = sift_local_witness(G, A, second(a.set2, "--set2"), second(a.set3, "--set3"), k, eps, a.kprime, b);
        j["outcome"] = outcome_json(G, w.outcome);
        j.update({{"hypothesis_norm", w.hypothesis_norm}, {"corollary_ratio_bound", w.corollary_ratio_bound},
                  {"corollary_ratio_simple", w.corollary_ratio_simple}, {"size_ratio", w.size_ratio},
                  {"size_ratio_bound", w.size_ratio_bound}, {"corollary_certified", w.corollary_certified}});
        ok = w.corollary_certified;
    } else if (a.variant == "prebsg") {
        auto w = extended_pre_bsg(G, A, k, a.c, b);
        j["outcome"] = outcome_json(G, w.outcome);
        j.update({{"kappa", w.kappa}, {"kappa_exact", w.kappa_exact}, {"ratio_bound", w.ratio_bound},
                  {"size_bound", w.size_bound}, {"certified", w.certified}});
        ok = w.certified;
    } else {
        fail_usage("--variant must be self, pair, local, robust, local-witness or prebsg");
    }
    emit(j, a.out);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"apc: additive-combinatorics certificates and verification suites"};
    app.require_subcommand(1);

    std::string suite, format = "json", out = "-", results, set, set2, set3, eps, map_path, rho, check,
                                       nice_eps = "1/512";
    long long budget = -1, n = 0;
    uint64_t seed = 1;
    double scale = 1, k = 2, factor = 1;
    int r = 1, t = 2, max_iter = 16;
    std::vector<int> group;
    std::vector<std::string> freqs;
    std::vector<long long> cod;
    std::vector<std::string> params;
    SiftArgs sa;

    auto* verify = app.add_subcommand("verify", "run an acceptance suite");
    verify->add_option("--suite", suite, "suite id")->required()->check(CLI::IsMember(suite_ids()));
    verify->add_option("--budget", budget, "group-order cap (overrides APC_BUDGET)");
    verify->add_option("--seed", seed, "root seed");
    verify->add_option("--format", format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
    verify->add_option("--out", out, "report path, - for stdout");
    verify->add_option("--results", results, "directory for content-addressed reports");
    verify->add_option("--scale", scale, "instance-count multiplier")->check(CLI::PositiveNumber);

    auto* count = app.add_subcommand("count", "count 3-term progressions in a set");
    count->add_option("--set", set, "set file")->required();

    auto* behrend = app.add_subcommand("behrend", "build a 3-AP-free subset of [N]");
    behrend->add_option("--n", n, "N")->required();
    behrend->add_option("--out", out, "set file to write")->default_val("");

    auto* pipeline = app.add_subcommand("pipeline", "pass a subset of [N] to a spread configuration");
    pipeline->add_option("--set", set, "box or group set file with one dimension")->required();
    pipeline->add_option("--eps", eps, "spreadness epsilon (default 1/1024)");
    pipeline->add_option("--seed", seed, "root seed");
    pipeline->add_option("--budget", budget, "search node cap");
    pipeline->add_option("--max-iterations", max_iter, "iteration cap");
    pipeline->add_option("--nice-eps", nice_eps, "epsilon for the nice-configuration step");
    pipeline->add_option("--out", out, "trace JSON path");

    auto* increment = app.add_subcommand("increment", "greedy density increment on affine subspaces");
    increment->add_option("--set", set, "set file over F_p^n")->required();
    increment->add_option("--eps", eps, "epsilon")->required();
    increment->add_option("--r", r, "codimension per step")->required();

    auto* sunflower = app.add_subcommand("sunflower", "robust sunflower reduction");
    sunflower->add_option("--set", set, "set file over F_p^n")->required();
    sunflower->add_option("--eps", eps, "epsilon")->required();
    sunflower->add_option("--k", k, "norm exponent")->required();
    sunflower->add_option("--factor", factor, "multiplier on the codimension formula");
    sunflower->add_option("--out", out, "report path");

    auto* compare = app.add_subcommand("compare", "comparison experiments");
    compare->add_option("--suite", suite, "roth-meshulam or planted")->required();
    compare->add_option("--params", params, "key=value pairs");

    auto* bohr = app.add_subcommand("bohr", "Bohr-set checks");
    bohr->add_option("--group", group, "moduli")->required();
    bohr->add_option("--freqs", freqs, "frequencies, coordinates comma-separated")->required();
    bohr->add_option("--rho", rho, "radius")->required();
    bohr->add_option("--check", check, "sizes, regular or progression")->required();

    auto* freiman = app.add_subcommand("freiman", "check a Freiman t-homomorphism");
    freiman->add_option("--set", set, "domain set file")->required();
    freiman->add_option("--map", map_path, "map file")->required();
    freiman->add_option("--t", t, "order")->required()->check(CLI::PositiveNumber);
    freiman->add_option("--cod", cod, "target moduli, 0 for Z (default all 0)");

    auto* sift = app.add_subcommand("sift", "sifting certificates");
    sift->add_option("--variant", sa.variant, "self, pair, local, robust, local-witness or prebsg");
    sift->add_option("--set", sa.set, "A")->required();
    sift->add_option("--set2", sa.set2, "B");
    sift->add_option("--set3", sa.set3, "C");
    sift->add_option("--k", sa.k, "k");
    sift->add_option("--eps", sa.eps, "epsilon");
    sift->add_option("--kprime", sa.kprime, "k' for local-witness");
    sift->add_option("--c", sa.c, "energy constant for prebsg");
    sift->add_option("--mode", sa.mode, "exhaustive or sample");
    sift->add_option("--samples", sa.samples, "draws in sample mode");
    sift->add_option("--seed", sa.seed, "seed");
    sift->add_option("--out", sa.out, "report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(Exit::Usage);
    }

    try {
        if (*verify) return cmd_verify(suite, budget, seed, format, out, results, scale);
        if (*count) return cmd_count(set);
        if (*behrend) return cmd_behrend(n, out);
        if (*pipeline) return cmd_pipeline(set, eps, seed, budget, max_iter, nice_eps, out);
        if (*increment) return cmd_increment(set, eps, r);
        if (*sunflower) return cmd_sunflower(set, eps, k, factor, out);
        if (*compare) return cmd_compare(suite, params);
        if (*bohr) return cmd_bohr(group, freqs, rho, check);
        if (*freiman) return cmd_freiman(set, map_path, t, cod);
        if (*sift) return cmd_sift(sa);
    } catch (const ApcError& e) {
        std::cerr << "apc: " << e.what() << "\n";
        return static_cast<int>(e.code());
    }
    return static_cast<int>(Exit::Usage);
}
