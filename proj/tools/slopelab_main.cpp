// Batch command-line front-end: JSON in, canonical JSON out.
//
// Exit codes: 0 success, 2 schema violation, 3 precision exhausted,
// 4 mathematical precondition failure, 1 internal error.

#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "slopelab/json_io.hpp"

using namespace slopelab;

namespace {

struct Options {
    std::vector<std::string> inputs;
    std::string output;
    std::string sub;
    std::string lo = "0", hi = "1";
    std::string name;
    int k3_h = 0;
    long precision = 0;
    long k = 0;
    int jobs = 1;
    // measure-acrys parameters
    long m = 1, n = 1;
    long p = 2;
    long cap_K = 16;
    int nwitt = 6;
    int depth = 8;
    long degcap = 4;
    int budget = 8;
};

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path);
    if (!f) throw SchemaError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw SchemaError("input is not valid JSON");
    return j;
}

FCrystal load_crystal(const Options& opt, const json& j) {
    FCrystal E = crystal_from_json(j);
    if (opt.precision > 0 && opt.precision != E.ctx->N) {
        std::cerr << "WARNING: --precision re-embeds by zero-extension; certified precision is "
                     "unchanged (re-derive from exact inputs to certify more digits)\n";
        CtxPtr bigger =
            PrecisionContext::create(E.ctx->p, E.ctx->s, static_cast<int>(opt.precision), E.ctx->modulus);
        E = make_fcrystal(bigger, E.A.rebase(bigger));
    }
    return E;
}

json run_one(const Options& opt, const std::string& input_text) {
    const std::string& cmd = opt.sub;
    if (cmd == "named") {
        CtxPtr ctx = PrecisionContext::create(static_cast<uint64_t>(opt.p), 1,
                                              static_cast<int>(opt.precision > 0 ? opt.precision : 12));
        NamedCrystal nc = named(opt.name, ctx);
        json j;
        j["name"] = nc.name;
        j["crystal"] = crystal_to_json(nc.crystal);
        j["expected_polygon"] = polygon_to_json(nc.expected);
        return j;
    }
    if (cmd == "measure-acrys") {
        auto par = acrys::make_params(static_cast<uint64_t>(opt.p), 1, 1, opt.depth, opt.degcap, 1,
                                      opt.cap_K, opt.nwitt);
        auto C = acrys::AcrysContext::create(par);
        return measure_to_json(acrys::measure_coker_exponent(C, opt.m, opt.n, opt.budget));
    }

    if (cmd == "demo" && (opt.k3_h > 0 || !opt.name.empty())) {
        FCrystal E = [&]() {
            CtxPtr ctx = PrecisionContext::create(
                static_cast<uint64_t>(opt.p), 1,
                static_cast<int>(opt.precision > 0 ? opt.precision : (opt.k3_h > 0 ? 24 : 12)));
            return opt.k3_h > 0 ? k3_like(opt.k3_h, ctx).crystal : named(opt.name, ctx).crystal;
        }();
        return demo_to_json(theorem_demo(E));
    }

    json in = parse_json(input_text);

    if (cmd == "newton") return polygon_to_json(newton_polygon(load_crystal(opt, in)));
    if (cmd == "hodge") return polygon_to_json(hodge_polygon(load_crystal(opt, in)));
    if (cmd == "type") return isotype_to_json(isogeny_type(load_crystal(opt, in)));
    if (cmd == "window")
        return window_to_json(
            slope_window(load_crystal(opt, in), parse_rational(opt.lo), parse_rational(opt.hi)));
    if (cmd == "fixed-points") {
        FCrystal E = load_crystal(opt, in);
        return fixed_points_to_json(E, fixed_points_phi_p(E));
    }
    if (cmd == "demo") return demo_to_json(theorem_demo(load_crystal(opt, in)));
    if (cmd == "quasi-inverse") {
        if (!in.is_object() || in.value("schema", "") != std::string("quasi-inverse/v1"))
            throw SchemaError("expected schema quasi-inverse/v1");
        CtxPtr ctx = context_from_json(in);
        if (!in.contains("matrix") || !in["matrix"].is_array())
            throw SchemaError("missing matrix");
        int rows = static_cast<int>(in["matrix"].size());
        ZqMatrix H = matrix_from_json(ctx, in["matrix"], rows,
                                      rows > 0 ? static_cast<int>(in["matrix"][0].size()) : 0);
        long k = in.contains("k") ? in["k"].get<long>() : opt.k;
        ZqMatrix G = quasi_inverse_matrix(H, k);
        json out;
        out["g"] = matrix_to_json(G);
        out["k"] = k;
        return out;
    }
    if (cmd == "solve") {
        if (!in.is_object()) throw SchemaError("solve input must be a JSON object");
        std::string schema = in.value("schema", "");
        if (schema == "sigma-solve/v1") {
            CtxPtr ctx = context_from_json(in);
            long m = in.value("m", 1L), n = in.value("n", 1L);
            if (!in.contains("b")) throw SchemaError("missing b");
            Zq b = vector_from_json(ctx, in["b"], 1)[0];
            Zq x = solve_sigma_m_pn(ctx, m, n, b);
            json out;
            out["solution"] = vector_to_json({x});
            out["residual_valuation"] = static_cast<long>(x.prec());
            out["extension_degree"] = 1;
            return out;
        }
        if (schema == "dmn-solve/v1") {
            CtxPtr ctx = context_from_json(in);
            long m = in.value("m", 1L), n = in.value("n", 1L);
            if (!in.contains("b")) throw SchemaError("missing b");
            std::vector<Zq> b = vector_from_json(ctx, in["b"], static_cast<int>(n));
            DmnSolution sol = solve_Dmn_system(ctx, m, n, b, in.value("allow_extension", false));
            json out;
            out["solution"] = vector_to_json(sol.x);
            out["residual_valuation"] = sol.certified_prec;
            out["extension_degree"] = sol.extension_degree;
            return out;
        }
        if (schema == "phi-solve/v1") {
            if (!in.contains("crystal")) throw SchemaError("missing crystal");
            FCrystal E = load_crystal(opt, in["crystal"]);
            if (!in.contains("b")) throw SchemaError("missing b");
            std::vector<Zq> b = vector_from_json(E.ctx, in["b"], E.rank);
            return phi_result_to_json(invert_phi_minus_p(E, b));
        }
        throw SchemaError("solve: unknown schema (want sigma-solve/v1, dmn-solve/v1 or phi-solve/v1)");
    }
    throw SchemaError("unknown subcommand: " + cmd);
}

int classify_and_report(const std::exception& e, std::ostream& err) {
    if (const auto* pe = dynamic_cast<const PrecisionExhausted*>(&e)) {
        json j;
        j["error"] = "PrecisionExhausted";
        j["message"] = pe->what();
        j["estimated_sufficient_N"] = pe->estimated_N;
        err << canonical_dump(j);
        return 3;
    }
    if (const auto* pc = dynamic_cast<const PreconditionError*>(&e)) {
        json j;
        j["error"] = pc->kind;
        j["message"] = pc->what();
        err << canonical_dump(j);
        return 4;
    }
    if (dynamic_cast<const SchemaError*>(&e) != nullptr ||
        dynamic_cast<const json::exception*>(&e) != nullptr) {
        json j;
        j["error"] = "SchemaViolation";
        j["message"] = e.what();
        err << canonical_dump(j);
        return 2;
    }
    json j;
    j["error"] = "Internal";
    j["message"] = e.what();
    err << canonical_dump(j);
    return 1;
}

int process_single(const Options& opt, const std::string& in_path, const std::string& out_path) {
    try {
        std::string text;
        if (opt.sub != "named" && opt.sub != "measure-acrys" &&
            !(opt.sub == "demo" && (opt.k3_h > 0 || !opt.name.empty())))
            text = read_input(in_path);
        json result = run_one(opt, text);
        std::string dumped = canonical_dump(result);
        if (out_path.empty() || out_path == "-") {
            std::cout << dumped;
        } else {
            std::ofstream f(out_path, std::ios::binary);
            if (!f) throw SchemaError("cannot open output file: " + out_path);
            f << dumped;
        }
        return 0;
    } catch (const std::exception& e) {
        return classify_and_report(e, std::cerr);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"slopelab: exact p-adic semilinear algebra (F-crystals, slopes, isogenies)"};
    app.require_subcommand(1);
    Options opt;

    auto add_io = [&](CLI::App* c, bool needs_input) {
        if (needs_input)
            c->add_option("input", opt.inputs, "input JSON file(s); '-' or none = stdin");
        c->add_option("-o,--output", opt.output, "output file; default stdout");
        c->add_option("--precision", opt.precision,
                      "re-embed inputs at this N by zero-extension (certified precision unchanged)");
        c->add_option("--jobs", opt.jobs, "parallel workers for multi-file batches")
            ->check(CLI::Range(1, 64));
    };

    add_io(app.add_subcommand("newton", "Newton polygon of an fcrystal/v1 input"), true);
    add_io(app.add_subcommand("hodge", "Hodge polygon (elementary divisors)"), true);
    add_io(app.add_subcommand("type", "isogeny type (Dieudonne-Manin slope data)"), true);
    auto* cw = app.add_subcommand("window", "slope window split");
    add_io(cw, true);
    cw->add_option("--lo", opt.lo, "window lower end (rational)");
    cw->add_option("--hi", opt.hi, "window upper end (rational)");
    add_io(app.add_subcommand("solve", "semilinear solvers (schema-dispatched)"), true);
    add_io(app.add_subcommand("fixed-points", "basis of the rational phi = p fixed space"), true);
    auto* cq = app.add_subcommand("quasi-inverse", "p^(2k) quasi-inverse of a matrix");
    add_io(cq, true);
    cq->add_option("--k", opt.k, "divisor bound k");
    auto* cm = app.add_subcommand("measure-acrys", "A_crys cokernel exponent harness");
    add_io(cm, false);
    cm->add_option("--m", opt.m, "Frobenius exponent m")->required();
    cm->add_option("--n", opt.n, "p-power exponent n")->required();
    cm->add_option("--p", opt.p, "prime");
    cm->add_option("--K", opt.cap_K, "divided-power index cap");
    cm->add_option("--nwitt", opt.nwitt, "Witt length");
    cm->add_option("--depth", opt.depth, "root depth e");
    cm->add_option("--degcap", opt.degcap, "total degree cap D");
    cm->add_option("--budget", opt.budget, "random sample budget");
    auto* cd = app.add_subcommand("demo", "end-to-end slope-window/fixed-point report");
    add_io(cd, true);
    cd->add_option("--name", opt.name, "named crystal instead of an input file");
    cd->add_option("--k3", opt.k3_h, "k3_like height instead of an input file");
    cd->add_option("--p", opt.p, "prime for --name/--k3");
    auto* cn = app.add_subcommand("named", "emit a named catalog crystal");
    add_io(cn, false);
    cn->add_option("--name", opt.name, "crystal name")->required();
    cn->add_option("--p", opt.p, "prime");

    CLI11_PARSE(app, argc, argv);
    opt.sub = app.get_subcommands().front()->get_name();

    if (opt.inputs.size() <= 1) {
        std::string in = opt.inputs.empty() ? "-" : opt.inputs[0];
        return process_single(opt, in, opt.output);
    }

    // multi-file batch: each input processed independently, results written
    // next to the inputs; status lines in input order
    std::vector<int> codes(opt.inputs.size(), 0);
    std::mutex mu;
    size_t next = 0;
    auto worker = [&]() {
        for (;;) {
            size_t i;
            {
                std::lock_guard<std::mutex> lk(mu);
                if (next >= opt.inputs.size()) return;
                i = next++;
            }
            codes[i] = process_single(opt, opt.inputs[i], opt.inputs[i] + ".out.json");
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < std::max(1, opt.jobs); ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    int worst = 0;
    for (size_t i = 0; i < opt.inputs.size(); ++i) {
        std::cout << (codes[i] == 0 ? "OK   " : "FAIL ") << opt.inputs[i] << "\n";
        worst = std::max(worst, codes[i]);
    }
    return worst;
}
