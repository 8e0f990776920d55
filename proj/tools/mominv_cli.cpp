#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <mominv/mominv.hpp>

namespace {

using namespace mominv;

struct SourceInput {
    std::string name;
    std::string source;
    Bindings defaults; // only populated for built-in programs
};

SourceInput load_source(const std::string& arg) {
    namespace fs = std::filesystem;
    if (fs::exists(arg)) {
        std::ifstream in(arg);
        if (!in) throw Error("cannot read " + arg);
        std::ostringstream buf;
        buf << in.rdbuf();
        return {fs::path(arg).stem().string(), buf.str(), {}};
    }
    for (const auto& e : corpus())
        if (e.name == arg) return {e.name, e.source, e.default_bindings};
    throw Error("'" + arg + "' is neither a file nor a built-in program");
}

Bindings parse_bindings(const std::vector<std::string>& kvs, Bindings base) {
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error("parameter bindings look like name=value, got '" + kv + "'");
        base[kv.substr(0, eq)] = Rational::parse(kv.substr(eq + 1));
    }
    return base;
}

void require_bound(const ValidatedProgram& vp, const Bindings& b) {
    std::string missing;
    for (const auto& p : vp.params)
        if (!b.count(p)) missing += missing.empty() ? p : ", " + p;
    if (!missing.empty()) throw Error("unbound parameters: " + missing + " (use --param)");
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write " + out_path);
    out << text;
}

struct AnalyzeArgs {
    std::string input, format = "text", out_path;
    unsigned k = 2;
    bool central = false, variance = false, recurrences = false;
    std::vector<std::string> covs, skews, params;
    long long at = 10;
};

int run_analyze(const AnalyzeArgs& a) {
    SourceInput src = load_source(a.input);
    ValidatedProgram vp = load_program(src.source);

    AnalysisOptions opts;
    opts.k = a.k;
    opts.central = a.central;
    opts.variance = a.variance;
    for (const auto& c : a.covs) {
        auto comma = c.find(',');
        if (comma == std::string::npos)
            throw Error("--cov expects two variable names like x,y");
        opts.covariances.emplace_back(c.substr(0, comma), c.substr(comma + 1));
    }
    if (!a.skews.empty() && a.k < 3) throw Error("skewness needs --moments 3 or higher");

    InvariantReport rep = analyze(vp, opts, src.name);
    Bindings bind = parse_bindings(a.params, src.defaults);

    if (a.format == "json") {
        nlohmann::json j = render_json(rep);
        if (!a.skews.empty()) {
            j["skewness"] = nlohmann::json::array();
            for (const auto& v : a.skews)
                j["skewness"].push_back({{"variable", v},
                                         {"n", a.at},
                                         {"value", skewness_at(rep.forms, vp, vp.index_of(v),
                                                               a.at, bind)}});
        }
        emit(j.dump(2) + "\n", a.out_path);
        return 0;
    }

    std::ostringstream out;
    if (a.recurrences)
        for (const auto& r : rep.system.rows) out << recurrence_str(vp, r) << "\n";
    out << render_text(rep);
    for (const auto& v : a.skews) {
        out << "Skew(" << v << "(" << a.at << ")) = " << std::setprecision(15)
            << skewness_at(rep.forms, vp, vp.index_of(v), a.at, bind) << "\n";
    }
    emit(out.str(), a.out_path);
    return 0;
}

struct CheckArgs {
    std::string input, format = "text", method = "auto";
    unsigned k = 2;
    std::vector<std::string> params;
    long long runs = 100'000, n_max = 50, enum_n_max = 8;
    uint64_t seed = 0x5eed0001u;
    double z_max = 4.0;
};

int run_check(const CheckArgs& a) {
    SourceInput src = load_source(a.input);
    ValidatedProgram vp = load_program(src.source);
    Bindings bind = parse_bindings(a.params, src.defaults);
    require_bound(vp, bind);

    AnalysisOptions aopts;
    aopts.k = a.k;
    InvariantReport rep = analyze(vp, aopts, src.name);

    CheckOptions copts;
    copts.runs = a.runs;
    copts.n_max = a.n_max;
    copts.enum_n_max = a.enum_n_max;
    copts.seed = a.seed;
    copts.z_max = a.z_max;
    if (a.method == "exact") copts.method = CheckOptions::Method::Exact;
    else if (a.method == "mc") copts.method = CheckOptions::Method::Simulation;
    else if (a.method != "auto") throw Error("--method must be auto, exact, or mc");

    CheckReport cr = check_invariants(vp, rep.forms, bind, copts);
    if (a.format == "json") {
        nlohmann::json j = check_to_json(cr);
        j["program"] = src.name;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << src.name << " " << check_summary(cr) << "\n"
                  << (cr.pass ? "PASS" : "FAIL") << "\n";
    }
    return cr.pass ? 0 : 1;
}

struct BenchArgs {
    std::string filter, golden_dir = "golden/v1";
    bool update = false;
};

int run_bench(const BenchArgs& a) {
    namespace fs = std::filesystem;
    int failures = 0;
    for (const auto& e : corpus()) {
        if (!a.filter.empty() && e.name.find(a.filter) == std::string::npos) continue;
        auto t0 = std::chrono::steady_clock::now();
        std::string status;
        try {
            ValidatedProgram vp = load_program(e.source);
            AnalysisOptions opts;
            opts.k = 3;
            opts.variance = true;
            InvariantReport rep = analyze(vp, opts, e.name);
            std::string text = render_text(rep);
            fs::path golden = fs::path(a.golden_dir) / (e.name + ".txt");
            if (a.update) {
                // Refuse to freeze output that the oracles reject.
                CheckOptions copts;
                copts.runs = 20'000;
                CheckReport cr = check_invariants(vp, rep.forms, e.default_bindings, copts);
                if (!cr.pass) throw Error("oracle check failed, golden not updated");
                fs::create_directories(golden.parent_path());
                std::ofstream out(golden);
                out << text;
                status = "updated";
            } else {
                std::ifstream in(golden);
                if (!in) {
                    status = "missing golden";
                    ++failures;
                } else {
                    std::ostringstream buf;
                    buf << in.rdbuf();
                    if (buf.str() == text) {
                        status = "ok";
                    } else {
                        status = "golden mismatch";
                        ++failures;
                    }
                }
            }
        } catch (const Error& ex) {
            status = std::string("error: ") + ex.what();
            ++failures;
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        std::cout << std::left << std::setw(20) << e.name << std::setw(6)
                  << (std::to_string(ms) + "ms") << " " << status << "\n";
    }
    return failures ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-form moment invariants for probabilistic loops"};
    app.require_subcommand(1);

    AnalyzeArgs aa;
    CLI::App* an = app.add_subcommand("analyze", "derive closed-form moments");
    an->add_option("input", aa.input, "program file or built-in name")->required();
    an->add_option("--moments", aa.k, "highest moment order (default 2)");
    an->add_flag("--central", aa.central, "also report central moments");
    an->add_flag("--var", aa.variance, "also report variances");
    an->add_option("--cov", aa.covs, "covariance pair, e.g. --cov x,y")->delimiter('\0');
    an->add_option("--skew", aa.skews, "numeric skewness of a variable (needs --moments >= 3)");
    an->add_option("--at", aa.at, "step index for --skew (default 10)");
    an->add_option("--param", aa.params, "bind a parameter, e.g. --param p=1/2");
    an->add_flag("--recurrences", aa.recurrences, "print the moment recurrences first");
    an->add_option("--format", aa.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    an->add_option("--out", aa.out_path, "write the report to a file");

    CheckArgs ca;
    CLI::App* ch = app.add_subcommand("check", "validate closed forms against an oracle");
    ch->add_option("input", ca.input, "program file or built-in name")->required();
    ch->add_option("--moments", ca.k, "highest moment order (default 2)");
    ch->add_option("--param", ca.params, "bind a parameter, e.g. --param p=1/2");
    ch->add_option("--method", ca.method, "auto, exact, or mc (default auto)");
    ch->add_option("--runs", ca.runs, "simulation runs (default 100000)");
    ch->add_option("--seed", ca.seed, "simulation seed");
    ch->add_option("--n-max", ca.n_max, "largest checkpoint to simulate (default 50)");
    ch->add_option("--enum-n-max", ca.enum_n_max, "steps to enumerate exactly (default 8)");
    ch->add_option("--z-max", ca.z_max, "allowed deviation in standard errors (default 4)");
    ch->add_option("--format", ca.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    BenchArgs ba;
    CLI::App* be = app.add_subcommand("bench", "run the built-in corpus against golden reports");
    be->add_option("--filter", ba.filter, "only run programs whose name contains this");
    be->add_option("--golden-dir", ba.golden_dir, "golden directory (default golden/v1)");
    be->add_flag("--update-golden", ba.update, "rewrite goldens (only if oracle checks pass)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*an) return run_analyze(aa);
        if (*ch) return run_check(ca);
        return run_bench(ba);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n"; // message already carries "parse error at line:col"
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedCondition& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
