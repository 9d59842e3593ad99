#include "cli.hpp"

#include "omac/json_io.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace omac::cli {

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
}

namespace {

// Everything a subcommand reads or writes passes through here so the manifest sees it.
struct Session {
    std::string command;
    std::vector<std::string> args;
    std::optional<std::uint64_t> seed;
    Json inputs = Json::array();
    Json outputs = Json::array();
    std::string out_path;
    bool pretty = false;

    std::string read(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw InputError("cannot read '" + path + "'");
        std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        inputs.push_back(Json{{"path", path}, {"fnv1a64", fnv1a_hex(text)}});
        return text;
    }

    void write(const std::string& path, const std::string& text) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw InputError("cannot write '" + path + "'");
        f << text;
        outputs.push_back(Json{{"path", path}, {"fnv1a64", fnv1a_hex(text)}});
    }

    std::string manifest_path() const { return out_path.empty() ? std::string() : out_path + ".manifest.json"; }
};

ChannelSpec load_channel(Session& s, const std::string& arg) {
    if (arg.rfind("xor:", 0) == 0) {
        try {
            return builtin_xor_mac(std::stod(arg.substr(4)));
        } catch (const std::logic_error& e) {
            throw InputError("bad builtin channel '" + arg + "': " + e.what());
        }
    }
    return parse_channel(s.read(arg));
}

// "u", a comma list, or a Dist JSON file over one axis.
Dist load_input(Session& s, const std::string& arg, const Alphabet& a, const std::string& axis_name) {
    if (arg == "u") return Dist::uniform({Axis{axis_name, a}});
    if (arg.find(',') != std::string::npos || (!arg.empty() && (std::isdigit(static_cast<unsigned char>(arg[0])) || arg[0] == '.'))) {
        std::vector<double> v;
        std::stringstream ss(arg);
        for (std::string tok; std::getline(ss, tok, ',');) {
            try {
                v.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw InputError("bad probability '" + tok + "' in '" + arg + "'");
            }
        }
        if (v.size() != a.size()) throw InputError("input '" + arg + "' needs " + std::to_string(a.size()) + " entries");
        try {
            return Dist::over(Axis{axis_name, a}, v);
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    }
    Dist d = dist_from_json(parse_json(s.read(arg)));
    if (d.rank() != 1 || !(d.axes()[0].alphabet == a)) throw InputError("input '" + arg + "' must be one axis over the channel alphabet");
    return Dist({Axis{axis_name, a}}, d.values());
}

CodebookFile load_book(Session& s, const std::string& path) { return read_codebook(s.read(path)); }

std::string utc_now() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

const char* region_of(int c) {
    switch (c) {
        case 1: return "(+,+),(+,0),(0,+),(0,0)";
        case 2: return "(+,0),(0,+),(0,0)";
        case 3: return "(+,0),(0,0)";
        case 4: return "(0,+),(0,0)";
        default: return "(0,0)";
    }
}

std::string fmt(double v, int prec = 6) {
    std::ostringstream s;
    s << std::setprecision(prec) << v;
    return s.str();
}

std::string render_verdict(const ShapeVerdict& v) {
    std::ostringstream o;
    o << std::left << std::setw(8) << "case" << std::setw(10) << "G!=0" << std::setw(12) << "G1\\K1!=0" << std::setw(12)
      << "G2\\K2!=0" << "region\n";
    o << std::setw(8) << v.shape_case << std::setw(10) << yes_no(v.predicates[0].verdict) << std::setw(12)
      << yes_no(v.predicates[1].verdict) << std::setw(12) << yes_no(v.predicates[2].verdict) << region_of(v.shape_case)
      << "\n";
    for (const auto& p : v.predicates)
        o << "  " << std::setw(7) << to_string(p.predicate) << " margin " << fmt(p.margin) << " (boundary band "
          << fmt(2 * v.eta) << ")" << (p.boundary_uncertain ? " boundary-uncertain" : "") << "\n";
    return o.str();
}

struct Outcome {
    Json result;
    int code = kExitOk;
    std::string human;
};

Outcome do_classify(Session& s, const std::string& channel, const std::string& p1s, const std::string& p2s,
                    double scan, double eta, int budget, int jobs, std::uint64_t seed) {
    auto spec = load_channel(s, channel);
    Outcome o;
    if (scan > 0) {
        auto r = classify_over_inputs(spec, scan, eta, budget, jobs, seed);
        o.result = to_json(r);
        bool uncertain = std::any_of(r.best.begin(), r.best.end(), [&](std::size_t i) { return r.table[i].boundary_uncertain; });
        o.code = r.best_case == 5 ? kExitNegative : uncertain ? kExitInconclusive : kExitOk;
        std::ostringstream h;
        h << "scanned " << r.table.size() << " input pairs at step " << scan << "; best case " << r.best_case << "\n";
        if (!r.best.empty()) h << render_verdict(r.table[r.best.front()]);
        o.human = h.str();
        return o;
    }
    if (p1s.empty() || p2s.empty()) throw InputError("classify needs --p1 and --p2, or --scan");
    auto v = classify_shape(spec, load_input(s, p1s, spec.x1, "x1"), load_input(s, p2s, spec.x2, "x2"), eta, budget, seed);
    o.result = to_json(v);
    o.result["replayed"] = replay_verdict(spec, v);
    o.code = v.shape_case == 5 ? kExitNegative : v.boundary_uncertain ? kExitInconclusive : kExitOk;
    o.human = render_verdict(v);
    return o;
}

Outcome do_confusable(Session& s, const std::string& channel, const std::string& coupling, const std::string& kind) {
    auto spec = load_channel(s, channel);
    Kind k;
    try {
        k = kind_from_string(kind);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    Dist p = dist_from_json(parse_json(s.read(coupling)));
    p = permute(p, kind_axis_names(k));
    auto cert = confusable_dist(spec, p, k);
    Outcome o;
    o.result = Json{{"certificate", to_json(cert)}};
    if (!cert.feasible) o.result["distance_l1_to_confusable"] = distance_to_set(spec, p, k, Metric::L1, Side::to_confusable);
    o.code = cert.feasible ? kExitOk : kExitNegative;
    o.human = std::string("kind ") + kind + ": " + (cert.feasible ? "confusable" : "not confusable") + " (slack " +
              fmt(cert.slack) + ")\n";
    return o;
}

Outcome do_verify(Session& s, const std::string& channel, const std::string& f1, const std::string& f2) {
    auto spec = load_channel(s, channel);
    auto b1 = load_book(s, f1), b2 = load_book(s, f2);
    if (!(b1.alphabet == spec.x1) || !(b2.alphabet == spec.x2)) throw InputError("codebook alphabets differ from the channel inputs");
    if (b1.n != b2.n) throw InputError("codebooks have different lengths");
    CodePair code{b1.words, b2.words, b1.n};
    try {
        check_code_pair(code, spec.x1.size(), spec.x2.size());
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    auto rep = verify_zero_error(spec, code);
    Outcome o;
    o.result = to_json(rep, spec);
    o.result["m1"] = code.m1();
    o.result["m2"] = code.m2();
    o.result["n"] = code.n;
    o.code = rep.zero_error ? kExitOk : kExitNegative;
    o.human = rep.zero_error ? "zero-error\n"
                             : "confusable " + to_string(rep.kind) + " tuple at (i1,i2,j1,j2) = (" +
                                   std::to_string(rep.indices[0]) + "," + std::to_string(rep.indices[1]) + "," +
                                   std::to_string(rep.indices[2]) + "," + std::to_string(rep.indices[3]) + ")\n";
    return o;
}

Outcome do_achieve(Session& s, const std::string& channel, const std::string& p1s, const std::string& p2s, std::size_t n,
                   double r1, double r2, std::uint64_t seed) {
    auto spec = load_channel(s, channel);
    auto p1 = load_input(s, p1s, spec.x1, "x1"), p2 = load_input(s, p2s, spec.x2, "x2");
    auto plan = make_plan({1.0}, {{p1, p2}}, n);
    auto rep = achieve(spec, plan, r1, r2, seed);
    Outcome o;
    o.result = to_json(rep);
    o.result["book1"] = Json::array();
    o.result["book2"] = Json::array();
    if (!s.out_path.empty() && !rep.code.book1.empty() && !rep.code.book2.empty()) {
        s.write(s.out_path + ".book1", write_codebook(rep.code.book1, spec.x1, n));
        s.write(s.out_path + ".book2", write_codebook(rep.code.book2, spec.x2, n));
        o.result["book1"] = s.out_path + ".book1";
        o.result["book2"] = s.out_path + ".book2";
    }
    o.code = rep.success ? kExitOk : kExitNegative;
    o.human = std::string(rep.success ? "found" : "no") + " zero-error pair: M1=" + std::to_string(rep.code.m1()) +
              " M2=" + std::to_string(rep.code.m2()) + " n=" + std::to_string(n) + "\n";
    return o;
}

Outcome do_inner_bound(Session& s, const std::string& channel, const std::string& p1s, const std::string& p2s) {
    auto spec = load_channel(s, channel);
    auto r = inner_bound(spec, load_input(s, p1s, spec.x1, "x1"), load_input(s, p2s, spec.x2, "x2"));
    Outcome o;
    o.result = to_json(r);
    bool converged = r.joint.converged && r.marg1.converged && r.marg2.converged;
    o.code = !converged ? kExitInconclusive : r.region_nonempty ? kExitOk : kExitNegative;
    o.human = "D = " + fmt(r.D) + " bits, D_hat = " + fmt(r.D_hat) + " bits; R1, R2 <= " + fmt(r.r_individual) +
              ", R1 + R2 <= " + fmt(r.r_sum) + (r.region_nonempty ? "" : " (empty)") + "\n";
    return o;
}

Outcome do_plotkin(Session&, const std::string& p, const std::vector<std::uint64_t>& search, std::uint64_t budget, int jobs) {
    Decimal d;
    try {
        d = Decimal::parse(p);
    } catch (const std::exception& e) {
        throw InputError(std::string("bad --p: ") + e.what());
    }
    Outcome o;
    o.result = Json::object();
    std::ostringstream h;
    std::optional<PlotkinBound> bound;
    try {
        bound = plotkin_xor_bound(d);
        o.result["plotkin"] = to_json(*bound);
        h << "bound " << bound->value.str() << "\n";
    } catch (const std::invalid_argument& e) {
        if (search.empty()) throw InputError(e.what());
        o.result["plotkin"] = Json{{"error", e.what()}};
    }
    if (!search.empty()) {
        auto spec = builtin_xor_mac(d.to_double());
        auto r = brute_force_search(spec, search[0], search[1], search[2], budget, jobs);
        o.result["search"] = to_json(r, spec);
        o.code = r.found ? kExitOk : r.exhaustively_none() ? kExitNegative : kExitInconclusive;
        h << "search n=" << search[0] << " M1=" << search[1] << " M2=" << search[2] << ": "
          << (r.found ? "found" : r.exhaustively_none() ? "exhaustively none" : "budget exhausted") << " (" << r.nodes
          << " nodes)\n";
    }
    o.human = h.str();
    return o;
}

Outcome do_extract(Session& s, const std::string& channel, const std::string& f1, const std::string& f2, double eta,
                   const std::string& mode) {
    auto b1 = load_book(s, f1), b2 = load_book(s, f2);
    if (b1.n != b2.n) throw InputError("codebooks have different lengths");
    ChannelSpec spec;
    if (!channel.empty()) {
        spec = load_channel(s, channel);
        if (!(b1.alphabet == spec.x1) || !(b2.alphabet == spec.x2)) throw InputError("codebook alphabets differ from the channel inputs");
    } else {
        spec.x1 = b1.alphabet;
        spec.x2 = b2.alphabet;
    }
    ExtractMode m;
    try {
        m = extract_mode_from_string(mode);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    auto r = extract_equicoupled_pair(spec, CodePair{b1.words, b2.words, b1.n}, eta, m);
    Outcome o;
    o.result = to_json(r);
    o.code = r.verified ? kExitOk : kExitNegative;
    o.human = "kept " + std::to_string(r.indices1.size()) + " x " + std::to_string(r.indices2.size()) +
              " codewords, eta achieved " + fmt(r.eta_achieved) + (r.verified ? "" : " (post-condition FAILED)") + "\n";
    return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Analyzer for deterministic omniscient-adversary two-user MACs", "omac"};
    app.require_subcommand(1);
    Session s;
    s.args = args;
    int jobs = 1;
    app.add_flag("--pretty", s.pretty, "human-readable rendering on stdout");
    app.add_option("--out", s.out_path, "write the JSON result to FILE and a manifest to FILE.manifest.json");
    app.add_option("--jobs", jobs, "worker cap")->check(CLI::PositiveNumber);

    std::string channel, p1, p2, coupling, kind, code1, code2, p, mode = "greedy";
    double scan = 0, eta = kDefaultEta, rate1 = 0, rate2 = 0;
    int budget = 32;
    std::uint64_t seed = 1, nodes = 100000000;
    std::size_t n = 0;
    std::vector<std::uint64_t> search;

    auto* classify = app.add_subcommand("classify", "capacity-region shape at an input pair or over a grid");
    classify->add_option("--channel", channel, "channel JSON file or xor:P")->required();
    auto* o1 = classify->add_option("--p1", p1, "u, comma list, or Dist JSON file");
    auto* o2 = classify->add_option("--p2", p2);
    classify->add_option("--scan", scan, "grid step over both input simplices")->excludes(o1)->excludes(o2);
    classify->add_option("--eta", eta)->check(CLI::Range(1e-6, 1.0));
    classify->add_option("--budget", budget)->check(CLI::PositiveNumber);
    classify->add_option("--seed", seed);

    auto* confusable = app.add_subcommand("confusable", "decide membership of a self-coupling in the confusability set");
    confusable->add_option("--channel", channel)->required();
    confusable->add_option("--coupling", coupling, "Dist JSON in the kind's axis layout")->required();
    confusable->add_option("--kind", kind)->required()->check(CLI::IsMember({"joint", "marg1", "marg2"}));

    auto* verify = app.add_subcommand("verify", "check a code pair for zero error");
    verify->add_option("--channel", channel)->required();
    verify->add_option("--code1", code1)->required();
    verify->add_option("--code2", code2)->required();

    auto* ach = app.add_subcommand("achieve", "random constant-composition code pair with expurgation");
    ach->add_option("--channel", channel)->required();
    ach->add_option("--p1", p1)->required();
    ach->add_option("--p2", p2)->required();
    ach->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    ach->add_option("--rate1", rate1)->required()->check(CLI::NonNegativeNumber);
    ach->add_option("--rate2", rate2)->required()->check(CLI::NonNegativeNumber);
    ach->add_option("--seed", seed);

    auto* inner = app.add_subcommand("inner-bound", "divergence exponents and the rate region they imply");
    inner->add_option("--channel", channel)->required();
    inner->add_option("--p1", p1)->required();
    inner->add_option("--p2", p2)->required();

    auto* plotkin = app.add_subcommand("plotkin", "XOR MAC product bound, optionally with exhaustive search");
    plotkin->add_option("--p", p)->required();
    plotkin->add_option("--search", search, "N M1 M2")->expected(3);
    plotkin->add_option("--budget", nodes, "node budget for --search");

    auto* extract = app.add_subcommand("extract", "equicoupled subcode pair");
    extract->add_option("--channel", channel, "optional; alphabets come from the codebooks otherwise");
    extract->add_option("--code1", code1)->required();
    extract->add_option("--code2", code2)->required();
    extract->add_option("--eta", eta)->required()->check(CLI::Range(1e-6, 1.0));
    extract->add_option("--mode", mode)->check(CLI::IsMember({"exact", "greedy"}));

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    const auto start = std::chrono::steady_clock::now();
    const std::string started = utc_now();
    Outcome o;
    try {
        if (*classify) {
            s.command = "classify";
            s.seed = seed;
            o = do_classify(s, channel, p1, p2, scan, eta, budget, jobs, seed);
        } else if (*confusable) {
            s.command = "confusable";
            o = do_confusable(s, channel, coupling, kind);
        } else if (*verify) {
            s.command = "verify";
            o = do_verify(s, channel, code1, code2);
        } else if (*ach) {
            s.command = "achieve";
            s.seed = seed;
            o = do_achieve(s, channel, p1, p2, n, rate1, rate2, seed);
        } else if (*inner) {
            s.command = "inner-bound";
            o = do_inner_bound(s, channel, p1, p2);
        } else if (*plotkin) {
            s.command = "plotkin";
            o = do_plotkin(s, p, search, nodes, jobs);
        } else if (*extract) {
            s.command = "extract";
            o = do_extract(s, channel, code1, code2, eta, mode);
        }
    } catch (const InputError& e) {
        err << dump_json(Json{{"error", e.what()}, {"exit_code", kExitUsage}}) << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << dump_json(Json{{"error", e.what()}, {"exit_code", kExitUsage}}) << "\n";
        return kExitUsage;
    }

    Json doc{{"command", s.command},
             {"tool_version", kToolVersion},
             {"exit_code", o.code},
             {"manifest", s.out_path.empty() ? Json(nullptr) : Json(s.manifest_path())},
             {"result", o.result}};
    std::string text = dump_json(doc, true) + "\n";
    try {
        if (!s.out_path.empty()) {
            s.write(s.out_path, text);
            double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            Json manifest{{"command", s.command},
                          {"arguments", s.args},
                          {"seed", s.seed ? Json(*s.seed) : Json(nullptr)},
                          {"tool_version", kToolVersion},
                          {"inputs", s.inputs},
                          {"outputs", s.outputs},
                          {"timing", {{"started_utc", started}, {"wall_seconds", wall}}}};
            std::ofstream mf(s.manifest_path(), std::ios::binary);
            if (!mf) throw InputError("cannot write '" + s.manifest_path() + "'");
            mf << dump_json(manifest, true) << "\n";
        }
    } catch (const std::exception& e) {
        err << dump_json(Json{{"error", e.what()}, {"exit_code", kExitUsage}}) << "\n";
        return kExitUsage;
    }
    if (s.pretty) out << o.human;
    else if (s.out_path.empty()) out << text;
    return o.code;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace omac::cli
