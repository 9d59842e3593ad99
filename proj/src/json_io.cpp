#include "omac/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace omac {

namespace {

void emit(const Json& j, bool pretty, int depth, std::string& out) {
    auto newline = [&](int d) {
        if (!pretty) return;
        out += '\n';
        out.append(static_cast<std::size_t>(2 * d), ' ');
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += Json(k).dump();
                out += pretty ? ": " : ":";
                emit(v, pretty, depth + 1, out);
            }
            newline(depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // numeric arrays stay on one line even when pretty
            bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += pretty && flat ? ", " : ",";
                first = false;
                if (!flat) newline(depth + 1);
                emit(v, pretty, depth + 1, out);
            }
            if (!flat) newline(depth);
            out += ']';
            return;
        }
        case Json::value_t::number_float: {
            double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            return;
        }
        default:
            out += j.dump();
    }
}

const Json& field(const Json& j, const char* name) {
    if (!j.is_object()) throw InputError(std::string("expected an object holding '") + name + "'");
    auto it = j.find(name);
    if (it == j.end()) throw InputError(std::string("missing field '") + name + "'");
    return *it;
}

Alphabet alphabet_from_json(const Json& j, const std::string& what) {
    if (!j.is_array()) throw InputError(what + ": expected an array of symbols");
    std::vector<std::string> s;
    for (const auto& e : j) {
        if (!e.is_string()) throw InputError(what + ": symbols must be strings");
        s.push_back(e.get<std::string>());
    }
    try {
        return Alphabet(std::move(s));
    } catch (const std::invalid_argument& e) {
        throw InputError(what + ": " + e.what());
    }
}

Symbol symbol_in(const Alphabet& a, const std::string& s, const std::string& what) {
    if (!a.contains(s)) throw InputError("symbol '" + s + "' not in alphabet " + what);
    return a.index_of(s);
}

Decimal decimal_from_json(const Json& j, const std::string& what) {
    try {
        if (j.is_string()) return Decimal::parse(j.get<std::string>());
        if (j.is_number()) return Decimal::from_double(j.get<double>());
    } catch (const std::exception& e) {
        throw InputError(what + ": " + e.what());
    }
    throw InputError(what + ": expected a number");
}

ConstraintSet constraints_from_json(const Json& j, const Alphabet& a, const std::string& what) {
    if (!j.is_array()) throw InputError(what + ": expected an array of constraints");
    std::vector<LinearConstraint> rows;
    for (const auto& r : j) {
        LinearConstraint c;
        c.coeffs.assign(a.size(), Decimal{});
        const auto& coeffs = field(r, "coeffs");
        if (!coeffs.is_object()) throw InputError(what + ": coeffs must map symbols to numbers");
        for (const auto& [sym, v] : coeffs.items()) c.coeffs[symbol_in(a, sym, what)] = decimal_from_json(v, what);
        std::string sense = field(r, "sense").get<std::string>();
        if (sense == "<=") c.sense = lp::Sense::le;
        else if (sense == ">=") c.sense = lp::Sense::ge;
        else if (sense == "=" || sense == "==") c.sense = lp::Sense::eq;
        else throw InputError(what + ": unknown sense '" + sense + "'");
        c.rhs = decimal_from_json(field(r, "rhs"), what);
        rows.push_back(std::move(c));
    }
    return ConstraintSet(a, std::move(rows));
}

Json constraints_to_json(const ConstraintSet& c) {
    Json out = Json::array();
    for (const auto& r : c.rows()) {
        Json coeffs = Json::object();
        for (std::size_t i = 0; i < r.coeffs.size(); ++i)
            if (r.coeffs[i].mantissa != 0) coeffs[c.alphabet()[i]] = r.coeffs[i].to_double();
        const char* sense = r.sense == lp::Sense::le ? "<=" : r.sense == lp::Sense::ge ? ">=" : "=";
        out.push_back(Json{{"coeffs", coeffs}, {"sense", sense}, {"rhs", r.rhs.to_double()}});
    }
    return out;
}

std::string word_text(const Word& w, const Alphabet& a, const std::string& sep) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += sep;
        s += a[w[i]];
    }
    return s;
}

Json words_json(const std::vector<Word>& ws, const std::vector<const Alphabet*>& alph) {
    Json out = Json::array();
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const Alphabet& a = *alph[std::min(i, alph.size() - 1)];
        bool single = std::all_of(a.symbols().begin(), a.symbols().end(), [](const std::string& s) { return s.size() == 1; });
        out.push_back(word_text(ws[i], a, single ? "" : ","));
    }
    return out;
}

std::vector<const Alphabet*> kind_alphabets(Kind k, const ChannelSpec& spec) {
    switch (k) {
        case Kind::joint: return {&spec.x1, &spec.x1, &spec.x2, &spec.x2};
        case Kind::marg1: return {&spec.x1, &spec.x1, &spec.x2};
        case Kind::marg2: return {&spec.x1, &spec.x2, &spec.x2};
    }
    return {};
}

Json vec_json(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

}  // namespace

std::string dump_json(const Json& j, bool pretty) {
    std::string out;
    emit(j, pretty, 0, out);
    return out;
}

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

Json to_json(const Tensor& t) {
    Json axes = Json::array();
    for (const auto& a : t.axes()) axes.push_back(Json{{"name", a.name}, {"symbols", a.alphabet.symbols()}});
    return Json{{"axes", axes}, {"values", vec_json(t.values())}};
}

Tensor tensor_from_json(const Json& j) {
    std::vector<Axis> axes;
    const auto& ja = field(j, "axes");
    if (!ja.is_array()) throw InputError("axes must be an array");
    for (const auto& a : ja) {
        if (!field(a, "name").is_string()) throw InputError("axis name must be a string");
        auto name = field(a, "name").get<std::string>();
        axes.push_back(Axis{name, alphabet_from_json(field(a, "symbols"), "axis " + name)});
    }
    const auto& jv = field(j, "values");
    if (!jv.is_array()) throw InputError("values must be an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(jv.size()));
    for (std::size_t i = 0; i < jv.size(); ++i) {
        if (!jv[i].is_number()) throw InputError("values must be numbers");
        v[static_cast<Eigen::Index>(i)] = jv[i].get<double>();
    }
    try {
        return Tensor(std::move(axes), std::move(v));
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

Dist dist_from_json(const Json& j) {
    Tensor t = tensor_from_json(j);
    try {
        return Dist(t);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

Json to_json(const ChannelSpec& spec) {
    Json w = Json::object();
    for (std::size_t a = 0; a < spec.x1.size(); ++a)
        for (std::size_t b = 0; b < spec.x2.size(); ++b)
            for (std::size_t s = 0; s < spec.s.size(); ++s)
                w[spec.x1[a] + "," + spec.x2[b] + "," + spec.s[s]] =
                    spec.y[spec.output(static_cast<Symbol>(a), static_cast<Symbol>(b), static_cast<Symbol>(s))];
    return Json{{"X1", spec.x1.symbols()},
                {"X2", spec.x2.symbols()},
                {"S", spec.s.symbols()},
                {"Y", spec.y.symbols()},
                {"W", w},
                {"lambda1", constraints_to_json(spec.lambda1)},
                {"lambda2", constraints_to_json(spec.lambda2)},
                {"lambda", constraints_to_json(spec.lambda)}};
}

std::string serialize_channel(const ChannelSpec& spec) { return dump_json(to_json(spec), true); }

ChannelParse parse_channel_report(std::string_view text) {
    Json j = parse_json(text);
    if (!j.is_object()) throw InputError("channel document must be a JSON object");
    ChannelSpec spec;
    spec.x1 = alphabet_from_json(field(j, "X1"), "X1");
    spec.x2 = alphabet_from_json(field(j, "X2"), "X2");
    spec.s = alphabet_from_json(field(j, "S"), "S");
    spec.y = alphabet_from_json(field(j, "Y"), "Y");
    const auto& w = field(j, "W");
    if (!w.is_object()) throw InputError("W must map \"x1,x2,s\" keys to outputs");
    const std::size_t cells = spec.x1.size() * spec.x2.size() * spec.s.size();
    std::vector<int> table(cells, -1);
    for (const auto& [key, val] : w.items()) {
        std::vector<std::string> parts;
        std::stringstream ss(key);
        for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
        if (parts.size() != 3) throw InputError("W key '" + key + "' must have three comma-joined symbols");
        if (!val.is_string()) throw InputError("W value for '" + key + "' must be a symbol string");
        std::size_t idx = (static_cast<std::size_t>(symbol_in(spec.x1, parts[0], "X1")) * spec.x2.size() +
                           symbol_in(spec.x2, parts[1], "X2")) *
                              spec.s.size() +
                          symbol_in(spec.s, parts[2], "S");
        table[idx] = symbol_in(spec.y, val.get<std::string>(), "Y");
    }
    ChannelParse out;
    bool total = std::all_of(table.begin(), table.end(), [](int v) { return v >= 0; });
    if (total) {
        spec.w.assign(table.begin(), table.end());
    }
    auto opt_constraints = [&](const char* name, const Alphabet& a) {
        auto it = j.find(name);
        if (it == j.end()) return ConstraintSet(a, {});
        return constraints_from_json(*it, a, name);
    };
    spec.lambda1 = opt_constraints("lambda1", spec.x1);
    spec.lambda2 = opt_constraints("lambda2", spec.x2);
    spec.lambda = opt_constraints("lambda", spec.s);
    out.report = validate_channel(spec);
    if (out.report.empty()) out.spec = std::move(spec);
    return out;
}

ChannelSpec parse_channel(std::string_view text) {
    auto r = parse_channel_report(text);
    if (!r.spec) {
        std::string msg;
        for (const auto& s : r.report) msg += (msg.empty() ? "" : "; ") + s;
        throw InputError(msg);
    }
    return *r.spec;
}

std::string write_codebook(const std::vector<Word>& words, const Alphabet& alphabet, std::size_t n) {
    bool single = std::all_of(alphabet.symbols().begin(), alphabet.symbols().end(),
                              [](const std::string& s) { return s.size() == 1; });
    std::string sep = single ? "" : ",";
    Json type = nullptr;
    if (!words.empty()) {
        std::vector<std::int64_t> c0(alphabet.size(), 0);
        for (Symbol s : words[0]) ++c0.at(s);
        bool constant = std::all_of(words.begin(), words.end(), [&](const Word& w) {
            std::vector<std::int64_t> c(alphabet.size(), 0);
            for (Symbol s : w) ++c.at(s);
            return c == c0;
        });
        if (constant) type = c0;
    }
    Json header{{"n", n}, {"alphabet", alphabet.symbols()}, {"type", type}, {"separator", sep}};
    std::string out = dump_json(header) + "\n";
    for (const auto& w : words) {
        if (w.size() != n) throw std::invalid_argument("write_codebook: codeword length differs from n");
        out += word_text(w, alphabet, sep) + "\n";
    }
    return out;
}

CodebookFile read_codebook(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) throw InputError("codebook: missing header line");
    Json h = parse_json(line);
    CodebookFile f;
    if (!field(h, "n").is_number_unsigned()) throw InputError("codebook: n must be a nonnegative integer");
    f.n = field(h, "n").get<std::size_t>();
    f.alphabet = alphabet_from_json(field(h, "alphabet"), "codebook alphabet");
    std::string sep;
    if (auto it = h.find("separator"); it != h.end()) sep = it->get<std::string>();
    if (sep.empty() && std::any_of(f.alphabet.symbols().begin(), f.alphabet.symbols().end(),
                                   [](const std::string& s) { return s.size() != 1; }))
        throw InputError("codebook: multi-character symbols need a separator");
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Word w;
        if (sep.empty()) {
            for (char c : line) w.push_back(symbol_in(f.alphabet, std::string(1, c), "of the codebook"));
        } else {
            std::size_t pos = 0;
            for (;;) {
                auto next = line.find(sep, pos);
                w.push_back(symbol_in(f.alphabet, line.substr(pos, next - pos), "of the codebook"));
                if (next == std::string::npos) break;
                pos = next + sep.size();
            }
        }
        if (w.size() != f.n) throw InputError("codebook: word '" + line + "' does not have length n");
        f.words.push_back(std::move(w));
    }
    if (auto it = h.find("type"); it != h.end() && !it->is_null()) {
        auto t = it->get<std::vector<std::int64_t>>();
        if (t.size() != f.alphabet.size()) throw InputError("codebook: type length differs from alphabet size");
        for (const auto& w : f.words) {
            std::vector<std::int64_t> c(f.alphabet.size(), 0);
            for (Symbol s : w) ++c[s];
            if (c != t) throw InputError("codebook: a word does not match the declared type");
        }
        f.type = t;
    }
    return f;
}

Json to_json(const ConfusabilityCertificate& c) {
    Json j{{"kind", to_string(c.kind)},
           {"feasible", c.feasible},
           {"slack", c.slack},
           {"tolerance", kFeasibilityTol}};
    j["witness"] = c.witness ? to_json(*c.witness) : Json(nullptr);
    return j;
}

Json to_json(const ZeroErrorReport& r, const ChannelSpec& spec) {
    Json j{{"zero_error", r.zero_error}, {"tolerance", 0}};
    if (r.zero_error) return j;
    j["kind"] = to_string(r.kind);
    j["indices"] = {{"i1", r.indices[0]}, {"i2", r.indices[1]}, {"j1", r.indices[2]}, {"j2", r.indices[3]}};
    j["tuple"] = words_json(r.tuple, kind_alphabets(r.kind, spec));
    j["s1"] = words_json({r.s1}, {&spec.s})[0];
    j["s2"] = words_json({r.s2}, {&spec.s})[0];
    return j;
}

Json to_json(const GoodDecomposition& d) {
    Json factors = Json::array();
    for (const auto& [a, b] : d.factors) factors.push_back(Json{{"p1", to_json(a)}, {"p2", to_json(b)}});
    return Json{{"kind", to_string(d.kind)},
                {"member", d.member},
                {"weights", d.weights},
                {"factors", factors},
                {"residual", d.residual},
                {"net_slack", d.net_slack},
                {"distance_lower_bound", d.distance_lower_bound()},
                {"eta", d.eta},
                {"tolerance", d.tolerance}};
}

GoodDecomposition decomposition_from_json(const Json& j) {
    GoodDecomposition d;
    try {
        d.kind = kind_from_string(field(j, "kind").get<std::string>());
        d.member = field(j, "member").get<bool>();
        d.weights = field(j, "weights").get<std::vector<double>>();
        for (const auto& f : field(j, "factors"))
            d.factors.emplace_back(dist_from_json(field(f, "p1")), dist_from_json(field(f, "p2")));
        d.residual = field(j, "residual").get<double>();
        d.net_slack = field(j, "net_slack").get<double>();
        d.eta = field(j, "eta").get<double>();
        d.tolerance = field(j, "tolerance").get<double>();
    } catch (const Json::exception& e) {
        throw InputError(std::string("decomposition: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("decomposition: ") + e.what());
    }
    if (d.weights.size() != d.factors.size()) throw InputError("decomposition: weights and factors differ in length");
    return d;
}

Json to_json(const CogoodCertificate& c) {
    return Json{{"kind", to_string(c.kind)},     {"q", to_json(c.q)},       {"inner", c.inner},
                {"eps_prime", c.eps_prime},       {"grid_margin", c.grid_margin}, {"grid_step", c.grid_step},
                {"eta", c.eta}};
}

std::string to_string(GoodPredicate p) {
    switch (p) {
        case GoodPredicate::simultaneous: return "G";
        case GoodPredicate::marg1_only: return "G1\\K1";
        case GoodPredicate::marg2_only: return "G2\\K2";
    }
    return "?";
}

GoodPredicate good_predicate_from_string(const std::string& s) {
    if (s == "G") return GoodPredicate::simultaneous;
    if (s == "G1\\K1") return GoodPredicate::marg1_only;
    if (s == "G2\\K2") return GoodPredicate::marg2_only;
    throw InputError("unknown predicate '" + s + "'");
}

Json to_json(const GoodSearchResult& r) {
    Json margins = Json::array();
    for (double m : r.margins) margins.push_back(m < 0 ? Json(nullptr) : Json(m));
    return Json{{"predicate", to_string(r.predicate)},
                {"found", r.found},
                {"margin", r.margin},
                {"margins_l1", margins},
                {"tolerance", kFeasibilityTol},
                {"evaluated", r.evaluated},
                {"seed", r.seed},
                {"eta", r.eta},
                {"candidate", to_json(r.best)}};
}

Json to_json(const ShapeVerdict& v) {
    Json preds = Json::array();
    for (const auto& p : v.predicates)
        preds.push_back(Json{{"predicate", to_string(p.predicate)},
                             {"verdict", p.verdict},
                             {"margin", p.margin},
                             {"margin_tolerance", 2 * v.eta},
                             {"boundary_uncertain", p.boundary_uncertain},
                             {"search", to_json(p.search)}});
    return Json{{"case", v.shape_case},
                {"eta", v.eta},
                {"boundary_uncertain", v.boundary_uncertain},
                {"p1", to_json(v.p1)},
                {"p2", to_json(v.p2)},
                {"predicates", preds}};
}

ShapeVerdict verdict_from_json(const Json& j) {
    ShapeVerdict v;
    try {
        v.shape_case = field(j, "case").get<int>();
        v.eta = field(j, "eta").get<double>();
        v.boundary_uncertain = field(j, "boundary_uncertain").get<bool>();
        v.p1 = dist_from_json(field(j, "p1"));
        v.p2 = dist_from_json(field(j, "p2"));
        const auto& preds = field(j, "predicates");
        if (!preds.is_array() || preds.size() != 3) throw InputError("verdict: expected three predicates");
        for (std::size_t i = 0; i < 3; ++i) {
            auto& p = v.predicates[i];
            p.predicate = good_predicate_from_string(field(preds[i], "predicate").get<std::string>());
            p.verdict = field(preds[i], "verdict").get<bool>();
            p.margin = field(preds[i], "margin").get<double>();
            p.boundary_uncertain = field(preds[i], "boundary_uncertain").get<bool>();
            const auto& s = field(preds[i], "search");
            p.search.predicate = good_predicate_from_string(field(s, "predicate").get<std::string>());
            const auto& ml = field(s, "margins_l1");
            if (!ml.is_array() || ml.size() != 3) throw InputError("verdict: expected three search margins");
            for (std::size_t m = 0; m < 3; ++m) p.search.margins[m] = ml[m].is_null() ? -1.0 : ml[m].get<double>();
            p.search.found = field(s, "found").get<bool>();
            p.search.margin = field(s, "margin").get<double>();
            p.search.evaluated = field(s, "evaluated").get<int>();
            p.search.seed = field(s, "seed").get<std::uint64_t>();
            p.search.eta = field(s, "eta").get<double>();
            p.search.best = decomposition_from_json(field(s, "candidate"));
        }
    } catch (const Json::exception& e) {
        throw InputError(std::string("verdict: ") + e.what());
    }
    return v;
}

Json to_json(const InputScan& s) {
    Json rows = Json::array();
    for (const auto& v : s.table)
        rows.push_back(Json{{"p1", vec_json(v.p1.values())},
                            {"p2", vec_json(v.p2.values())},
                            {"case", v.shape_case},
                            {"boundary_uncertain", v.boundary_uncertain}});
    Json best = Json::array();
    for (auto i : s.best) best.push_back(to_json(s.table[i]));
    return Json{{"best_case", s.best_case}, {"best_cases", s.best_cases}, {"rows", rows}, {"best", best}};
}

Json to_json(const KlMinimum& m) {
    return Json{{"kind", to_string(m.kind)},   {"value_bits", m.value}, {"gap", m.gap},
                {"certified_lower", m.value - m.gap}, {"iterations", m.iterations}, {"converged", m.converged},
                {"minimizer", to_json(m.minimizer)}};
}

Json to_json(const InnerBoundReport& r) {
    double tol = std::max({r.joint.gap, r.marg1.gap, r.marg2.gap});
    return Json{{"applicable", r.applicable},
                {"D", r.D},
                {"D_hat", r.D_hat},
                {"r_individual_max", r.r_individual},
                {"r_sum_max", r.r_sum},
                {"tolerance", tol},
                {"region_nonempty", r.region_nonempty},
                {"joint", to_json(r.joint)},
                {"marg1", to_json(r.marg1)},
                {"marg2", to_json(r.marg2)}};
}

Json to_json(const AchieveReport& r) {
    Json chunks = Json::array();
    for (std::size_t l = 0; l + 1 < r.plan.bounds.size(); ++l)
        chunks.push_back(Json{{"begin", r.plan.bounds[l]},
                              {"end", r.plan.bounds[l + 1]},
                              {"weight", r.plan.weights[l]},
                              {"p1", vec_json(r.plan.factors[l].first.values())},
                              {"p2", vec_json(r.plan.factors[l].second.values())}});
    return Json{{"success", r.success},
                {"zero_error", r.zero_error},
                {"n", r.plan.n()},
                {"chunks", chunks},
                {"target_m1", r.target_m1},
                {"target_m2", r.target_m2},
                {"sampled1", r.sampled1},
                {"sampled2", r.sampled2},
                {"filtered1", r.filtered1},
                {"filtered2", r.filtered2},
                {"expurgation", {{"rounds", r.expurgation.rounds},
                                 {"removed1", r.expurgation.removed1},
                                 {"removed2", r.expurgation.removed2}}},
                {"m1", r.code.m1()},
                {"m2", r.code.m2()},
                {"rate1", r.rate1},
                {"rate2", r.rate2},
                {"tolerance", 0}};
}

Json to_json(const EquicoupledReport& r) {
    return Json{{"kind", to_string(r.kind)},
                {"method", to_string(r.method)},
                {"indices1", r.indices1},
                {"indices2", r.indices2},
                {"eta", r.eta},
                {"eta_achieved", r.eta_achieved},
                {"verified", r.verified},
                {"p_star", r.p_star.size() ? to_json(r.p_star) : Json(nullptr)}};
}

Json to_json(const PlotkinBound& b) {
    return Json{{"p", b.p.str()}, {"eps", b.eps.str()}, {"bound", b.value.str()}, {"bound_float", b.as_double()},
                {"tolerance", 0}};
}

Json to_json(const BruteForceResult& r, const ChannelSpec& spec) {
    Json j{{"found", r.found},
           {"exhaustive", r.exhaustive},
           {"exhaustively_none", r.exhaustively_none()},
           {"n", r.n},
           {"m1", r.m1},
           {"m2", r.m2},
           {"nodes", r.nodes},
           {"budget", r.budget},
           {"canonicalization", r.canonicalization},
           {"tolerance", 0}};
    if (r.code) {
        j["book1"] = words_json(r.code->book1, {&spec.x1});
        j["book2"] = words_json(r.code->book2, {&spec.x2});
    }
    return j;
}

}  // namespace omac
