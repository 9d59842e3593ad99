#include "doctest.h"
#include "generators.hpp"

#include "cli.hpp"
#include "omac/classifier.hpp"
#include "omac/json_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace omac;
namespace fs = std::filesystem;

namespace {
const std::string kData = OMAC_DATA_DIR;

struct Ran {
    int code;
    std::string out, err;
};

Ran run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& s) {
    std::ofstream(p, std::ios::binary) << s;
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("omac_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Word w(const std::string& s) {
    Word out;
    for (char c : s) out.push_back(static_cast<Symbol>(c - '0'));
    return out;
}
}  // namespace

TEST_CASE("json text round trips bit-exactly") {
    gen::Rng r(81);
    for (int trial = 0; trial < 200; ++trial) {
        auto d = gen::dist(r, kind_axes(static_cast<Kind>(trial % 3), gen::bin(), gen::bin()), trial % 2);
        auto back = dist_from_json(parse_json(dump_json(to_json(d))));
        CHECK(back.axes() == d.axes());
        CHECK(back.values() == d.values());
        CHECK(dump_json(to_json(back)) == dump_json(to_json(d)));
    }
    auto spec = builtin_xor_mac(0.15);
    CHECK(parse_channel(serialize_channel(spec)) == spec);
    CHECK(serialize_channel(parse_channel(serialize_channel(spec))) == serialize_channel(spec));
    CHECK_THROWS_AS(parse_json("[1,"), InputError);
    CHECK(dump_json(Json(std::nan(""))) == "null");
}

TEST_CASE("verdicts and decompositions survive serialization") {
    auto half1 = Dist::over(Axis{"x1", gen::bin()}, {0.5, 0.5}), half2 = Dist::over(Axis{"x2", gen::bin()}, {0.5, 0.5});
    auto v = classify_shape(builtin_xor_mac(0.2), half1, half2, 0.1, 6);
    auto j = to_json(v);
    auto back = verdict_from_json(parse_json(dump_json(j)));
    CHECK(dump_json(to_json(back)) == dump_json(j));
    const auto& d = v.predicates[0].search.best;
    auto dd = decomposition_from_json(parse_json(dump_json(to_json(d))));
    CHECK(dd.weights == d.weights);
    CHECK(dd.mixture().values() == d.mixture().values());
    for (auto p : {GoodPredicate::simultaneous, GoodPredicate::marg1_only, GoodPredicate::marg2_only})
        CHECK(good_predicate_from_string(to_string(p)) == p);
}

TEST_CASE("codebook files") {
    std::vector<Word> book = {w("0011"), w("0101"), w("1001")};
    auto text = write_codebook(book, gen::bin(), 4);
    auto cb = read_codebook(text);
    CHECK(cb.words == book);
    CHECK(cb.n == 4);
    REQUIRE(cb.type);
    CHECK(*cb.type == std::vector<std::int64_t>{2, 2});
    CHECK(write_codebook(cb.words, cb.alphabet, cb.n) == text);
    auto mixed = read_codebook(write_codebook({w("0001"), w("0011")}, gen::bin(), 4));
    CHECK_FALSE(mixed.type);
    CHECK_THROWS_AS(read_codebook(text + "01\n"), InputError);
    CHECK_THROWS_AS(read_codebook(text + "0021\n"), InputError);
}

TEST_CASE("cli exit codes") {
    CHECK(run({"plotkin", "--p", "0.3"}).code == cli::kExitOk);
    CHECK(run({"plotkin", "--p", "0.2"}).code == cli::kExitUsage);
    CHECK(run({"plotkin", "--p", "0.3", "--search", "4", "3", "3"}).code == cli::kExitNegative);
    CHECK(run({"plotkin", "--p", "0.3", "--search", "4", "3", "3", "--budget", "5"}).code == cli::kExitInconclusive);
    CHECK(run({"nonsense"}).code == cli::kExitUsage);
    CHECK(run({"classify", "--channel", kData + "/missing.json", "--p1", "u", "--p2", "u"}).code == cli::kExitUsage);

    auto c1 = run({"classify", "--channel", kData + "/xor_p02.json", "--p1", "u", "--p2", "u", "--eta", "0.05", "--budget", "6"});
    CHECK(c1.code == cli::kExitOk);
    auto doc = parse_json(c1.out);
    CHECK(doc["result"]["case"] == 1);
    CHECK(doc["exit_code"] == 0);
    auto c5 = run({"classify", "--channel", "xor:0.3", "--p1", "u", "--p2", "u", "--eta", "0.05", "--budget", "6"});
    CHECK(c5.code == cli::kExitNegative);
    auto c3 = run({"classify", "--channel", kData + "/y_eq_x1.json", "--p1", "0.5,0.5", "--p2", "u", "--eta", "0.05", "--budget", "6"});
    CHECK(parse_json(c3.out)["result"]["case"] == 3);
}

TEST_CASE("cli verify, confusable and achieve through files") {
    auto dir = scratch("files");
    spit(dir / "a.txt", write_codebook({w("0000"), w("1111")}, gen::bin(), 4));
    spit(dir / "b.txt", write_codebook({w("0000")}, gen::bin(), 4));
    CHECK(run({"verify", "--channel", "xor:0", "--code1", (dir / "a.txt").string(), "--code2", (dir / "b.txt").string()}).code ==
          cli::kExitOk);
    auto bad = run({"verify", "--channel", "xor:0", "--code1", (dir / "a.txt").string(), "--code2", (dir / "a.txt").string()});
    CHECK(bad.code == cli::kExitNegative);
    CHECK(parse_json(bad.out)["result"].contains("tuple"));

    spit(dir / "u.json", dump_json(to_json(Dist::uniform(kind_axes(Kind::joint, gen::bin(), gen::bin())))));
    CHECK(run({"confusable", "--channel", "xor:0.3", "--coupling", (dir / "u.json").string(), "--kind", "joint"}).code == cli::kExitOk);
    CHECK(run({"confusable", "--channel", "xor:0.2", "--coupling", (dir / "u.json").string(), "--kind", "joint"}).code ==
          cli::kExitNegative);
    CHECK(run({"confusable", "--channel", "xor:0.2", "--coupling", (dir / "u.json").string(), "--kind", "marg1"}).code ==
          cli::kExitUsage);

    auto out = (dir / "ach.json").string();
    auto a = run({"--out", out, "achieve", "--channel", kData + "/xor_p015.json", "--p1", "u", "--p2", "u", "--n", "32", "--rate1",
                  "0.02", "--rate2", "0.02", "--seed", "3"});
    CHECK(a.code == cli::kExitOk);
    CHECK(fs::exists(out + ".manifest.json"));
    CHECK(fs::exists(out + ".book1"));
    auto manifest = parse_json(slurp(out + ".manifest.json"));
    CHECK(manifest["seed"] == 3);
    CHECK(manifest["tool_version"] == cli::kToolVersion);
    CHECK(run({"verify", "--channel", kData + "/xor_p015.json", "--code1", out + ".book1", "--code2", out + ".book2"}).code ==
          cli::kExitOk);
    CHECK(run({"extract", "--code1", out + ".book1", "--code2", out + ".book2", "--eta", "0.2"}).code == cli::kExitOk);
}

TEST_CASE("cli outputs are byte-identical across runs") {
    std::vector<std::string> args = {"achieve", "--channel", "xor:0.15", "--p1", "u", "--p2", "u", "--n",
                                     "32",      "--rate1",   "0.05",     "--rate2", "0.05", "--seed", "11"};
    auto d1 = scratch("det1"), d2 = scratch("det2");
    auto strip = [](std::string s) {
        auto j = parse_json(s);
        j.erase("manifest");
        return dump_json(j);
    };
    auto r1 = run(args), r2 = run(args);
    CHECK(strip(r1.out) == strip(r2.out));
    auto with_out = [&](const fs::path& d) {
        auto a = args;
        a.insert(a.begin(), {"--out", (d / "r.json").string()});
        run(a);
        return slurp(d / "r.json.book1") + slurp(d / "r.json.book2");
    };
    CHECK(with_out(d1) == with_out(d2));
    CHECK(cli::fnv1a_hex("") == "cbf29ce484222325");
    CHECK(cli::fnv1a_hex("a") == "af63dc4c8601ec8c");
}
