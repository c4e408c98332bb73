#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "doctest.h"
#include "wexc/cli.hpp"
#include "wexc/identities.hpp"

using namespace wexc;
using nlohmann::json;

namespace {

const std::string src_dir = WEXC_SOURCE_DIR;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in, "cannot read " << path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int rc;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  int rc = run_cli(args, o, e);
  return {rc, o.str(), e.str()};
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> v;
  for (std::string w; in >> w;) v.push_back(w);
  return v;
}

// enough of JSON Schema draft 7 for the shipped schema
class Validator {
 public:
  explicit Validator(json root) : root_(std::move(root)) {}
  bool valid(const json& x, std::string* why = nullptr) const { return check(root_, x, "$", why); }

 private:
  json root_;

  const json& resolve(const json& s) const {
    if (!s.contains("$ref")) return s;
    std::string ref = s["$ref"];
    const std::string pre = "#/definitions/";
    REQUIRE(ref.rfind(pre, 0) == 0);
    return resolve(root_["definitions"][ref.substr(pre.size())]);
  }

  static bool type_ok(const std::string& t, const json& x) {
    if (t == "object") return x.is_object();
    if (t == "array") return x.is_array();
    if (t == "string") return x.is_string();
    if (t == "integer") return x.is_number_integer();
    if (t == "number") return x.is_number();
    if (t == "boolean") return x.is_boolean();
    if (t == "null") return x.is_null();
    return false;
  }

  bool fail(std::string* why, const std::string& path, const std::string& msg) const {
    if (why) *why = path + ": " + msg;
    return false;
  }

  bool check(const json& s0, const json& x, const std::string& path, std::string* why) const {
    const json& s = resolve(s0);
    if (s.contains("type")) {
      bool ok = false;
      if (s["type"].is_array()) {
        for (auto& t : s["type"]) ok |= type_ok(t, x);
      } else {
        ok = type_ok(s["type"], x);
      }
      if (!ok) return fail(why, path, "type " + s["type"].dump() + " expected, got " + x.dump().substr(0, 60));
    }
    if (s.contains("const") && s["const"] != x) return fail(why, path, "const " + s["const"].dump());
    if (s.contains("enum") && std::find(s["enum"].begin(), s["enum"].end(), x) == s["enum"].end())
      return fail(why, path, "not in enum");
    if (s.contains("pattern") && x.is_string() &&
        !std::regex_search(x.get<std::string>(), std::regex(s["pattern"].get<std::string>())))
      return fail(why, path, "pattern mismatch: " + x.get<std::string>());
    if (s.contains("minimum") && x.is_number() && x.get<double>() < s["minimum"].get<double>())
      return fail(why, path, "below minimum");
    if (x.is_object()) {
      for (auto& r : s.value("required", json::array()))
        if (!x.contains(r.get<std::string>())) return fail(why, path, "missing " + r.get<std::string>());
      auto props = s.value("properties", json::object());
      for (auto& [k, v] : x.items()) {
        if (props.contains(k)) {
          if (!check(props[k], v, path + "." + k, why)) return false;
        } else if (s.contains("additionalProperties") && s["additionalProperties"] == false) {
          return fail(why, path, "unexpected key " + k);
        }
      }
    }
    if (x.is_array()) {
      if (s.contains("minItems") && x.size() < s["minItems"].get<size_t>()) return fail(why, path, "too few items");
      if (s.contains("maxItems") && x.size() > s["maxItems"].get<size_t>()) return fail(why, path, "too many items");
      if (s.contains("items")) {
        for (size_t i = 0; i < x.size(); ++i) {
          const json& is = s["items"].is_array() ? s["items"][std::min(i, s["items"].size() - 1)] : s["items"];
          if (!check(is, x[i], path + "[" + std::to_string(i) + "]", why)) return false;
        }
      }
    }
    if (s.contains("anyOf")) {
      bool any = false;
      for (auto& alt : s["anyOf"]) any |= check(alt, x, path, nullptr);
      if (!any) return fail(why, path, "no anyOf branch matches");
    }
    if (s.contains("oneOf")) {
      int n = 0;
      for (auto& alt : s["oneOf"]) n += check(alt, x, path, nullptr);
      if (n != 1) return fail(why, path, std::to_string(n) + " oneOf branches match");
    }
    return true;
  }
};

Validator schema() { return Validator(json::parse(slurp(src_dir + "/tools/wexc.schema.json"))); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("root example") {
    auto r = run({"root", "A2", "--json"});
    REQUIRE(r.rc == 0);
    auto j = json::parse(r.out);
    CHECK(j["h"] == 3);
    CHECK(j["hdual"] == 3);
    CHECK(j["lacety"] == 1);
    CHECK(j["positive_roots"] == 3);
    CHECK(r.out.find("{\n  \"h\": 3,\n  \"hdual\": 3,\n  \"lacety\": 1,\n  \"positive_roots\": 3,") == 0);
    auto g = json::parse(run({"root", "G2", "--json"}).out);
    CHECK(g["h"] == 6);
    CHECK(g["hdual"] == 4);
    CHECK(g["lacety"] == 3);
  }

  TEST_CASE("exceptional example: sl4 f2 has u = 2 only") {
    auto r = run({"exceptional", "sl", "--n", "4", "--partition", "2,2", "--json"});
    REQUIRE(r.rc == 0);
    auto j = json::parse(r.out);
    REQUIRE(!j["rows"].empty());
    for (auto& row : j["rows"]) CHECK(row["exceptional"] == (row["u"] == 2));
    CHECK(j["phi"] == 2);
    auto wide = json::parse(run({"exceptional", "sl", "--n", "4", "--partition", "2,2", "--umax", "4", "--json"}).out);
    for (auto& row : wide["rows"]) CHECK(row["exceptional"] == (row["u"] == 2));
    CHECK(wide["rows"].size() == 3);
  }

  TEST_CASE("schema validation") {
    auto V = schema();
    std::vector<std::string> cmds = {
        "root A2",
        "root G2",
        "orbit so --n 8 --partition 3,2,2,1",
        "orbit G2 --orbit short-root",
        "admissible A2 --p 4 --u 3",
        "char sl --n 3 --partition 2,1 --p 3 --u 2 --order 6",
        "extra-factor sl --n 4 --partition 2,2 --p 5 --u 2 --order 4",
        "extra-factor G2 --orbit short-root --p 5 --u 2 --order 4",
        "exceptional sl --n 4 --partition 2,2",
        "exceptional so --n 8 --partition 3,2,2,1",
        "check strange sl --n 3 --partition 2,1 --p 3 --u 2",
        "check modular --order 20",
        "check triple-product --order 12",
        "check det-identity sl --n 4 --partition 2,2 --order 6",
        "principal-w A1 --p 3 --u 4 --order 6",
    };
    for (auto& c : cmds) {
      auto args = split_ws(c);
      args.push_back("--json");
      auto r = run(args);
      CAPTURE(c);
      REQUIRE(r.rc == 0);
      std::string why;
      CHECK_MESSAGE(V.valid(json::parse(r.out), &why), why);
    }
    auto s = run({"scan", "sp", "--n", "6", "--json"});
    REQUIRE(s.rc == 0);
    std::istringstream lines(s.out);
    int n = 0;
    for (std::string line; std::getline(lines, line); ++n) {
      std::string why;
      CHECK_MESSAGE(V.valid(json::parse(line), &why), why);
    }
    CHECK(n > 3);
    // the validator does reject things
    auto j = json::parse(run({"root", "A2", "--json"}).out);
    CHECK(V.valid(j));
    j["form_scale"] = 0.5;
    CHECK(!V.valid(j));
    j = json::parse(run({"principal-w", "A1", "--p", "2", "--u", "5", "--order", "3", "--json"}).out);
    j["modules"][0]["chi"]["terms"][0][3] = "1";
    CHECK(!V.valid(j));
    CHECK(!V.valid(json{{"command", "root"}}));
  }

  TEST_CASE("golden fixtures") {
    std::ifstream man(src_dir + "/tests/golden/manifest.tsv");
    REQUIRE(man);
    int n = 0;
    for (std::string line; std::getline(man, line);) {
      if (line.empty() || line[0] == '#') continue;
      auto tab = line.find('\t');
      std::string name = line.substr(0, tab);
      auto r = run(split_ws(line.substr(tab + 1)));
      CAPTURE(name);
      CHECK(r.rc == 0);
      CHECK(r.out == slurp(src_dir + "/tests/golden/" + name));
      ++n;
    }
    CHECK(n >= 6);
  }

  TEST_CASE("char output satisfies the sl3 minimal character identity") {
    auto r = run({"char", "sl", "--n", "3", "--partition", "2,1", "--p", "3", "--u", "2", "--order", "8", "--json"});
    REQUIRE(r.rc == 0);
    auto j = json::parse(r.out);
    auto d = sl3_minimal_orbit();
    auto Ms = sl3_minimal_mp(3);
    REQUIRE(!Ms.empty());
    int checked = 0;
    for (auto& w : j["weights"]) {
      FinVec lam;
      for (auto& x : w["lam"]) lam.push_back(Rat(x.get<std::string>()));
      for (auto& L : Ms) {
        if (L.lam != lam) continue;
        Fraction chi;
        chi.num = series_from_json(w["chi"]["numerator"]);
        for (auto& b : w["chi"]["binomials"]) {
          std::vector<Rat> v;
          for (auto& x : b) v.push_back(Rat(x.get<std::string>()));
          chi.bins.push_back(v);
        }
        // the serialization is the library's
        auto cb = ep_character(L, d, 8);
        CHECK(chi.num.serialize() == cb.chi.num.serialize());
        CHECK(chi.bins == cb.chi.bins);
        auto B = recover_numerator(d, chi, 8);
        auto c = sl3_character_identity(L, 6, &B);
        CHECK_MESSAGE(c.equal, c.detail);
        ++checked;
      }
    }
    CHECK(checked == int(Ms.size()));
  }

  TEST_CASE("golden extra factors carry the closed forms") {
    auto sl3 = json::parse(slurp(src_dir + "/tests/golden/sl3_minimal_extra_factor_p5_u2.json"));
    auto Ms = sl3_minimal_mp(5);
    int seen = 0;
    for (auto& w : sl3["weights"]) {
      FinVec lam;
      for (auto& x : w["lam"]) lam.push_back(Rat(x.get<std::string>()));
      for (auto& L : Ms)
        if (L.lam == lam) {
          auto s = series_from_json(w["extra_factor"]["numerator"]);
          CHECK(w["extra_factor"]["binomials"].empty());
          CHECK(same_series(s, QSeries::monomial(1, 0, rat(-3, 2), {0})));
          ++seen;
        }
    }
    CHECK(seen == int(Ms.size()));
    auto sl4 = json::parse(slurp(src_dir + "/tests/golden/sl4_f2_extra_factor_p5_u2.json"));
    CHECK(sl4["closed_form"] == true);
    int nz = 0;
    for (auto& w : sl4["weights"])
      if (!w["vanishes"]) {
        CHECK(w["closed_form_sign"].is_number_integer());
        ++nz;
      }
    CHECK(nz > 0);
  }

  TEST_CASE("exit codes and hints") {
    for (auto args : std::vector<std::vector<std::string>>{
             {},
             {"frobnicate"},
             {"root", "X9"},
             {"root", "sl"},
             {"root", "A2", "--no-such-flag"},
             {"orbit", "sl", "--n", "4", "--partition", "3,2"},
             {"orbit", "sp", "--n", "4", "--partition", "3,1"},
             {"orbit", "G2", "--orbit", "tiny"},
             {"orbit", "G2", "--partition", "2,1"},
             {"char", "sl", "--n", "3", "--partition", "2,1", "--p", "3"},
             {"scan", "sl", "--n", "20"},
             {"char", "sl", "--n", "3", "--partition", "2,1", "--p", "3", "--u", "2", "--order", "0"},
             {"exceptional", "sl", "--n", "4", "--partition", "2,2", "--budget", "abc"}}) {
      auto r = run(args);
      CAPTURE(args.size() ? args[0] : "");
      CHECK(r.rc == 2);
      CHECK(r.err.find("--help") != std::string::npos);
    }
    // domain errors
    auto bad_level = run({"admissible", "A2", "--p", "2", "--u", "1"});
    CHECK(bad_level.rc == 1);
    CHECK(bad_level.err.find("error:") == 0);
    auto big = run({"exceptional", "so", "--n", "8", "--partition", "3,2,2,1", "--budget", "10"});
    CHECK(big.rc == 1);
    CHECK(big.err.find("scan too large") != std::string::npos);
    // a check whose precondition fails
    CHECK(run({"check", "strange", "sl", "--n", "3", "--partition", "2,1", "--p", "5", "--u", "2"}).rc == 1);
    CHECK(run({"--help"}).rc == 0);
  }

  TEST_CASE("config file") {
    Config c = parse_config("# comment\ntruncation_order = 4\nscan_budget=1e7\nnumeric_tolerance=1e-9\noutput_format=json\n");
    CHECK(c.truncation_order == 4);
    CHECK(c.scan_budget == 10'000'000);
    CHECK(c.numeric_tolerance == doctest::Approx(1e-9));
    CHECK(c.output_format == "json");
    CHECK(parse_config("").truncation_order == 10);
    CHECK_THROWS_AS(parse_config("order=3"), UsageError);
    CHECK_THROWS_AS(parse_config("truncation_order=0"), UsageError);
    CHECK_THROWS_AS(parse_config("scan_budget=-1"), UsageError);
    CHECK_THROWS_AS(parse_config("output_format=xml"), UsageError);
    CHECK_THROWS_AS(parse_config("truncation_order"), UsageError);

    auto path = std::filesystem::temp_directory_path() / "wexc_test.conf";
    std::ofstream(path) << "truncation_order=4\noutput_format=json\n";
    auto r = run({"char", "sl", "--n", "3", "--partition", "2,1", "--p", "3", "--u", "2", "--config", path.string()});
    REQUIRE(r.rc == 0);
    CHECK(json::parse(r.out)["order"] == 4);
    // flags override the file
    auto r2 = run({"char", "sl", "--n", "3", "--partition", "2,1", "--p", "3", "--u", "2", "--config", path.string(),
                   "--order", "5"});
    CHECK(json::parse(r2.out)["order"] == 5);
    std::ofstream(path) << "bogus=1\n";
    CHECK(run({"root", "A2", "--config", path.string()}).rc == 2);
    CHECK(run({"root", "A2", "--config", "/nonexistent/wexc.conf"}).rc == 2);
    std::filesystem::remove(path);
  }

  TEST_CASE("deterministic output and thread independence") {
    auto a = run({"exceptional", "so", "--n", "10", "--partition", "3,2,2,1,1,1", "--json"});
    auto b = run({"exceptional", "so", "--n", "10", "--partition", "3,2,2,1,1,1", "--json"});
    CHECK(a.out == b.out);
    auto s1 = run({"scan", "so", "--n", "9", "--threads", "1"});
    auto s3 = run({"scan", "so", "--n", "9", "--threads", "3"});
    CHECK(s1.rc == 0);
    CHECK(s1.out == s3.out);
    CHECK(s1.out.rfind("algebra\tpartition\tu\t", 0) == 0);
  }

  TEST_CASE("scan resumes by orbit key") {
    auto dir = std::filesystem::temp_directory_path();
    auto full = (dir / "wexc_scan_full.tsv").string(), part = (dir / "wexc_scan_part.tsv").string();
    REQUIRE(run({"scan", "so", "--n", "9", "--output", full}).rc == 0);
    auto all = slurp(full);
    // keep the header and a few rows, then cut the last line in half
    std::istringstream in(all);
    std::string kept, line;
    for (int i = 0; i < 5 && std::getline(in, line); ++i) kept += line + "\n";
    kept += line.substr(0, line.size() / 2);
    std::ofstream(part) << kept;
    auto r = run({"scan", "so", "--n", "9", "--output", part, "--resume"});
    CHECK(r.rc == 0);
    CHECK(r.err.find("skipped") != std::string::npos);
    CHECK(slurp(part) == all);
    CHECK(run({"scan", "so", "--n", "9", "--resume"}).rc == 2);
    std::filesystem::remove(full);
    std::filesystem::remove(part);
  }
}
