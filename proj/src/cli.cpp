#include "wexc/cli.hpp"

#include <CLI11.hpp>

#include <condition_variable>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "wexc/characters.hpp"
#include "wexc/exceptional.hpp"
#include "wexc/identities.hpp"

namespace wexc {

using ojson = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

ojson rj(const Rat& r) { return to_str(r); }
ojson vj(const FinVec& v) {
  ojson a = ojson::array();
  for (auto& x : v) a.push_back(to_str(x));
  return a;
}
ojson vvj(const std::vector<std::vector<Rat>>& vs) {
  ojson a = ojson::array();
  for (auto& v : vs) a.push_back(vj(v));
  return a;
}
ojson approx(double v, double err) { return ojson{{"value", v}, {"error_bound", err}}; }

ojson fraction_json(const Fraction& f) { return ojson{{"numerator", series_json(f.num)}, {"binomials", vvj(f.bins)}}; }

struct AlgebraArgs {
  std::string name;
  int n = 0;
  std::string partition, orbit;
};

struct Algebra {
  RootSystem rs;
  std::optional<Family> fam;
  int N = 0;
};

Algebra resolve_algebra(const AlgebraArgs& a) {
  Algebra A;
  if (a.name == "sl" || a.name == "so" || a.name == "sp") {
    if (a.n <= 0) throw UsageError("algebra '" + a.name + "' needs --n");
    A.fam = parse_family(a.name);
    A.N = a.n;
    try {
      A.rs = classical_algebra(*A.fam, A.N);
    } catch (const std::exception& e) {
      throw UsageError("unsupported algebra " + a.name + std::to_string(a.n) + ": " + e.what());
    }
    return A;
  }
  static const std::regex label("^[A-G][0-9]+$");
  if (!std::regex_match(a.name, label))
    throw UsageError("unknown algebra '" + a.name + "'; expected sl, so or sp with --n, or a Cartan label such as A2 or G2");
  try {
    A.rs = build_root_system(a.name);
  } catch (const std::exception& e) {
    throw UsageError("unsupported algebra '" + a.name + "': " + e.what());
  }
  int r = A.rs.rank;
  switch (A.rs.type) {
    case 'A': A.fam = Family::sl, A.N = r + 1; break;
    case 'B': A.fam = Family::so, A.N = 2 * r + 1; break;
    case 'C': A.fam = Family::sp, A.N = 2 * r; break;
    case 'D': A.fam = Family::so, A.N = 2 * r; break;
    default: break;
  }
  return A;
}

NilpotentDatum resolve_orbit(const Algebra& A, const AlgebraArgs& a) {
  if (!a.partition.empty() && !a.orbit.empty()) throw UsageError("give --partition or --orbit, not both");
  if (!a.partition.empty()) {
    if (!A.fam) throw UsageError("--partition needs a classical algebra; use --orbit for " + A.rs.label());
    std::string core = a.partition;
    if (auto c = core.find(':'); c != std::string::npos) {
      std::string cls = core.substr(c + 1);
      if (cls != "I" && cls != "II") throw UsageError("very even class must be I or II");
      core = core.substr(0, c);
    }
    Partition p;
    try {
      p = parse_partition(core);
    } catch (const std::exception& e) {
      throw UsageError("cannot parse partition '" + a.partition + "': " + e.what());
    }
    if (p.N() != A.N) throw UsageError("partition of " + std::to_string(A.N) + " expected, got " + a.partition);
    std::string why;
    if (!partition_valid(*A.fam, p, &why))
      throw UsageError("no " + family_name(*A.fam) + std::to_string(A.N) + " orbit for " + a.partition + ": " + why);
    return orbit_by_name(*A.fam, A.N, a.partition);
  }
  const std::string& o = a.orbit;
  if (o.empty()) throw UsageError("an orbit is required: --partition or --orbit principal|zero|minimal|short-root|root:<i>");
  if (o == "principal") return principal_orbit(A.rs);
  if (o == "zero") return zero_orbit(A.rs);
  if (o == "minimal") return orbit_from_root_vector(A.rs, A.rs.theta);
  if (o == "short-root") return orbit_from_root_vector(A.rs, A.rs.theta_s);
  if (o.rfind("root:", 0) == 0) {
    int i = -1;
    try {
      i = std::stoi(o.substr(5));
    } catch (...) {
    }
    if (i < 0 || i >= int(A.rs.pos.size()))
      throw UsageError("root index out of range 0.." + std::to_string(A.rs.pos.size() - 1));
    return orbit_from_root_vector(A.rs, A.rs.pos[i]);
  }
  throw UsageError("unknown orbit '" + o + "'; expected principal, zero, minimal, short-root or root:<i>");
}

std::string orbit_name(const NilpotentDatum& d) {
  if (!d.partition) return d.label;
  std::string s = d.partition->str();
  if (d.very_even_class) s += d.very_even_class == 2 ? ":II" : ":I";
  return s;
}

std::string algebra_label(const Algebra& A) {
  if (A.fam) return family_name(*A.fam) + std::to_string(A.N);
  return A.rs.label();
}

// ---- output

std::string scalar_text(const ojson& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::string series_text(const ojson& j) {
  auto s = series_from_json(j);
  return s.empty() ? "0" : s.str();
}

bool flat_array(const ojson& v) {
  if (!v.is_array()) return false;
  for (auto& x : v)
    if (x.is_object() || (x.is_array() && !flat_array(x))) return false;
  return true;
}

void pretty(const ojson& j, std::ostream& o, int ind) {
  std::string pad(ind, ' ');
  if (j.is_object() && j.contains("terms") && j.contains("scale")) {
    o << pad << series_text(j) << "\n";
    return;
  }
  if (j.is_array()) {
    for (auto& x : j) {
      o << pad << "-\n";
      pretty(x, o, ind + 2);
    }
    return;
  }
  for (auto& [k, v] : j.items()) {
    if (v.is_primitive()) o << pad << k << ": " << scalar_text(v) << "\n";
    else if (flat_array(v)) o << pad << k << ": " << v.dump() << "\n";
    else if (v.is_object() && v.contains("terms") && v.contains("scale")) o << pad << k << ": " << series_text(v) << "\n";
    else {
      o << pad << k << ":\n";
      pretty(v, o, ind + 2);
    }
  }
}

void tsv(const ojson& j, std::ostream& o) {
  if (j.contains("rows") && j["rows"].is_array() && !j["rows"].empty()) {
    bool first = true;
    for (auto& row : j["rows"]) {
      if (first) {
        bool f = true;
        for (auto& [k, v] : row.items()) o << (f ? "" : "\t") << k, f = false;
        o << "\n";
        first = false;
      }
      bool f = true;
      for (auto& [k, v] : row.items()) o << (f ? "" : "\t") << (v.is_null() ? "-" : scalar_text(v)), f = false;
      o << "\n";
    }
    return;
  }
  for (auto& [k, v] : j.items()) o << k << "\t" << (v.is_primitive() ? scalar_text(v) : v.dump()) << "\n";
}

void emit(const ojson& j, const std::string& fmt, std::ostream& o) {
  if (fmt == "json") o << j.dump(2) << "\n";
  else if (fmt == "tsv") tsv(j, o);
  else pretty(j, o, 0);
}

// ---- commands

struct Opts {
  AlgebraArgs alg;
  i64 p = 0, u = 0;
  int weight = -1;
  i64 umax = 0;
  std::vector<double> taus;
  std::string output;
  bool resume = false;
  int threads = 1;
  std::string check;
};

std::vector<PrincipalAdmissible> select_weights(const RootSystem& rs, const Opts& o) {
  if (o.p <= 0 || o.u <= 0) throw UsageError("--p and --u are required and must be positive");
  auto set = enumerate_principal_admissible(rs, o.p, o.u);
  if (!set.reason.empty()) throw DomainError(set.reason);
  if (o.weight < 0) return set.weights;
  if (o.weight >= int(set.weights.size()))
    throw UsageError("--weight out of range 0.." + std::to_string(set.weights.size() - 1));
  return {set.weights[o.weight]};
}

int weight_index(const RootSystem& rs, const Opts& o, const PrincipalAdmissible& L) {
  if (o.weight >= 0) return o.weight;
  auto set = enumerate_principal_admissible(rs, o.p, o.u);
  for (size_t i = 0; i < set.weights.size(); ++i)
    if (set.weights[i].lam == L.lam) return int(i);
  return -1;
}

ojson cmd_root(const Algebra& A) {
  const RootSystem& rs = A.rs;
  ojson j;
  j["h"] = rs.h;
  j["hdual"] = rs.hv;
  j["lacety"] = rs.lacety;
  j["positive_roots"] = rs.pos.size();
  j["algebra"] = algebra_label(A);
  j["cartan_type"] = rs.label();
  j["rank"] = rs.rank;
  j["dim"] = rs.dim_g();
  j["center_order"] = center_order(rs);
  j["form_scale"] = rj(rs.c);
  ojson s = ojson::array();
  for (auto& a : rs.simple) s.push_back(vj(a));
  j["simple_roots"] = s;
  j["rho"] = vj(rs.rho);
  j["theta"] = vj(rs.theta);
  j["command"] = "root";
  return j;
}

ojson cmd_orbit(const Algebra& A, const NilpotentDatum& d) {
  ojson j;
  j["algebra"] = algebra_label(A);
  j["orbit"] = orbit_name(d);
  j["principal_type"] = d.principal_type;
  j["principal"] = d.dim_gf == d.R().rank;
  j["dim"] = d.R().dim_g();
  j["dim_g0"] = d.dim_g0;
  j["dim_g_half"] = d.dim_g12;
  j["dim_gf"] = d.dim_gf;
  j["hf_rank"] = d.hf_dim();
  j["delta_0_half"] = d.dim_gf - d.R().rank;
  j["theta_x"] = rj(*std::max_element(d.grade.begin(), d.grade.end()));
  j["x"] = vj(d.x);
  j["hf_basis"] = vvj(d.hf);
  j["psi_roots"] = d.psi_roots().size();
  j["command"] = "orbit";
  return j;
}

ojson cmd_admissible(const Algebra& A, const Opts& o) {
  auto ws = select_weights(A.rs, o);
  ojson j;
  j["algebra"] = algebra_label(A);
  j["p"] = o.p;
  j["u"] = o.u;
  j["k"] = rj(Rat(o.p) / Rat(o.u) - A.rs.hv);
  j["count"] = ws.size();
  ojson arr = ojson::array();
  int i = 0;
  for (auto& L : ws) {
    ojson w;
    w["index"] = o.weight >= 0 ? o.weight : i;
    w["lam"] = vj(L.lam);
    w["lam0"] = vj(L.lam0);
    w["beta"] = vj(L.beta);
    w["ybar"] = L.ybar.word;
    w["nondegenerate"] = is_nondegenerate(A.rs, L);
    arr.push_back(w);
    ++i;
  }
  j["weights"] = arr;
  j["command"] = "admissible";
  return j;
}

ojson cmd_char(const Algebra& A, const NilpotentDatum& d, const Opts& o, int order) {
  auto ws = select_weights(d.R(), o);
  ojson j;
  j["algebra"] = algebra_label(A);
  j["orbit"] = orbit_name(d);
  j["p"] = o.p;
  j["u"] = o.u;
  Rat k = Rat(o.p) / Rat(o.u) - d.R().hv;
  j["k"] = rj(k);
  j["central_charge"] = rj(central_charge(d, k));
  j["order"] = order;
  ojson arr = ojson::array();
  for (auto& L : ws) {
    auto cb = ep_character(L, d, order);
    ojson w;
    w["index"] = weight_index(d.R(), o, L);
    w["lam"] = vj(L.lam);
    w["vanishes"] = cb.vanishes;
    w["h"] = cb.vanishes ? ojson(nullptr) : rj(cb.h);
    w["lowest"] = cb.vanishes ? ojson(nullptr) : rj(cb.lowest);
    w["sf"] = cb.vanishes ? ojson(nullptr) : rj(cb.sf);
    w["chi"] = fraction_json(cb.chi);
    arr.push_back(w);
  }
  j["weights"] = arr;
  j["command"] = "char";
  return j;
}

ojson cmd_extra_factor(const Algebra& A, const NilpotentDatum& d, const Opts& o, int order) {
  auto ws = select_weights(d.R(), o);
  ojson j;
  j["algebra"] = algebra_label(A);
  j["orbit"] = orbit_name(d);
  j["p"] = o.p;
  j["u"] = o.u;
  j["order"] = order;
  std::optional<QSeries> closed;
  if (d.R().type == 'A' && d.partition && o.u >= 2 && d.partition->parts == sln_fm_partition(A.N, int(o.u)).parts)
    closed = sln_extra_factor_closed_form(A.N, int(o.u), order);
  ojson arr = ojson::array();
  for (auto& L : ws) {
    ojson w;
    w["index"] = weight_index(d.R(), o, L);
    w["lam"] = vj(L.lam);
    bool van = numerator_B(L, d, 0).empty();
    w["vanishes"] = van;
    if (van) {
      w["extra_factor"] = nullptr;
      w["closed_form_sign"] = nullptr;
    } else {
      auto ef = extra_factor(L, d, order);
      w["extra_factor"] = fraction_json(ef);
      int sg = 0;
      if (closed && ef.bins.empty() && match_up_to_sign(ef.num.at_z_zero(), *closed, &sg)) w["closed_form_sign"] = sg;
      else w["closed_form_sign"] = nullptr;
    }
    arr.push_back(w);
  }
  j["closed_form"] = closed.has_value();
  j["weights"] = arr;
  j["command"] = "extra-factor";
  return j;
}

ojson verdict_row(const ExceptionalReport& R, const UVerdict* v) {
  ojson r;
  r["algebra"] = R.algebra;
  r["partition"] = R.partition ? R.partition->str() : R.orbit;
  r["u"] = v ? ojson(v->u) : ojson(nullptr);
  r["cond_i"] = v ? ojson(v->cond_i) : ojson(nullptr);
  r["cond_ii"] = v ? ojson(v->cond_ii) : ojson(nullptr);
  r["exceptional"] = v ? ojson(v->exceptional) : ojson(nullptr);
  r["divides_exceptional"] = v ? ojson(v->divides_exceptional) : ojson(nullptr);
  r["phi"] = R.phi ? ojson(*R.phi) : ojson(nullptr);
  if (v && R.closed_form) r["closed_form_match"] = v->exceptional == (R.closed_form->count(int(v->u)) > 0);
  else r["closed_form_match"] = nullptr;
  r["error"] = R.error.empty() ? ojson(nullptr) : ojson(R.error);
  return r;
}

ojson report_json(const ExceptionalReport& R) {
  ojson j;
  j["algebra"] = R.algebra;
  j["orbit"] = R.partition ? R.partition->str() : R.orbit;
  j["principal"] = R.principal;
  j["theta_x"] = rj(R.theta_x);
  if (R.closed_form) j["closed_form"] = *R.closed_form;
  else j["closed_form"] = nullptr;
  j["in_E0"] = R.in_E0;
  j["phi"] = R.phi ? ojson(*R.phi) : ojson(nullptr);
  j["error"] = R.error.empty() ? ojson(nullptr) : ojson(R.error);
  ojson rows = ojson::array();
  for (auto& v : R.verdicts) rows.push_back(verdict_row(R, &v));
  j["rows"] = rows;
  j["command"] = "exceptional";
  return j;
}

std::vector<i64> denominators_up_to(const NilpotentDatum& d, i64 umax) {
  Rat tx = *std::max_element(d.grade.begin(), d.grade.end());
  std::vector<i64> us;
  for (i64 u = 1; u <= umax; ++u)
    if (std::gcd(u, i64(d.R().lacety)) == 1 && Rat(u) > tx) us.push_back(u);
  return us;
}

const char* tsv_header = "algebra\tpartition\tu\tcond_i\tcond_ii\texceptional\tdivides_exceptional\tphi\tclosed_form_match\terror";

std::string tsv_row(const ojson& r) {
  std::string s;
  bool first = true;
  for (auto& [k, v] : r.items()) {
    s += first ? "" : "\t";
    s += v.is_null() ? "-" : scalar_text(v);
    first = false;
  }
  return s;
}

int cmd_scan(const Opts& o, const Config& cfg, bool json_lines, std::ostream& out, std::ostream& err) {
  const auto& a = o.alg;
  if (a.name != "sl" && a.name != "so" && a.name != "sp") throw UsageError("scan takes a family: sl, so or sp");
  if (a.n <= 0) throw UsageError("scan needs --n");
  if (a.n > 13) throw UsageError("scan is limited to --n <= 13");
  if (o.resume && o.output.empty()) throw UsageError("--resume needs --output");
  Family fam = parse_family(a.name);
  std::vector<NilpotentDatum> orbits;
  for (auto& d : all_orbits(fam, a.n))
    if (d.principal_type && d.very_even_class != 2) orbits.push_back(d);

  // an orbit counts as done only when all of its rows are present; partial blocks are dropped
  std::map<std::string, size_t> expected;
  for (auto& d : orbits) expected[d.partition->str()] = std::max<size_t>(1, scan_denominators(d).size());
  std::set<std::string> done;
  std::vector<std::pair<std::string, std::string>> kept;
  bool exists = false;
  if (!o.output.empty()) {
    std::ifstream in(o.output);
    exists = bool(in);
    if (exists && o.resume) {
      std::string line;
      std::map<std::string, size_t> count;
      while (std::getline(in, line)) {
        if (line.empty() || line == tsv_header) continue;
        std::string key;
        if (json_lines) {
          try {
            key = nlohmann::json::parse(line).at("partition").get<std::string>();
          } catch (...) {
            continue;
          }
        } else {
          auto t1 = line.find('\t');
          auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
          if (t2 == std::string::npos) continue;
          key = line.substr(t1 + 1, t2 - t1 - 1);
        }
        ++count[key];
        kept.emplace_back(key, line);
      }
      for (auto& [k, c] : count)
        if (expected.count(k) && expected[k] == c) done.insert(k);
    }
  }
  std::ofstream file;
  std::ostream* dst = &out;
  if (!o.output.empty()) {
    file.open(o.output, std::ios::trunc);
    if (!file) throw DomainError("cannot open " + o.output);
    dst = &file;
  }
  if (!json_lines) *dst << tsv_header << "\n";
  for (auto& [k, line] : kept)
    if (done.count(k)) *dst << line << "\n";
  *dst << std::flush;

  std::vector<size_t> todo;
  for (size_t i = 0; i < orbits.size(); ++i)
    if (!done.count(orbits[i].partition->str())) todo.push_back(i);

  // workers fill slots; rows are written in orbit order as soon as the prefix is complete
  std::vector<std::optional<ExceptionalReport>> slot(todo.size());
  std::mutex mu;
  std::condition_variable cv;
  size_t next = 0;
  auto work = [&] {
    for (;;) {
      size_t i;
      {
        std::lock_guard lk(mu);
        if (next == todo.size()) return;
        i = next++;
      }
      auto R = exceptional_report(orbits[todo[i]], cfg.scan_budget);
      {
        std::lock_guard lk(mu);
        slot[i] = std::move(R);
      }
      cv.notify_all();
    }
  };
  int nt = std::max(1, std::min<int>(o.threads, int(todo.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t) pool.emplace_back(work);
  int errors = 0;
  for (size_t i = 0; i < todo.size(); ++i) {
    ExceptionalReport R;
    {
      std::unique_lock lk(mu);
      cv.wait(lk, [&] { return slot[i].has_value(); });
      R = std::move(*slot[i]);
      slot[i].reset();
    }
    if (!R.error.empty()) ++errors;
    std::vector<ojson> rows;
    for (auto& v : R.verdicts) rows.push_back(verdict_row(R, &v));
    if (rows.empty()) rows.push_back(verdict_row(R, nullptr));
    std::string block;
    for (auto& r : rows) block += (json_lines ? r.dump() : tsv_row(r)) + "\n";
    *dst << block << std::flush;
  }
  for (auto& t : pool) t.join();
  err << "scanned " << todo.size() << " orbits, skipped " << orbits.size() - todo.size() << " already present";
  if (errors) err << ", " << errors << " with errors";
  err << "\n";
  return errors ? 1 : 0;
}

ojson cmd_strange(const Algebra& A, const NilpotentDatum& d, const Opts& o, const Config& cfg, bool* holds) {
  if (o.p <= 0 || o.u <= 0) throw UsageError("--p and --u are required and must be positive");
  bool exc = torus_scan(d, o.u, OrderMode::exact, cfg.scan_budget).exceptional;
  auto v = strange_formula_check(d, o.p, o.u, exc);
  ojson j;
  j["algebra"] = algebra_label(A);
  j["orbit"] = orbit_name(d);
  j["p"] = o.p;
  j["u"] = o.u;
  j["exceptional"] = exc;
  j["applicable"] = v.applicable;
  j["reason"] = v.reason;
  j["lhs"] = rj(v.lhs);
  j["rhs"] = rj(v.rhs);
  j["holds"] = v.holds;
  j["command"] = "check strange";
  *holds = v.applicable && v.holds;
  return j;
}

ojson cmd_modular(const Opts& o, const Config& cfg, int order, bool* ok) {
  i64 p = o.p > 0 ? o.p : 2, u = o.u > 0 ? o.u : 5;
  std::vector<double> taus = o.taus.empty() ? std::vector<double>{1.0, 1.3} : o.taus;
  ojson j;
  j["p"] = p;
  j["u"] = u;
  j["order"] = order;
  j["tolerance"] = cfg.numeric_tolerance;
  ojson checks = ojson::array();
  *ok = true;
  for (double y : taus) {
    if (y <= 0) throw UsageError("--tau takes the positive imaginary part of τ");
    cplx tau(0, y);
    auto cs = s_transform_checks(tau, cfg.numeric_tolerance);
    for (auto& c : s_relation_checks(p, u, tau, cfg.numeric_tolerance, order)) cs.push_back(c);
    for (auto& c : cs) {
      checks.push_back(ojson{{"name", c.name}, {"tau_im", y}, {"deviation", approx(c.deviation, c.bound)}, {"ok", c.ok}});
      *ok = *ok && c.ok;
    }
  }
  j["checks"] = checks;
  bool tp = t_phase_checks(p, u, std::min(order, 20));
  j["t_phase_exact"] = tp;
  *ok = *ok && tp;
  j["ok"] = *ok;
  j["command"] = "check modular";
  return j;
}

ojson cmd_triple(int order, bool* ok) {
  std::vector<std::vector<Rat>> cases = {{1}, {rat(1, 2)}, {rat(2, 3), rat(-1, 3)}, {rat(5, 6), rat(1, 4), -1}};
  ojson j;
  j["order"] = order;
  ojson arr = ojson::array();
  *ok = true;
  for (auto& s : cases) {
    std::string why;
    bool eq = same_series(theta_product(s, order), theta_sum(s, order), &why);
    arr.push_back(ojson{{"s", vj(s)}, {"equal", eq}});
    *ok = *ok && eq;
  }
  j["cases"] = arr;
  j["ok"] = *ok;
  j["command"] = "check triple-product";
  return j;
}

ojson cmd_det(const Algebra& A, const NilpotentDatum& d, int order, bool* ok) {
  auto dc = det_identity(d, order);
  ojson j;
  j["algebra"] = algebra_label(A);
  j["orbit"] = orbit_name(d);
  j["order"] = order;
  ojson ws = ojson::array();
  for (auto& [w, m] : dc.weights) ws.push_back(ojson{{"weight", vj(w)}, {"multiplicity", m}});
  j["gf_weights"] = ws;
  j["equal"] = dc.equal;
  j["command"] = "check det-identity";
  *ok = dc.equal;
  return j;
}

ojson cmd_principal_w(const Algebra& A, const Opts& o, int order) {
  if (o.p <= 0 || o.u <= 0) throw UsageError("--p and --u are required and must be positive");
  const RootSystem& rs = A.rs;
  if (std::gcd(o.p, o.u) != 1 || std::gcd(o.u, i64(rs.lacety)) != 1)
    throw DomainError("principal W-algebra needs gcd(p,u) = gcd(u,lacety) = 1");
  ojson j;
  j["algebra"] = algebra_label(A);
  j["p"] = o.p;
  j["u"] = o.u;
  j["central_charge"] = rj(principal_w_central_charge(rs, o.p, o.u));
  j["order"] = order;
  ojson arr = ojson::array();
  for (auto& lm : pair_index_set(rs, o.p, o.u)) {
    auto W = principal_w_character(rs, lm, o.p, o.u, order);
    arr.push_back(ojson{{"lam", vj(lm.lam)}, {"mu", vj(lm.mu)}, {"h", rj(W.h)}, {"chi", series_json(W.chi)}});
  }
  j["modules"] = arr;
  j["command"] = "principal-w";
  return j;
}

std::uint64_t parse_budget(const std::string& s) {
  size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size() || !(v >= 1) || v > 1e15 || v != std::floor(v)) throw std::invalid_argument(s);
  return std::uint64_t(v);
}

}  // namespace

ojson series_json(const QSeries& s) { return ojson::parse(s.serialize()); }

QSeries series_from_json(const nlohmann::json& j) {
  i64 M = j.at("scale").get<i64>();
  const auto& terms = j.at("terms");
  int nz = terms.empty() ? 0 : int(terms[0][1].size());
  if (j.contains("nz")) nz = j["nz"].get<int>();
  QSeries s(nz);
  for (auto& t : terms) {
    std::vector<Rat> zc;
    for (auto& z : t[1]) zc.push_back(Rat(z.get<i64>()) / Rat(M));
    s.add_term(Rat(t[0].get<std::string>()), Rat(t[2].get<std::string>()), zc, t[3].get<i64>());
  }
  if (!j.at("order").is_null()) s = s.truncated(Rat(j["order"].get<std::string>()));
  return s;
}

Config parse_config(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(ln) + ": expected key=value");
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    try {
      if (k == "truncation_order") {
        size_t pos = 0;
        c.truncation_order = std::stoi(v, &pos);
        if (pos != v.size() || c.truncation_order < 1) throw std::invalid_argument(v);
      } else if (k == "scan_budget") {
        c.scan_budget = parse_budget(v);
      } else if (k == "numeric_tolerance") {
        size_t pos = 0;
        c.numeric_tolerance = std::stod(v, &pos);
        if (pos != v.size() || !(c.numeric_tolerance > 0)) throw std::invalid_argument(v);
      } else if (k == "output_format") {
        if (v != "json" && v != "tsv" && v != "pretty") throw std::invalid_argument(v);
        c.output_format = v;
      } else {
        throw UsageError("config line " + std::to_string(ln) + ": unknown key '" + k +
                         "' (known: truncation_order, scan_budget, numeric_tolerance, output_format)");
      }
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception&) {
      throw UsageError("config line " + std::to_string(ln) + ": bad value '" + v + "' for " + k);
    }
  }
  return c;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact characters of W-algebras and exceptional pairs", "wexc"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, format, budget_s;
  bool json = false;
  int order = 0;
  Opts o;
  app.add_option("--config", config_path, "key=value file: truncation_order, scan_budget, numeric_tolerance, output_format");
  app.add_flag("--json", json, "JSON output");
  app.add_option("--format", format, "json, tsv or pretty")->check(CLI::IsMember({"json", "tsv", "pretty"}));
  app.add_option("--order", order, "q-series truncation order")->check(CLI::PositiveNumber);
  app.add_option("--budget", budget_s, "torus scan budget (elements)");

  auto add_alg = [&](CLI::App* s, bool orbit) {
    s->add_option("algebra", o.alg.name, "sl, so, sp (with --n) or a Cartan label such as G2")->required();
    s->add_option("--n", o.alg.n, "N for sl_N, so_N, sp_N");
    if (orbit) {
      s->add_option("--partition", o.alg.partition, "Jordan type, e.g. 2,1 (append :I or :II for very even)");
      s->add_option("--orbit", o.alg.orbit, "principal, zero, minimal, short-root or root:<i>");
    }
  };
  auto add_pu = [&](CLI::App* s) {
    s->add_option("--p", o.p, "numerator of k + h∨");
    s->add_option("--u", o.u, "denominator of k + h∨");
  };

  auto* root = app.add_subcommand("root", "root system data");
  add_alg(root, false);
  auto* orbit = app.add_subcommand("orbit", "nilpotent orbit data");
  add_alg(orbit, true);
  auto* adm = app.add_subcommand("admissible", "principal admissible weights");
  add_alg(adm, false);
  add_pu(adm);
  adm->add_option("--weight", o.weight, "index of a single weight");
  auto* chr = app.add_subcommand("char", "Euler-Poincaré characters of H(L(Λ))");
  add_alg(chr, true);
  add_pu(chr);
  chr->add_option("--weight", o.weight, "index of a single weight");
  auto* ef = app.add_subcommand("extra-factor", "C/ψ for each weight");
  add_alg(ef, true);
  add_pu(ef);
  ef->add_option("--weight", o.weight, "index of a single weight");
  auto* exc = app.add_subcommand("exceptional", "torus-scan verdicts per denominator");
  add_alg(exc, true);
  exc->add_option("--umax", o.umax, "scan u = 1..umax instead of u < h")->check(CLI::PositiveNumber);
  auto* scan = app.add_subcommand("scan", "verdicts for every principal-type orbit of a family");
  scan->add_option("family", o.alg.name, "sl, so or sp")->required();
  scan->add_option("--n", o.alg.n, "N")->required();
  scan->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  scan->add_option("--output", o.output, "write rows to this file");
  scan->add_flag("--resume", o.resume, "skip orbits already present in --output");
  auto* check = app.add_subcommand("check", "identity checks");
  check->require_subcommand(1);
  check->fallthrough();
  auto* strange = check->add_subcommand("strange", "strange formula for an exceptional pair");
  add_alg(strange, true);
  add_pu(strange);
  auto* modular = check->add_subcommand("modular", "S-transform identities, S-relation and T phase for sl2");
  add_pu(modular);
  modular->add_option("--tau", o.taus, "imaginary parts of τ (default 1 and 1.3)");
  auto* triple = check->add_subcommand("triple-product", "Jacobi triple product");
  auto* det = check->add_subcommand("det-identity", "determinant identity for ψ");
  add_alg(det, true);
  auto* pw = app.add_subcommand("principal-w", "principal W-algebra characters via the (lambda, mu) parametrization");
  add_alg(pw, false);
  add_pu(pw);

  std::vector<std::string> argv_s{"wexc"};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (auto& s : argv_s) argv.push_back(s.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  try {
    Config cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot read config file " + config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = parse_config(ss.str());
    }
    if (!format.empty()) cfg.output_format = format;
    if (json) cfg.output_format = "json";
    if (order > 0) cfg.truncation_order = order;
    if (!budget_s.empty()) {
      try {
        cfg.scan_budget = parse_budget(budget_s);
      } catch (...) {
        throw UsageError("--budget must be a positive integer");
      }
    }
    int N = cfg.truncation_order;
    const std::string& fmt = cfg.output_format;

    if (scan->parsed()) return cmd_scan(o, cfg, fmt == "json", out, err);
    if (triple->parsed()) {
      bool ok = false;
      emit(cmd_triple(order > 0 ? N : std::max(N, 30), &ok), fmt, out);
      return ok ? 0 : 1;
    }
    if (modular->parsed()) {
      bool ok = false;
      emit(cmd_modular(o, cfg, N, &ok), fmt, out);
      return ok ? 0 : 1;
    }
    auto A = resolve_algebra(o.alg);
    if (root->parsed()) emit(cmd_root(A), fmt, out);
    else if (adm->parsed()) emit(cmd_admissible(A, o), fmt, out);
    else if (pw->parsed()) emit(cmd_principal_w(A, o, N), fmt, out);
    else {
      auto d = resolve_orbit(A, o.alg);
      if (orbit->parsed()) emit(cmd_orbit(A, d), fmt, out);
      else if (chr->parsed()) emit(cmd_char(A, d, o, N), fmt, out);
      else if (ef->parsed()) emit(cmd_extra_factor(A, d, o, N), fmt, out);
      else if (exc->parsed()) {
        std::optional<std::vector<i64>> us;
        if (o.umax > 0) us = denominators_up_to(d, o.umax);
        auto R = exceptional_report(d, cfg.scan_budget, us);
        emit(report_json(R), fmt, out);
        if (!R.error.empty()) {
          err << "error: " << R.error << "\n";
          return 1;
        }
      } else if (strange->parsed()) {
        bool holds = false;
        emit(cmd_strange(A, d, o, cfg, &holds), fmt, out);
        return holds ? 0 : 1;
      } else if (det->parsed()) {
        bool ok = false;
        emit(cmd_det(A, d, N, &ok), fmt, out);
        return ok ? 0 : 1;
      }
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for more information.\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace wexc
