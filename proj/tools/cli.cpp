#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "modbasis/basis.hpp"
#include "modbasis/error.hpp"
#include "modbasis/leveldata.hpp"
#include "modbasis/verify.hpp"

namespace modbasis::cli {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kCacheEnv = "MODBASIS_CACHE_DIR";
constexpr const char* kDefaultCacheDir = ".modbasis-cache";
constexpr Exponent kMinPrecision = 16;

struct Global {
  std::string format = "text";
  std::string cache_dir;
  bool no_cache = false;
};

// A command's result: what to print and which exit code to return.
struct Outcome {
  int code = kPass;
  json body;         // envelope for --format json
  std::string text;  // rendering for text / csv
};

fs::path resolve_cache_dir(const Global& g) {
  if (!g.cache_dir.empty()) return g.cache_dir;
  if (const char* env = std::getenv(kCacheEnv); env != nullptr && *env != '\0') return env;
  return kDefaultCacheDir;
}

json envelope(const std::string& command, int level, json params) {
  json env;
  env["tool_version"] = MODBASIS_VERSION;
  env["fixture_version"] = level > 0 ? json(get_level(level).fixture_version) : json(nullptr);
  env["command"] = command;
  env["params"] = std::move(params);
  return env;
}

json summary(bool pass, std::int64_t failures, Exponent precision) {
  return {{"pass", pass}, {"failures", failures}, {"precision", precision}};
}

int report_code(const CheckReport& r) {
  switch (r.status) {
    case CheckStatus::pass: return kPass;
    case CheckStatus::fail: return kFail;
    case CheckStatus::insufficient_precision: return kPrecision;
  }
  return kFail;
}

json params_json(const CheckReport& r) {
  json p = json::object();
  for (const auto& [k, v] : r.params) p[k] = v;
  return p;
}

Outcome from_report(const std::string& command, int level, const CheckReport& r) {
  Outcome o;
  o.code = report_code(r);
  o.body = envelope(command, level, params_json(r));
  o.body["report"] = json::parse(report_to_json(r));
  o.body["summary"] = summary(r.passed(), r.failures, r.precision);
  o.text = report_to_text(r);
  if (r.status == CheckStatus::insufficient_precision && r.required_precision >= 0) {
    o.text += "  increase precision to at least " + std::to_string(r.required_precision) + "\n";
  }
  return o;
}

void check_precision(Exponent prec) {
  if (prec < kMinPrecision) {
    throw CLI::ValidationError("--prec", "precision must be at least " +
                                             std::to_string(kMinPrecision));
  }
}

std::size_t nonzero_terms(const QSeries& s) {
  return static_cast<std::size_t>(std::count_if(s.stored().begin(), s.stored().end(),
                                                [](const BigRational& c) { return sgn(c) != 0; }));
}

// ---- expand ---------------------------------------------------------------

struct ExpandArgs {
  int level = 0;
  int weight = 0;
  std::string space = "M";
  Exponent m = 0;
  std::size_t terms = 0;
  Exponent prec = 32;
};

Outcome cmd_expand(const ExpandArgs& a, const Global& g) {
  check_precision(a.prec);
  const Space space = parse_space(a.space);
  Exponent prec = a.prec;
  BasisElement e = space == Space::M ? f_basis(a.level, a.weight, a.m, prec)
                                     : g_basis(a.level, a.weight, a.m, prec);
  // Raise the precision until the requested number of nonzero terms shows.
  while (a.terms > 0 && nonzero_terms(e.expansion) < a.terms && prec < (Exponent{1} << 14)) {
    prec *= 2;
    e = space == Space::M ? f_basis(a.level, a.weight, a.m, prec)
                          : g_basis(a.level, a.weight, a.m, prec);
  }
  if (!e.expansion.is_integral()) {
    throw IntegralityViolation("expansion of index " + std::to_string(a.m) +
                               " has a non-integral coefficient");
  }
  Outcome o;
  json params = {{"level", a.level}, {"weight", a.weight}, {"space", a.space},
                 {"m", a.m},         {"terms", a.terms},   {"prec", prec}};
  o.body = envelope("expand", a.level, std::move(params));
  json coeffs = json::parse(series_to_json(e.expansion));
  json poly = json::array();
  for (const auto& c : e.haupt_poly) poly.push_back(to_string(c));
  coeffs["haupt_poly"] = std::move(poly);
  o.body["coeffs"] = std::move(coeffs);
  o.body["summary"] = summary(true, 0, prec);
  if (g.format == "csv") {
    o.text = "n,coeff\n";
    for (Exponent n = e.expansion.valuation(); n < e.expansion.prec(); ++n) {
      o.text += std::to_string(n) + "," + to_string(e.expansion.coeff(n)) + "\n";
    }
  } else {
    const bool complete = a.terms > 0 && nonzero_terms(e.expansion) >= a.terms;
    o.text = format_series(e.expansion, a.terms, !complete) + "\n";
  }
  return o;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
  int level = 0;
  int weight = 0;
  Exponent window = 15;
  std::optional<Exponent> m_max;
  std::optional<Exponent> n_max;
  Exponent z_prec = 32;
  Exponent min_window = 40;
  int p = 0;
  std::vector<std::int64_t> r_set{1, 5, 7};
  int a_max = 2;
  std::optional<int> sign;
};

Outcome cmd_verify_al(const VerifyArgs& a) {
  const AuxPrime& aux = get_level(a.level).aux_for(a.p);
  AlOutcome al;
  try {
    al = al_identity_check(a.level, a.p, a.r_set, a.a_max, a.sign, a.min_window);
  } catch (const NoConsistentSign& e) {
    Outcome o;
    o.code = kFail;
    o.body = envelope("verify al", a.level, {{"level", a.level}, {"p", a.p}});
    o.body["error"] = e.what();
    o.body["summary"] = summary(false, 1, a.min_window);
    o.text = std::string("al: fail\n  ") + e.what() + "\n";
    return o;
  }
  CheckReport& r = al.report;
  if (!a.sign) {
    r.notes.push_back(al.sign_unique ? "exactly one sign works" : "sign not unique");
    if (al.sign != aux.sign || !al.sign_unique) {
      r.fail("recorded sign", std::to_string(aux.sign), std::to_string(al.sign));
    }
  }
  Outcome o = from_report("verify al", a.level, r);
  o.body["sign"] = al.sign;
  o.body["sign_unique"] = al.sign_unique;
  o.body["derived_divisor"] = al.derived_divisor;
  o.body["divisibility_derived"] = al.divisibility_derived;
  o.body["divisibility_observed"] = al.divisibility_observed;
  return o;
}

// ---- scan -----------------------------------------------------------------

struct ScanArgs {
  int level = 0;
  int p = 0;
  int a_max = 4;
  int b_max = 4;
  std::vector<std::int64_t> r_set;
  std::vector<std::int64_t> s_set;
  std::int64_t n_cap = 400;
  bool require_weak = false;
  std::string report_path;
};

Outcome cmd_scan(const ScanArgs& a, const Global& g) {
  const auto r_set = a.r_set.empty() ? admissible_residues(a.p) : a.r_set;
  const auto s_set = a.s_set.empty() ? admissible_residues(a.p) : a.s_set;
  ScanResult scan = congruence_scan(a.level, a.p, a.a_max, a.b_max, r_set, s_set, a.n_cap);
  std::vector<ValuationRow> rows = scan.rows;
  Outcome o;
  o.code = report_code(scan.report);
  if (a.require_weak) {
    std::erase_if(rows, [](const ValuationRow& r) { return r.route != Route::weak; });
    if (rows.empty()) {
      o.code = kFail;
      scan.report.notes.push_back("no row is routed to a weak bound");
    }
  }
  json params = params_json(scan.report);
  params["require_weak"] = a.require_weak;
  o.body = envelope("scan", a.level, std::move(params));
  o.body["rows"] = json::parse(rows_to_json(rows));
  json sharp = json::object();
  for (const auto& [k, v] : scan.sharpness) sharp[k] = v;
  o.body["sharpness"] = std::move(sharp);
  o.body["summary"] = {{"pass", o.code == kPass},
                       {"failures", scan.report.failures},
                       {"precision", scan.report.precision},
                       {"rows", rows.size()},
                       {"claimed_rows", scan.claimed_rows},
                       {"zero_rows", scan.zero_rows}};
  if (g.format == "csv") {
    o.text = rows_to_csv(rows);
  } else {
    o.text = rows_to_text(rows) + "\n" + report_to_text(scan.report);
  }
  if (!a.report_path.empty()) {
    std::ofstream file(a.report_path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error("cannot write report " + a.report_path);
    if (fs::path(a.report_path).extension() == ".csv") {
      file << rows_to_csv(rows);
    } else {
      file << o.body.dump(2) << '\n';
    }
  }
  return o;
}

// ---- validate -------------------------------------------------------------

Outcome cmd_validate(int level, const std::string& fixture, Exponent prec) {
  check_precision(prec);
  std::vector<ValidationReport> reports;
  if (!fixture.empty()) {
    LevelData data;
    try {
      data = load_level_fixture(fixture);
    } catch (const ParseError& e) {
      throw IntegralityViolation(std::string("fixture is malformed: ") + e.what());
    }
    reports.push_back(validate_level(data, prec));
  } else if (level != 0) {
    reports.push_back(validate_level(level, prec));
  } else {
    for (int n : supported_levels()) reports.push_back(validate_level(n, prec));
  }
  Outcome o;
  bool pass = true;
  std::int64_t failures = 0;
  json results = json::array();
  for (const auto& rep : reports) {
    o.text += "level " + std::to_string(rep.level) + ": " + (rep.passed() ? "pass" : "fail") + "\n";
    json checks = json::array();
    for (const auto& c : rep.checks) {
      o.text += std::string("  ") + (c.passed ? "ok  " : "FAIL") + "  " + c.name;
      if (!c.detail.empty()) o.text += "  (" + c.detail + ")";
      o.text += "\n";
      checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
      if (!c.passed) ++failures;
    }
    results.push_back({{"level", rep.level}, {"pass", rep.passed()}, {"checks", std::move(checks)}});
    pass = pass && rep.passed();
  }
  const int env_level = reports.size() == 1 && fixture.empty() ? reports.front().level : 0;
  o.body = envelope("validate", env_level,
                    {{"level", level}, {"fixture", fixture}, {"prec", prec}});
  o.body["levels"] = std::move(results);
  o.body["summary"] = summary(pass, failures, prec);
  o.code = pass ? kPass : kDataIntegrity;
  return o;
}

// ---- cache ----------------------------------------------------------------

Outcome cmd_cache(const std::string& action, const Global& g, int level, int weight,
                  const std::string& space, Exponent m_max, Exponent n_max) {
  const fs::path dir = resolve_cache_dir(g);
  Outcome o;
  o.body = envelope("cache " + action, 0, {{"directory", dir.string()}});
  json files = json::array();
  if (action == "info" || action == "clear") {
    std::vector<fs::path> found;
    if (fs::is_directory(dir)) {
      for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("basis-N", 0) == 0 && entry.path().extension() == ".json") {
          found.push_back(entry.path());
        }
      }
    }
    std::sort(found.begin(), found.end());
    o.text = "cache directory: " + dir.string() + "\n";
    for (const auto& f : found) {
      const auto size = fs::file_size(f);
      files.push_back({{"file", f.filename().string()}, {"bytes", size}});
      o.text += "  " + f.filename().string() + "  " + std::to_string(size) + " bytes\n";
      if (action == "clear") fs::remove(f);
    }
    if (action == "clear") o.text += "removed " + std::to_string(found.size()) + " file(s)\n";
  } else {  // warm
    if (level == 0) throw CLI::ValidationError("--level", "cache warm needs --level");
    BasisCache cache(dir);
    cache.load();
    const auto ladder = cache.ladder(level, weight, parse_space(space), m_max, n_max);
    cache.save();
    o.text = "ladder N=" + std::to_string(level) + " k=" + std::to_string(weight) + " " + space +
             " covers m <= " + std::to_string(ladder->m_max()) + ", n <= " +
             std::to_string(ladder->n_max()) + "\n";
    files.push_back({{"level", level}, {"weight", weight}, {"space", space},
                     {"m_max", ladder->m_max()}, {"n_max", ladder->n_max()}});
  }
  o.body["files"] = std::move(files);
  o.body["summary"] = summary(true, 0, 0);
  return o;
}

// ---- dispatch -------------------------------------------------------------

int emit(const Outcome& o, const Global& g, std::ostream& out) {
  if (g.format == "json") {
    out << o.body.dump(2) << '\n';
  } else {
    out << o.text;
  }
  return o.code;
}

template <class F>
int guarded(F&& body, std::ostream& err) {
  try {
    return body();
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedLevel& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedPair& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IndexBelowRange& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IntegralityViolation& e) {
    err << "data integrity: " << e.what() << '\n';
    return kDataIntegrity;
  } catch (const FractionalValuation& e) {
    err << "data integrity: " << e.what() << '\n';
    return kDataIntegrity;
  } catch (const MixedWeight& e) {
    err << "data integrity: " << e.what() << '\n';
    return kDataIntegrity;
  } catch (const InsufficientPrecision& e) {
    err << "insufficient precision: " << e.what();
    if (e.required() >= 0) err << " (at least " << e.required() << " would suffice)";
    err << '\n';
    return kPrecision;
  } catch (const PrecisionExceeded& e) {
    err << "insufficient precision: " << e.what() << '\n';
    return kPrecision;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFail;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Canonical bases of weakly holomorphic modular forms on Gamma_0(N), "
               "N in {6, 10, 12, 18}, and checks of their identities and congruences.",
               "modbasis"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(
      "Exit codes: 0 pass, 1 check failed, 2 usage error, 3 data integrity, 4 precision.\n"
      "Cache directory: --cache-dir, else $MODBASIS_CACHE_DIR, else ./.modbasis-cache.");

  Global g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--cache-dir", g.cache_dir, "Directory for persisted ladders");
  app.add_flag("--no-cache", g.no_cache, "Do not read or write the cache directory");

  std::function<Outcome()> action;

  ExpandArgs ex;
  auto* expand = app.add_subcommand("expand", "Print the q-expansion of a basis element");
  expand->add_option("--level", ex.level, "Level N")->required();
  expand->add_option("--weight", ex.weight, "Even weight k")->capture_default_str();
  expand->add_option("--space", ex.space, "M (f basis) or S (g basis)")
      ->check(CLI::IsMember({"M", "S", "m", "s"}))
      ->capture_default_str();
  expand->add_option("--m", ex.m, "Pole order m")->required();
  expand->add_option("--terms", ex.terms, "Number of nonzero terms to print (0: all)");
  expand->add_option("--prec", ex.prec, "Precision: coefficients below q^prec")
      ->capture_default_str();
  expand->callback([&] { action = [&] { return cmd_expand(ex, g); }; });

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check an identity over a window");
  verify->require_subcommand(1);
  auto* duality = verify->add_subcommand("duality", "a_k(m,n) = -b_{2-k}(n,m)");
  duality->add_option("--level", va.level)->required();
  duality->add_option("--weight", va.weight)->capture_default_str();
  duality->add_option("--window", va.window, "Use m, n <= window")->capture_default_str();
  duality->add_option("--mmax", va.m_max);
  duality->add_option("--nmax", va.n_max);
  duality->callback([&] {
    action = [&] {
      return from_report("verify duality", va.level,
                         duality_check(va.level, va.weight, va.m_max.value_or(va.window),
                                       va.n_max.value_or(va.window)));
    };
  });
  auto* genfun = verify->add_subcommand("genfun", "Generating function of the f basis");
  genfun->add_option("--level", va.level)->required();
  genfun->add_option("--weight", va.weight)->capture_default_str();
  genfun->add_option("--mmax", va.m_max, "Last index in the sum (default 8)");
  genfun->add_option("--zprec", va.z_prec, "One-variable precision")->capture_default_str();
  genfun->callback([&] {
    action = [&] {
      check_precision(va.z_prec);
      return from_report("verify genfun", va.level,
                         genfun_check(va.level, va.weight, va.m_max.value_or(8), va.z_prec));
    };
  });
  auto* theta_cmd = verify->add_subcommand("theta", "theta f_{0,m} = -m g_{2,m}");
  theta_cmd->add_option("--level", va.level)->required();
  theta_cmd->add_option("--mmax", va.m_max, "Largest m (default 20)");
  theta_cmd->add_option("--min-window", va.min_window)->capture_default_str();
  theta_cmd->callback([&] {
    action = [&] {
      return from_report("verify theta", va.level,
                         theta_check(va.level, va.m_max.value_or(20), va.min_window));
    };
  });
  auto* uplemma = verify->add_subcommand("uplemma", "U_p from level 12/18 down to level 6");
  uplemma->add_option("--level", va.level)->required();
  uplemma->add_option("--mmax", va.m_max, "Largest m (default 24)");
  uplemma->add_option("--min-window", va.min_window)->capture_default_str();
  uplemma->callback([&] {
    action = [&] {
      return from_report("verify uplemma", va.level,
                         up_lemma_check(va.level, va.m_max.value_or(24), va.min_window));
    };
  });
  auto* al = verify->add_subcommand("al", "Atkin-Lehner expansion identities");
  al->add_option("--level", va.level)->required();
  al->add_option("--p", va.p)->required();
  al->add_option("--r", va.r_set, "Residues prime to p")->delimiter(',')->capture_default_str();
  al->add_option("--amax", va.a_max)->capture_default_str();
  al->add_option("--sign", va.sign, "Force a sign instead of searching")
      ->check(CLI::IsMember({-1, 1}));
  al->add_option("--window", va.min_window, "Coefficients compared")->capture_default_str();
  al->callback([&] {
    va.min_window = std::max<Exponent>(va.min_window, 1);
    action = [&] { return cmd_verify_al(va); };
  });

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "p-adic valuations of a_0(p^a r, p^b s)");
  scan->add_option("--level", sa.level)->required();
  scan->add_option("--p", sa.p)->required();
  scan->add_option("--amax", sa.a_max)->capture_default_str();
  scan->add_option("--bmax", sa.b_max)->capture_default_str();
  scan->add_option("--r", sa.r_set, "Residues r (default: first three prime to p)")
      ->delimiter(',');
  scan->add_option("--s", sa.s_set, "Residues s (default: first three prime to p)")
      ->delimiter(',');
  scan->add_option("--ncap", sa.n_cap, "Largest index m or n")->capture_default_str();
  scan->add_flag("--require-weak", sa.require_weak,
                 "Keep only rows with a weak bound; fail if there are none");
  scan->add_option("--report", sa.report_path, "Also write rows to a .csv or .json file");
  scan->callback([&] { action = [&] { return cmd_scan(sa, g); }; });

  int v_level = 0;
  std::string v_fixture;
  Exponent v_prec = 64;
  auto* validate = app.add_subcommand("validate", "Check fixture invariants");
  validate->add_option("--level", v_level, "Level (default: all)");
  validate->add_option("--fixture", v_fixture, "Validate a fixture file instead")
      ->check(CLI::ExistingFile);
  validate->add_option("--prec", v_prec)->capture_default_str();
  validate->callback([&] { action = [&] { return cmd_validate(v_level, v_fixture, v_prec); }; });

  std::string c_action;
  int c_level = 0;
  int c_weight = 0;
  std::string c_space = "M";
  Exponent c_mmax = 50;
  Exponent c_nmax = 100;
  auto* cache = app.add_subcommand("cache", "Inspect, warm or clear the ladder cache");
  cache->add_option("action", c_action)->required()->check(CLI::IsMember({"info", "warm", "clear"}));
  cache->add_option("--level", c_level);
  cache->add_option("--weight", c_weight)->capture_default_str();
  cache->add_option("--space", c_space)->check(CLI::IsMember({"M", "S"}))->capture_default_str();
  cache->add_option("--mmax", c_mmax)->capture_default_str();
  cache->add_option("--nmax", c_nmax)->capture_default_str();
  cache->callback([&] {
    action = [&] { return cmd_cache(c_action, g, c_level, c_weight, c_space, c_mmax, c_nmax); };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }
  if (!action) return kUsage;

  const bool persist = !g.no_cache && c_action.empty();
  return guarded(
      [&] {
        if (persist) {
          BasisCache::global().set_directory(resolve_cache_dir(g));
          BasisCache::global().load();
        }
        const Outcome o = action();
        if (persist) {
          try {
            BasisCache::global().save();
          } catch (const std::exception& e) {
            err << "warning: cache not saved: " << e.what() << '\n';
          }
        }
        return emit(o, g, out);
      },
      err);
}

}  // namespace modbasis::cli
