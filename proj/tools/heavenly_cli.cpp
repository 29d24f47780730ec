#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heavenly/heavenly.h"
#include "json.hpp"

using nlohmann::ordered_json;

namespace {

enum Exit { kPass = 0, kInternal = 1, kUsage = 2, kConditional = 3, kAbort = 4 };

struct CliError {
  int code;
  std::string message;
};

int exit_for(hv_error e) {
  switch (e) {
  case HV_OK:
    return kPass;
  case HV_E_INVALID_ARGUMENT:
  case HV_E_UNKNOWN_ID:
  case HV_E_UNKNOWN_SOLUTION:
  case HV_E_MISSING_JET:
    return kUsage;
  case HV_E_SAMPLE_AT_POLE:
  case HV_E_NUMERIC_ABORT:
    return kAbort;
  default:
    return kInternal;
  }
}

void check(hv_error e) {
  if (e != HV_OK)
    throw CliError{exit_for(e), hv_last_error()};
}

std::string take(char* s) {
  std::string out(s ? s : "");
  hv_string_free(s);
  return out;
}

class Spec {
public:
  Spec(const std::string& id, int k) { check(hv_spec_open(id.c_str(), k, &h_)); }
  ~Spec() { hv_spec_close(h_); }
  Spec(const Spec&) = delete;
  Spec& operator=(const Spec&) = delete;
  const hv_spec* get() const { return h_; }

private:
  hv_spec* h_ = nullptr;
};

class Result {
public:
  explicit Result(hv_result* r) : r_(r) {}
  ~Result() { hv_result_free(r_); }
  Result(const Result&) = delete;
  Result& operator=(const Result&) = delete;
  hv_status status() const { return hv_result_status(r_); }
  ordered_json json() const { return ordered_json::parse(hv_result_json(r_)); }
  std::string text() const { return hv_result_text(r_); }
  std::string csv() const { return hv_result_csv(r_); }

private:
  hv_result* r_;
};

template <class F>
std::unique_ptr<Result> run(F&& f) {
  hv_result* r = nullptr;
  check(f(&r));
  return std::make_unique<Result>(r);
}

// worst status wins: FAIL, then CONDITIONAL
struct Tally {
  bool fail = false;
  bool conditional = false;
  ordered_json results = ordered_json::array();

  void add(const Result& r, bool quiet) {
    if (!quiet)
      std::cout << r.text();
    fail = fail || r.status() == HV_FAIL;
    conditional = conditional || r.status() == HV_CONDITIONAL;
    results.push_back(r.json());
  }
  int code() const { return fail ? kInternal : conditional ? kConditional : kPass; }
};

std::string timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

ordered_json envelope(const std::vector<std::string>& argv, ordered_json results, int code) {
  return {{"schema", "heavenly.report/1"}, {"tool", "heavenly"},  {"version", hv_version()}, {"command", argv},
          {"timestamp", timestamp()},      {"exit_code", code},   {"results", std::move(results)}};
}

void write_text(const std::string& path, const std::string& body) {
  if (path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw CliError{kInternal, "cannot write " + path};
  os << body;
}

void write_report(const std::string& path, const std::vector<std::string>& argv, const Tally& t) {
  if (!path.empty())
    write_text(path, envelope(argv, t.results, t.code()).dump(2) + "\n");
}

std::string pad(std::string s, std::size_t w) {
  std::size_t len = 0;
  for (unsigned char c : s)
    len += (c & 0xC0) != 0x80;
  if (len < w)
    s.append(w - len, ' ');
  return s;
}

} // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Lax-pair, Casimir and numeric checks for a catalog of heavenly-type equations", "heavenly"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hv_version());

  // catalog
  auto* cat = app.add_subcommand("catalog", "list, show or export catalog entries");
  cat->require_subcommand(1);
  bool list_json = false;
  auto* cat_list = cat->add_subcommand("list", "table of catalog entries");
  cat_list->add_flag("--json", list_json, "print JSON instead of the table");
  std::string show_id;
  int show_k = 0;
  bool show_json = false;
  auto* cat_show = cat->add_subcommand("show", "render one entry");
  cat_show->add_option("id", show_id, "equation id")->required();
  cat_show->add_option("--k", show_k, "family parameter");
  cat_show->add_flag("--json", show_json, "print the entry as JSON");
  std::string export_path;
  auto* cat_export = cat->add_subcommand("export", "write the full catalog as JSON");
  cat_export->add_option("--json", export_path, "output path, - for stdout")->required();

  // verify
  auto* ver = app.add_subcommand("verify", "symbolic verification");
  ver->require_subcommand(1);
  std::string vid, vjson, variant;
  int vk = 0, index = 0, extra = 0;
  bool all_variants = false, families = false;
  auto* v_lax = ver->add_subcommand("lax", "Lax compatibility of an entry");
  v_lax->add_option("id", vid, "equation or family id")->required();
  v_lax->add_option("--k", vk, "family parameter");
  v_lax->add_option("--variant", variant, "check a catalogued alternative reading");
  v_lax->add_flag("--all-variants", all_variants, "check the main entry and every variant");
  v_lax->add_option("--json", vjson, "report path, - for stdout");
  auto* v_cas = ver->add_subcommand("casimir", "Casimir residual order");
  v_cas->add_option("id", vid, "equation or family id")->required();
  v_cas->add_option("--k", vk, "family parameter");
  v_cas->add_option("--index", index, "1-based gradient index; all when omitted");
  v_cas->add_option("--extra-orders", extra, "orders computed past the threshold");
  v_cas->add_option("--json", vjson, "report path, - for stdout");
  auto* v_ex = ver->add_subcommand("exactness", "closedness of the seeds");
  v_ex->add_option("id", vid, "equation or family id")->required();
  v_ex->add_option("--k", vk, "family parameter");
  v_ex->add_option("--json", vjson, "report path, - for stdout");
  auto* v_all = ver->add_subcommand("all", "every check for every base entry");
  v_all->add_flag("--families", families, "also verify family instances at k = 2, 3");
  v_all->add_option("--json", vjson, "report path, - for stdout");

  // simulate
  auto* sim = app.add_subcommand("simulate", "time integration");
  sim->require_subcommand(1);
  hv_grid grid = hv_grid_default();
  double tmax = 1.0;
  std::string init = "single_mode", out_dir = ".";
  int record_every = 1;
  bool richardson = false;
  auto* sim_dkp = sim->add_subcommand("dkp", "pseudo-spectral dKP solver");
  sim_dkp->add_option("--nx", grid.nx, "grid points in x")->capture_default_str();
  sim_dkp->add_option("--ny", grid.ny, "grid points in y")->capture_default_str();
  sim_dkp->add_option("--dt", grid.dt, "time step")->capture_default_str();
  sim_dkp->add_option("--cfl", grid.cfl, "CFL constant")->capture_default_str();
  sim_dkp->add_option("--tmax", tmax, "final time")->capture_default_str();
  sim_dkp->add_option("--init", init, "constant, single_mode or oblique_mode")->capture_default_str();
  sim_dkp->add_option("--out", out_dir, "output directory")->capture_default_str();
  sim_dkp->add_option("--record-every", record_every, "diagnostics stride in steps")->capture_default_str();
  sim_dkp->add_flag("--richardson", richardson, "also run dt/2 and dt/4 and report the ratio");

  // check
  auto* chk = app.add_subcommand("check", "numeric checks");
  chk->require_subcommand(1);
  std::string cid, solution, cjson;
  int ck = 0, samples = 100;
  std::uint64_t seed = 7;
  double flow_h = 0.05;
  auto* chk_num = chk->add_subcommand("numeric", "manufactured residual, numeric Lax residual and flow commutator");
  chk_num->add_option("id", cid, "equation or family id")->required();
  chk_num->add_option("--k", ck, "family parameter");
  chk_num->add_option("--solution", solution, "built-in solution")->required();
  chk_num->add_option("--samples", samples, "sample count")->capture_default_str();
  chk_num->add_option("--seed", seed, "sample seed")->capture_default_str();
  chk_num->add_option("--flow-h", flow_h, "flow step; 0 skips the flow check")->capture_default_str();
  chk_num->add_option("--json", cjson, "report path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  }

  try {
    if (cat_list->parsed()) {
      auto a = ordered_json::parse(take([] {
        char* s = nullptr;
        check(hv_catalog_list_json(&s));
        return s;
      }()));
      if (list_json) {
        std::cout << a.dump(2) << "\n";
        return kPass;
      }
      std::cout << pad("id", 20) << pad("n", 4) << pad("backend", 13) << pad("family", 10) << pad("casimirs", 10)
                << "title\n";
      for (const auto& e : a)
        std::cout << pad(e["id"], 20) << pad(std::to_string(e["n"].get<int>()), 4) << pad(e["backend"], 13)
                  << pad(e["family"].is_null() ? "-" : e["family"].get<std::string>(), 10)
                  << pad(std::to_string(e["casimirs"].get<int>()), 10) << e["title"].get<std::string>() << "\n";
      return kPass;
    }
    if (cat_show->parsed()) {
      Spec s(show_id, show_k);
      char* out = nullptr;
      check(show_json ? hv_spec_json(s.get(), &out) : hv_spec_describe(s.get(), &out));
      std::cout << take(out) << (show_json ? "\n" : "");
      return kPass;
    }
    if (cat_export->parsed()) {
      char* out = nullptr;
      check(hv_catalog_json(&out));
      write_text(export_path, take(out) + "\n");
      return kPass;
    }

    const bool quiet = (vjson == "-" || cjson == "-");
    if (v_lax->parsed()) {
      Spec s(vid, vk);
      Tally t;
      if (all_variants) {
        t.add(*run([&](hv_result** r) { return hv_verify_lax(s.get(), nullptr, r); }), quiet);
        for (int i = 0; i < hv_spec_variant_count(s.get()); ++i) {
          auto r = run([&](hv_result** o) { return hv_verify_lax(s.get(), hv_spec_variant_label(s.get(), i), o); });
          if (!quiet)
            std::cout << r->text();
          // variants are alternative readings; their FAIL is the expected outcome
          t.results.push_back(r->json());
        }
      } else {
        t.add(*run([&](hv_result** r) { return hv_verify_lax(s.get(), variant.empty() ? nullptr : variant.c_str(), r); }),
              quiet);
      }
      write_report(vjson, args, t);
      return t.code();
    }
    if (v_cas->parsed()) {
      Spec s(vid, vk);
      Tally t;
      const int count = hv_spec_casimir_count(s.get());
      if (index == 0) {
        for (int i = 1; i <= count; ++i)
          t.add(*run([&](hv_result** r) { return hv_verify_casimir(s.get(), i, extra, r); }), quiet);
      } else {
        t.add(*run([&](hv_result** r) { return hv_verify_casimir(s.get(), index, extra, r); }), quiet);
      }
      write_report(vjson, args, t);
      return t.code();
    }
    if (v_ex->parsed()) {
      Spec s(vid, vk);
      Tally t;
      t.add(*run([&](hv_result** r) { return hv_verify_exactness(s.get(), r); }), quiet);
      write_report(vjson, args, t);
      return t.code();
    }
    if (v_all->parsed()) {
      auto list = ordered_json::parse(take([] {
        char* s = nullptr;
        check(hv_catalog_list_json(&s));
        return s;
      }()));
      Tally t;
      auto verify_entry = [&](const std::string& id, int k) {
        Spec s(id, k);
        t.add(*run([&](hv_result** r) { return hv_verify_lax(s.get(), nullptr, r); }), quiet);
        for (int i = 1; i <= hv_spec_casimir_count(s.get()); ++i)
          t.add(*run([&](hv_result** r) { return hv_verify_casimir(s.get(), i, 0, r); }), quiet);
        t.add(*run([&](hv_result** r) { return hv_verify_exactness(s.get(), r); }), quiet);
      };
      for (const auto& e : list)
        verify_entry(e["id"], 0);
      if (families)
        for (const auto& e : list)
          if (!e["family"].is_null())
            for (int k : {2, 3})
              verify_entry(e["family"], k);
      write_report(vjson, args, t);
      return t.code();
    }
    if (sim_dkp->parsed()) {
      hv_result* raw = nullptr;
      hv_error err = hv_simulate_dkp(grid, init.c_str(), tmax, record_every, &raw);
      if (err == HV_E_NUMERIC_ABORT) {
        std::cerr << "heavenly: numeric abort at step " << hv_last_abort_step() << ": " << hv_last_error() << "\n";
        return kAbort;
      }
      check(err);
      Result r(raw);
      ordered_json summary = r.json();
      if (richardson) {
        double ratio = 0;
        check(hv_dkp_richardson(grid, init.c_str(), tmax, &ratio));
        summary["richardson_ratio"] = ratio;
        std::cout << "richardson ratio " << ratio << "\n";
      }
      std::filesystem::create_directories(out_dir);
      const auto dir = std::filesystem::path(out_dir);
      write_text((dir / "dkp_diagnostics.csv").string(), r.csv());
      ordered_json results = ordered_json::array({summary});
      write_text((dir / "dkp_summary.json").string(), envelope(args, results, kPass).dump(2) + "\n");
      std::cout << r.text();
      return kPass;
    }
    if (chk_num->parsed()) {
      Spec s(cid, ck);
      Tally t;
      t.add(*run([&](hv_result** r) {
              return hv_check_numeric(s.get(), solution.c_str(), samples, seed, flow_h, r);
            }),
            quiet);
      write_report(cjson, args, t);
      return t.code();
    }
  } catch (const CliError& e) {
    std::cerr << "heavenly: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "heavenly: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
