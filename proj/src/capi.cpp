#include "heavenly/heavenly.h"

#include <cstring>
#include <memory>
#include <sstream>

#include "heavenly/catalog.hpp"
#include "heavenly/numerics.hpp"
#include "heavenly/verify.hpp"

using namespace heavenly;
using nlohmann::ordered_json;

struct hv_spec {
  std::shared_ptr<const EquationSpec> spec;
};

struct hv_result {
  hv_status status = HV_INFO;
  std::string json;
  std::string text;
  std::string csv;
};

namespace {

thread_local std::string last_error;
thread_local int last_abort_step = -1;

hv_error fail(hv_error code, const std::string& what) {
  last_error = what;
  return code;
}

template <class F>
hv_error guarded(F&& f) {
  last_error.clear();
  last_abort_step = -1;
  try {
    f();
    return HV_OK;
  } catch (const NumericAbort& e) {
    last_abort_step = e.step;
    return fail(HV_E_NUMERIC_ABORT, e.what());
  } catch (const UnknownSolution& e) {
    return fail(HV_E_UNKNOWN_SOLUTION, e.what());
  } catch (const MissingJet& e) {
    return fail(HV_E_MISSING_JET, e.what());
  } catch (const SampleAtPole& e) {
    return fail(HV_E_SAMPLE_AT_POLE, e.what());
  } catch (const std::out_of_range& e) {
    return fail(HV_E_UNKNOWN_ID, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(HV_E_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(HV_E_INTERNAL, e.what());
  } catch (...) {
    return fail(HV_E_INTERNAL, "unknown exception");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out)
    throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p)
    throw std::invalid_argument(std::string(what) + " is null");
}

hv_status to_c(Status s) {
  switch (s) {
  case Status::Pass:
    return HV_PASS;
  case Status::Fail:
    return HV_FAIL;
  case Status::Conditional:
    return HV_CONDITIONAL;
  case Status::Info:
    return HV_INFO;
  }
  return HV_INFO;
}

const char* status_name(hv_status s) {
  switch (s) {
  case HV_PASS:
    return "PASS";
  case HV_FAIL:
    return "FAIL";
  case HV_CONDITIONAL:
    return "CONDITIONAL";
  case HV_INFO:
    return "INFO";
  }
  return "INFO";
}

std::string dump(const ordered_json& j) { return j.dump(2); }

void emit(hv_result** out, hv_status status, const ordered_json& j, std::string text, std::string csv = {}) {
  auto r = std::make_unique<hv_result>();
  r->status = status;
  r->json = dump(j);
  r->text = std::move(text);
  r->csv = std::move(csv);
  *out = r.release();
}

Grid2 from_c(const hv_grid& g) {
  Grid2 out;
  out.nx = g.nx;
  out.ny = g.ny;
  out.dt = g.dt;
  out.cfl = g.cfl;
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string numeric_text(const MmsReport& m, const LaxNumericReport& l, const std::optional<FlowReport>& f,
                         const std::string& flow_note, hv_status st) {
  std::string out = "numeric " + m.equation_id + " [" + m.solution + "]: " + status_name(st) + "\n";
  out += "  pde residual: max " + fmt(m.max_abs) + ", mean " + fmt(m.mean_abs) + " over " + std::to_string(m.samples) +
         " samples\n";
  out += "  lax residual: max |R| " + fmt(l.max_abs_residual) + ", condition error " + fmt(l.max_condition_error) +
         ", relation error " + fmt(l.max_relation_error) + ", bound ratio " + fmt(l.max_bound_ratio) +
         (l.skipped ? ", skipped " + std::to_string(l.skipped) : "") + (l.ok ? " (ok)" : " (mismatch)") + "\n";
  if (f) {
    out += "  flow gaps:";
    for (double g : f->gaps)
      out += " " + fmt(g);
    out += "; ratios:";
    for (double q : f->ratios)
      out += " " + fmt(q);
    out += std::string(f->at_roundoff ? " (at roundoff)" : f->order_four ? " (order 4)" : "") +
           (f->converges ? "" : " (does not converge)") + "\n";
    for (const auto& n : f->notes)
      out += "  note: " + n + "\n";
  } else {
    out += "  flow check skipped: " + flow_note + "\n";
  }
  for (const auto& n : l.notes)
    out += "  note: " + n + "\n";
  return out;
}

} // namespace

extern "C" {

const char* hv_version(void) { return "0.1.0"; }

const char* hv_last_error(void) { return last_error.c_str(); }

int hv_last_abort_step(void) { return last_abort_step; }

void hv_string_free(char* s) { std::free(s); }

hv_error hv_catalog_list_json(char** out) {
  return guarded([&] {
    require(out, "out");
    ordered_json a = ordered_json::array();
    for (const auto& e : catalog_list()) {
      const auto& s = catalog_get(e.id);
      a.push_back({{"id", e.id},
                   {"title", s.title},
                   {"n", e.n},
                   {"backend", backend_name(e.backend)},
                   {"family", e.family ? ordered_json(*e.family) : ordered_json(nullptr)},
                   {"casimirs", s.casimirs.size()},
                   {"seeds", s.seeds.size()}});
    }
    *out = dup(dump(a));
  });
}

hv_error hv_catalog_json(char** out) {
  return guarded([&] {
    require(out, "out");
    *out = dup(dump(catalog_json()));
  });
}

hv_error hv_catalog_validate_json(char** out) {
  return guarded([&] {
    require(out, "out");
    *out = dup(dump(ordered_json(catalog_validate_all())));
  });
}

hv_error hv_spec_open(const char* id, int k, hv_spec** out) {
  return guarded([&] {
    require(id, "id");
    require(out, "out");
    auto h = std::make_unique<hv_spec>();
    if (k <= 0)
      h->spec = std::shared_ptr<const EquationSpec>(std::shared_ptr<void>(), &catalog_get(id));
    else
      h->spec = std::make_shared<const EquationSpec>(catalog_instantiate(id, k));
    *out = h.release();
  });
}

void hv_spec_close(hv_spec* spec) { delete spec; }

const char* hv_spec_id(const hv_spec* spec) { return spec ? spec->spec->id.c_str() : ""; }

int hv_spec_casimir_count(const hv_spec* spec) { return spec ? static_cast<int>(spec->spec->casimirs.size()) : 0; }

int hv_spec_variant_count(const hv_spec* spec) { return spec ? static_cast<int>(spec->spec->variants.size()) : 0; }

const char* hv_spec_variant_label(const hv_spec* spec, int i) {
  if (!spec || i < 0 || i >= hv_spec_variant_count(spec))
    return nullptr;
  return spec->spec->variants[i].label.c_str();
}

hv_error hv_spec_json(const hv_spec* spec, char** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = dup(dump(spec_json(*spec->spec)));
  });
}

hv_error hv_spec_describe(const hv_spec* spec, char** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    const EquationSpec& s = *spec->spec;
    std::string t = s.id + ": " + s.title + "\n";
    t += "  n = " + std::to_string(s.n()) + ", backend " + backend_name(s.backend) + "\n";
    t += "  PDE: " + s.pde_text + "\n";
    auto sys = emit_lax_system(s);
    t += "  Lax pair: " + sys.text + "\n";
    for (std::size_t i = 0; i < s.casimirs.size(); ++i)
      t += "  Casimir " + std::to_string(i + 1) + ": " + s.casimirs[i].label + " at " + s.casimirs[i].point.str() + "\n";
    for (const auto& v : s.variants)
      t += "  variant " + v.label + ": " + v.note + "\n";
    for (const auto& n : s.notes)
      t += "  note: " + n + "\n";
    *out = dup(t);
  });
}

hv_error hv_verify_lax(const hv_spec* spec, const char* variant, hv_result** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    LaxOptions o;
    if (variant)
      o.variant = variant;
    auto r = verify_lax(*spec->spec, o);
    emit(out, to_c(r.status), report_json(r, *spec->spec->ctx), report_text(r, *spec->spec->ctx));
  });
}

hv_error hv_verify_casimir(const hv_spec* spec, int index, int extra_orders, hv_result** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    CasimirOptions o;
    if (extra_orders > 0)
      o.extra_orders = extra_orders;
    auto r = casimir_residual_order(*spec->spec, index, o);
    emit(out, to_c(r.status), report_json(r, *spec->spec->ctx), report_text(r, *spec->spec->ctx));
  });
}

hv_error hv_verify_exactness(const hv_spec* spec, hv_result** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    auto r = verify_exactness(*spec->spec);
    emit(out, to_c(r.status), report_json(r, *spec->spec->ctx), report_text(r, *spec->spec->ctx));
  });
}

hv_error hv_check_numeric(const hv_spec* spec, const char* solution, int samples, uint64_t seed, double flow_h,
                          hv_result** out) {
  return guarded([&] {
    require(spec, "spec");
    require(solution, "solution");
    require(out, "out");
    if (samples < 1)
      throw std::invalid_argument("samples must be positive");
    const EquationSpec& s = *spec->spec;
    auto sol = builtin_solution(solution, *s.ctx);
    auto pts = random_samples(s, samples, seed);
    auto mms = mms_residual(s, sol, pts);
    auto lax = lax_numeric_check(s, sol, pts);
    std::optional<FlowReport> flow;
    std::string note;
    if (flow_h <= 0)
      note = "no step given";
    else if (mms.max_abs >= 1e-12)
      note = "not a solution (max PDE residual " + fmt(mms.max_abs) + ")";
    else if (lax.skipped == lax.samples)
      note = "every sample is singular for this solution";
    else
      flow = flow_commutator_check(s, sol, pts.front(), flow_h);
    const bool ok = lax.ok && (!flow || flow->converges);
    const bool vacuous = lax.skipped == lax.samples;
    const hv_status st = !ok ? HV_FAIL : vacuous ? HV_CONDITIONAL : HV_PASS;
    ordered_json j{{"equation_id", s.id},
                   {"check", "numeric"},
                   {"solution", sol.name()},
                   {"samples", samples},
                   {"seed", seed},
                   {"status", status_name(st)},
                   {"mms", report_json(mms)},
                   {"lax_numeric", report_json(lax)}};
    j["flow"] = flow ? report_json(*flow) : ordered_json{{"check", "flow_commutator"}, {"skipped", note}};
    emit(out, st, j, numeric_text(mms, lax, flow, note, st));
  });
}

hv_grid hv_grid_default(void) {
  Grid2 g;
  return {g.nx, g.ny, g.dt, g.cfl};
}

hv_error hv_simulate_dkp(hv_grid grid, const char* init, double tmax, int record_every, hv_result** out) {
  return guarded([&] {
    require(init, "init");
    require(out, "out");
    Grid2 g = from_c(grid);
    auto r = dkp_solve(g, dkp_initial(init), tmax, record_every);
    ordered_json j = summary_json(r);
    j["check"] = "simulate";
    j["init"] = init;
    j["record_every"] = record_every;
    j["status"] = "PASS";
    std::ostringstream csv;
    write_csv(csv, r);
    std::string text = "simulate dkp [" + std::string(init) + "]: " + std::to_string(r.steps) + " steps to t = " +
                       fmt(r.tmax) + ", mass drift " + fmt(r.mass_drift) + ", max|u| " +
                       fmt(r.diagnostics.back().max_abs_u) + "\n";
    emit(out, HV_PASS, j, text, csv.str());
  });
}

hv_error hv_dkp_richardson(hv_grid grid, const char* init, double tmax, double* ratio) {
  return guarded([&] {
    require(init, "init");
    require(ratio, "ratio");
    Grid2 g = from_c(grid);
    *ratio = dkp_richardson(g, sample_grid(g, dkp_initial(init)), tmax).ratio;
  });
}

hv_status hv_result_status(const hv_result* r) { return r ? r->status : HV_INFO; }
const char* hv_result_json(const hv_result* r) { return r ? r->json.c_str() : ""; }
const char* hv_result_text(const hv_result* r) { return r ? r->text.c_str() : ""; }
const char* hv_result_csv(const hv_result* r) { return r ? r->csv.c_str() : ""; }
void hv_result_free(hv_result* r) { delete r; }

} // extern "C"
