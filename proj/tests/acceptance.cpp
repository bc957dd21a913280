// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Every tolerance is fixed here, in code; the registry defaults supply the
// experiment sizes unless a criterion pins its own.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlab/checks.hpp"

using dlab::CheckReport;
using dlab::run_check;
using nlohmann::json;

namespace {

int failures = 0;

struct Criterion {
  int number;
  std::string label;
  bool ok = true;
  std::vector<std::string> details;
  std::int64_t budget_ms = 0;
  std::int64_t elapsed_ms = 0;

  void require(bool cond, const std::string& what) {
    ok = ok && cond;
    if (!cond) details.push_back("FAILED: " + what);
  }
  void note(const std::string& what) { details.push_back(what); }
};

void report(const Criterion& c) {
  if (!c.ok) ++failures;
  std::printf("[%s] criterion %2d: %s (%lld ms / budget %lld ms)\n",
              c.ok ? "PASS" : "FAIL", c.number, c.label.c_str(),
              static_cast<long long>(c.elapsed_ms),
              static_cast<long long>(c.budget_ms));
  for (const auto& d : c.details) std::printf("         %s\n", d.c_str());
}

template <class Fn>
void run(int number, const std::string& label, std::int64_t budget_ms, Fn&& fn) {
  Criterion c;
  c.number = number;
  c.label = label;
  c.budget_ms = budget_ms;
  const auto t0 = std::chrono::steady_clock::now();
  fn(c);
  const auto t1 = std::chrono::steady_clock::now();
  c.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  c.require(c.elapsed_ms < budget_ms, "runtime exceeded the budget");
  report(c);
}

double metric(const CheckReport& rep, const std::string& key) {
  return rep.metrics.at(key);
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

int main() {
  // 1. composition relation: 20 generator pairs, 1000 points, rel err < 1e-9
  run(1, "composition-relation", 5000, [](Criterion& c) {
    const auto rep = run_check("composition-relation",
                               json{{"pairs", 20}, {"points_per_pair", 50}}, 42);
    c.require(rep.pass, "check reported failure");
    c.require(metric(rep, "max_rel_err") < 1e-9, "pointwise error >= 1e-9");
    c.note("max_rel_err = " + fmt(metric(rep, "max_rel_err")));
  });

  // 2. surface preservation (words <= 10, defect < 1e-8) and the inverse law
  run(2, "surface-preservation + inverse-law", 5000, [](Criterion& c) {
    const auto sp = run_check("surface-preservation", json::object(), 42);
    c.require(sp.pass, "surface-preservation failed");
    c.require(metric(sp, "max_defect") < 1e-8, "word defect >= 1e-8");
    const auto il = run_check("inverse-law", json::object(), 42);
    c.require(il.pass, "inverse-law failed");
    c.require(metric(il, "max_rel_err") < 1e-9, "inverse round trip >= 1e-9");
    c.note("defect = " + fmt(metric(sp, "max_defect")) +
           ", inverse = " + fmt(metric(il, "max_rel_err")));
  });

  // 3. order-6 linear automorphism of the quadric surface
  run(3, "counterexample-n2", 1000, [](Criterion& c) {
    const auto rep = run_check("counterexample-n2", json::object(), 42);
    c.require(rep.pass, "check reported failure");
    c.require(metric(rep, "max_entry_A6_minus_id") < 1e-12, "A^6 differs from id");
    c.require(metric(rep, "max_surface_defect") < 1e-12, "A leaves the surface");
    c.note("|A^6 - id| = " + fmt(metric(rep, "max_entry_A6_minus_id")));
  });

  // 4. six integer shear factors multiply to the exact identity
  run(4, "shear-identity-n1", 1000, [](Criterion& c) {
    const auto rep = run_check("shear-identity-n1", json::object(), 42);
    c.require(rep.pass, "check reported failure");
    c.require(metric(rep, "max_integer_deviation") == 0.0, "product is not exact");
  });

  // 5. coordinate growth at the stated configuration
  run(5, "coordinate-growth", 60000, [](Criterion& c) {
    const auto rep = run_check(
        "coordinate-growth",
        json{{"poly", "-1,0,0,0,1"}, {"r_start", 100}, {"factor", 10},
             {"steps", 5}, {"samples", 200000}},
        42);
    c.require(rep.pass, "check reported failure");
    const double slope = metric(rep, "slope_z");
    const double rxz = metric(rep, "ratio_xz_top");
    const double rxy = metric(rep, "ratio_xy_top");
    c.require(slope > 1.8 && slope < 2.2, "slope of T(z) off [1.8, 2.2]");
    c.require(rxz > 1.8 && rxz < 2.2, "T(x)/T(z) off [1.8, 2.2]");
    c.require(rxy > 0.95 && rxy < 1.05, "T(x)/T(y) off [0.95, 1.05]");
    c.note("slope = " + fmt(slope) + ", T(x)/T(z) = " + fmt(rxz) +
           ", T(x)/T(y) = " + fmt(rxy));
  });

  // 6. cubic composition triples the growth
  run(6, "mohonko-polynomial", 30000, [](Criterion& c) {
    const auto rep = run_check("mohonko-polynomial",
                               json{{"q", "1,0,0,1"}, {"r", 1e5}}, 42);
    c.require(rep.pass, "check reported failure");
    const double ratio = metric(rep, "ratio");
    c.require(ratio > 2.7 && ratio < 3.3, "T(q(z))/T(z) off [2.7, 3.3]");
    c.note("ratio = " + fmt(ratio));
  });

  // 7. exponential composition exceeds any fixed multiple (surrogate > 5)
  run(7, "transcendental-growth", 30000, [](Criterion& c) {
    const auto rep =
        run_check("transcendental-growth", json{{"r", 1e3}, {"threshold", 5.0}}, 42);
    c.require(rep.pass, "check reported failure");
    c.require(metric(rep, "ratio") > 5.0, "T(e^z)/T(z) <= 5");
    c.note("ratio = " + fmt(metric(rep, "ratio")));
  });

  // 8. chart Jacobian of one involution-overshear step matches -dw/dz
  run(8, "jacobi-step-ratio", 10000, [](Criterion& c) {
    const auto rep = run_check("jacobi-step-ratio",
                               json{{"points", 100}, {"margin", 1e-3}}, 42);
    c.require(rep.pass, "check reported failure");
    c.require(metric(rep, "max_rel_err_shear") < 1e-4, "shear step error >= 1e-4");
    c.require(metric(rep, "max_rel_err_general") < 1e-4,
              "general step error >= 1e-4");
    c.note("max rel err = " +
           fmt(std::max(metric(rep, "max_rel_err_shear"),
                        metric(rep, "max_rel_err_general"))));
  });

  // 9. one shear step at least doubles the growth ratio (target 3 for n = 4)
  run(9, "step1-ratio", 60000, [](Criterion& c) {
    const auto rep = run_check(
        "step1-ratio",
        json{{"poly", "-1,0,0,0,1"}, {"r_start", 100}, {"factor", 10},
             {"steps", 4}, {"samples", 200000}, {"threshold", 2.0}},
        42);
    c.require(rep.pass, "check reported failure");
    for (int i = 1; i <= 3; ++i) {
      const double ratio = metric(rep, "ratio_r" + std::to_string(i));
      c.require(ratio >= 2.0,
                "ratio at grid point " + std::to_string(i) + " below 2.0");
    }
    c.note("top ratio = " + fmt(metric(rep, "ratio_r3")));
  });

  // 10. the ratio advantage survives three alternating steps on the quintic
  run(10, "stepk-propagation", 120000, [](Criterion& c) {
    const auto rep = run_check(
        "stepk-propagation",
        json{{"poly", "1,-1,0,0,0,1"}, {"r_start", 100}, {"factor", 10},
             {"steps", 3}, {"samples", 200000}, {"threshold", 1.1}},
        42);
    c.require(rep.pass, "check reported failure");
    for (int k = 1; k <= 3; ++k)
      for (int i = 1; i <= 2; ++i) {
        const double ratio = metric(
            rep, "ratio_k" + std::to_string(k) + "_r" + std::to_string(i));
        c.require(ratio > 1.1, "ratio k=" + std::to_string(k) + " grid " +
                                   std::to_string(i) + " below 1.1");
      }
    c.note("k=3 top ratio = " + fmt(metric(rep, "ratio_k3_r2")));
  });

  // 11. T(x e^z) = T(y e^-z) within 3 paired standard errors
  run(11, "proper-subgroup", 60000, [](Criterion& c) {
    const auto rep = run_check(
        "proper-subgroup",
        json{{"r_start", 100}, {"factor", 10}, {"steps", 2}, {"samples", 200000}},
        42);
    c.require(rep.pass, "check reported failure");
    for (int i = 0; i < 2; ++i) {
      const double diff = metric(rep, "diff_r" + std::to_string(i));
      const double se = metric(rep, "stderr_r" + std::to_string(i));
      c.require(std::abs(diff) <= 3.0 * se,
                "difference at grid point " + std::to_string(i) +
                    " outside 3 sigma");
    }
    c.note("diffs = " + fmt(metric(rep, "diff_r0")) + ", " +
           fmt(metric(rep, "diff_r1")));
  });

  // 12. conjugation normal form: shape and pointwise witness for 50 words
  run(12, "sequence-normal-form", 30000, [](Criterion& c) {
    const auto rep = run_check("sequence-normal-form",
                               json{{"words", 50}, {"max_len", 8}}, 42);
    c.require(rep.pass, "check reported failure");
    c.require(metric(rep, "bad_shapes") == 0.0, "some normal form had bad shape");
    c.require(metric(rep, "max_witness_err") < 1e-8, "witness error >= 1e-8");
    c.note("witness = " + fmt(metric(rep, "max_witness_err")));
  });

  // 13. pointwise identities: invariant split, field combinations, square
  // completion — all to 1e-6
  run(13, "invariant-decomposition + theta-combination + square-completion",
      10000, [](Criterion& c) {
        const auto inv = run_check("invariant-decomposition", json::object(), 42);
        c.require(inv.pass, "invariant-decomposition failed");
        c.require(metric(inv, "max_pointwise_err") < 1e-6,
                  "decomposition identity >= 1e-6");
        c.require(metric(inv, "t_diff") == 0.0,
                  "T changed under the involution");
        const auto theta = run_check("theta-combination", json::object(), 42);
        c.require(theta.pass, "theta-combination failed");
        c.require(metric(theta, "max_err_pushed") < 1e-6 &&
                      metric(theta, "max_err_tilde") < 1e-6,
                  "field combination identity >= 1e-6");
        const auto sq = run_check("square-completion", json::object(), 42);
        c.require(sq.pass, "square-completion failed");
        c.require(metric(sq, "max_residual") < 1e-6, "completion residual >= 1e-6");
      });

  // 14. derivative growth report: estimator validity plus fitted (K, L)
  run(14, "main-estimate-report", 60000, [](Criterion& c) {
    const auto rep = run_check("main-estimate-report", json::object(), 42);
    c.require(rep.pass, "estimator validity failed");
    c.require(metric(rep, "max_skip_fraction") < 0.01, "skip rate >= 1%");
    c.note("fitted K = " + fmt(metric(rep, "K")) +
           ", L = " + fmt(metric(rep, "L")));
  });

  // 15. determinism: identical metrics for any worker count
  run(15, "determinism across worker counts", 120000, [](Criterion& c) {
    const std::vector<std::pair<std::string, json>> cases = {
        {"coordinate-growth", json{{"samples", 20000}}},
        {"proper-subgroup", json{{"samples", 20000}}},
        {"stepk-propagation", json{{"samples", 10000}}},
        {"sequence-normal-form", json::object()},
        {"main-estimate-report", json{{"samples", 5000}}},
    };
    for (const auto& [name, base] : cases) {
      json cfg1 = base;
      cfg1["workers"] = 1;
      json cfg4 = base;
      cfg4["workers"] = 4;
      const auto r1 = run_check(name, cfg1, 42);
      const auto r4 = run_check(name, cfg4, 42);
      bool same = r1.metrics.size() == r4.metrics.size();
      for (const auto& [k, v] : r1.metrics)
        same = same && r4.metrics.count(k) == 1 && r4.metrics.at(k) == v;
      c.require(same, name + " metrics differ between 1 and 4 workers");
    }
  });

  std::printf("%d of 15 criteria passed\n", 15 - failures);
  return failures == 0 ? 0 : 1;
}
