#include "dlab/nevanlinna.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <thread>

namespace dlab {

namespace {

int default_workers() {
  static const int n = [] {
    if (const char* env = std::getenv("DLAB_WORKERS")) {
      const int v = std::atoi(env);
      if (v >= 1) return std::min(v, 64);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hc, 1u, 8u));
  }();
  return n;
}

// Fixed-shape pairwise sum: the reduction tree depends only on the index
// range, never on thread assignment.
double pairwise_sum(const double* v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 32) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

long double log_plus_abs(const clong& v) {
  const long double a = std::abs(v);
  if (!std::isfinite(a)) return a;  // propagate as skip marker
  return a > 1.0L ? std::log(a) : 0.0L;
}

// Runs fn(i) for i in [0, n) across the workers; each index is independent.
template <class Fn>
void parallel_for(std::int64_t n, int workers, Fn&& fn) {
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> futures;
  futures.reserve(static_cast<std::size_t>(workers));
  const std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    futures.push_back(std::async(std::launch::async, [lo, hi, &fn] {
      for (std::int64_t i = lo; i < hi; ++i) fn(i);
    }));
  }
  for (auto& f : futures) f.get();
}

struct Accumulated {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t used = 0;
  std::int64_t skipped = 0;
  bool valid = false;
};

// Serial two-pass moments over the sample buffer (skipped slots hold 0 and a
// mark); deterministic for any worker count that produced the buffer.
Accumulated accumulate(std::vector<double>& vals, const std::vector<unsigned char>& skip) {
  Accumulated acc;
  const std::size_t n = vals.size();
  for (std::size_t i = 0; i < n; ++i) acc.skipped += skip[i];
  acc.used = static_cast<std::int64_t>(n) - acc.skipped;
  if (acc.used <= 0) return acc;

  acc.mean = pairwise_sum(vals.data(), 0, n) / static_cast<double>(acc.used);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = skip[i] ? 0.0 : vals[i] - acc.mean;
    vals[i] = d * d;
  }
  if (acc.used > 1) {
    const double var =
        pairwise_sum(vals.data(), 0, n) / static_cast<double>(acc.used - 1);
    acc.std_error = std::sqrt(var / static_cast<double>(acc.used));
  }
  acc.valid = static_cast<double>(acc.skipped) < 0.01 * static_cast<double>(acc.used);
  return acc;
}

}  // namespace

SurfaceFunction SurfaceFunction::coord_x() {
  return {"x", [](const SurfacePointL& p) { return p.x; }};
}
SurfaceFunction SurfaceFunction::coord_y() {
  return {"y", [](const SurfacePointL& p) { return p.y; }};
}
SurfaceFunction SurfaceFunction::coord_z() {
  return {"z", [](const SurfacePointL& p) { return p.z; }};
}

SurfaceFunction SurfaceFunction::word_component(const Danielewski& S, Word w,
                                                Component c) {
  const char* names[] = {"u", "v", "w"};
  auto word = std::make_shared<const Word>(std::move(w));
  ComplexPoly p = S.poly();
  return {std::string(names[static_cast<int>(c)]) + "[word]",
          [p = std::move(p), word, c](const SurfacePointL& pt) -> clong {
            const SurfacePointL image = word_apply_raw(p, *word, pt);
            switch (c) {
              case Component::X: return image.x;
              case Component::Y: return image.y;
              default: return image.z;
            }
          }};
}

SurfaceFunction SurfaceFunction::after_involution() const {
  Fn inner = fn_;
  return {label_ + "∘I", [inner = std::move(inner)](const SurfacePointL& p) {
            return inner(SurfacePointL{p.y, p.x, p.z});
          }};
}

RSchedule::RSchedule(double r_start_, double factor_, int steps_)
    : r_start(r_start_), factor(factor_), steps(steps_) {
  if (!(r_start > 0.0)) throw std::invalid_argument("RSchedule: r_start must be > 0");
  if (!(factor > 1.0)) throw std::invalid_argument("RSchedule: factor must be > 1");
  if (steps < 1) throw std::invalid_argument("RSchedule: steps must be >= 1");
}

std::vector<double> RSchedule::grid() const {
  std::vector<double> out(static_cast<std::size_t>(steps));
  double r = r_start;
  for (int i = 0; i < steps; ++i) {
    out[static_cast<std::size_t>(i)] = r;
    r *= factor;
  }
  return out;
}

std::pair<cnum, cnum> sample_sphere(Rng& rng) {
  while (true) {
    const double g1 = rng.next_gaussian();
    const double g2 = rng.next_gaussian();
    const double g3 = rng.next_gaussian();
    const double g4 = rng.next_gaussian();
    const double norm = std::sqrt(g1 * g1 + g2 * g2 + g3 * g3 + g4 * g4);
    if (norm > 0.0)
      return {cnum(g1 / norm, g2 / norm), cnum(g3 / norm, g4 / norm)};
  }
}

CharacteristicEstimate characteristic(const Danielewski& S, const SurfaceFunction& F,
                                      double r, std::int64_t n, std::uint64_t seed,
                                      int workers) {
  if (!(r > 0.0)) throw std::invalid_argument("characteristic: r must be > 0");
  if (n < 100) throw std::invalid_argument("characteristic: needs n >= 100");
  const int w = workers > 0 ? workers : default_workers();

  std::vector<double> vals(static_cast<std::size_t>(n), 0.0);
  std::vector<unsigned char> skip(static_cast<std::size_t>(n), 0);
  const long double rl = r;

  parallel_for(n, w, [&](std::int64_t i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const auto [a, b] = sample_sphere(rng);
    const clong A = rl * clong(a.real(), a.imag());
    const clong B = rl * clong(b.real(), b.imag());
    const auto [p1, p2] = S.fiber<long double>(A, B);
    const long double t = log_plus_abs(F(p1)) + log_plus_abs(F(p2));
    const double td = static_cast<double>(t);
    if (std::isfinite(td)) {
      vals[static_cast<std::size_t>(i)] = td;
    } else {
      skip[static_cast<std::size_t>(i)] = 1;
    }
  });

  const Accumulated acc = accumulate(vals, skip);
  return {r, acc.mean, acc.std_error, acc.used, acc.skipped, seed, acc.valid};
}

PairedDifference characteristic_difference(const Danielewski& S,
                                           const SurfaceFunction& F1,
                                           const SurfaceFunction& F2, double r,
                                           std::int64_t n, std::uint64_t seed,
                                           int workers) {
  if (!(r > 0.0)) throw std::invalid_argument("characteristic: r must be > 0");
  if (n < 100) throw std::invalid_argument("characteristic: needs n >= 100");
  const int w = workers > 0 ? workers : default_workers();

  std::vector<double> vals(static_cast<std::size_t>(n), 0.0);
  std::vector<unsigned char> skip(static_cast<std::size_t>(n), 0);
  const long double rl = r;

  parallel_for(n, w, [&](std::int64_t i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const auto [a, b] = sample_sphere(rng);
    const clong A = rl * clong(a.real(), a.imag());
    const clong B = rl * clong(b.real(), b.imag());
    const auto [p1, p2] = S.fiber<long double>(A, B);
    const long double s1 = log_plus_abs(F1(p1)) + log_plus_abs(F1(p2));
    const long double s2 = log_plus_abs(F2(p1)) + log_plus_abs(F2(p2));
    const double td = static_cast<double>(s1 - s2);
    if (std::isfinite(td)) {
      vals[static_cast<std::size_t>(i)] = td;
    } else {
      skip[static_cast<std::size_t>(i)] = 1;
    }
  });

  const Accumulated acc = accumulate(vals, skip);
  return {r, acc.mean, acc.std_error, acc.used, acc.skipped, acc.valid};
}

SlopeFit slope_vs_logr(std::span<const CharacteristicEstimate> estimates) {
  if (estimates.size() < 3)
    throw std::invalid_argument("slope_vs_logr: needs at least 3 estimates");
  const std::size_t n = estimates.size();
  double xbar = 0.0;
  for (const auto& e : estimates) xbar += std::log(e.r);
  xbar /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0;
  for (const auto& e : estimates) {
    const double dx = std::log(e.r) - xbar;
    sxx += dx * dx;
    sxy += dx * e.mean;
  }
  if (sxx == 0.0)
    throw std::invalid_argument("slope_vs_logr: estimates must span distinct r");

  double var = 0.0;
  for (const auto& e : estimates) {
    const double c = (std::log(e.r) - xbar) / sxx;
    var += c * c * e.std_error * e.std_error;
  }
  return {sxy / sxx, std::sqrt(var)};
}

namespace {

struct TangentVector {
  cnum vx, vz;
};

TangentVector field_vector(const Danielewski& S, ThetaField which,
                           const SurfacePoint& P) {
  const double scale =
      1.0 + std::max({std::abs(P.x), std::abs(P.y), std::abs(P.z)});
  if (std::abs(P.x) <= 1e-8 * scale)
    throw std::runtime_error("theta: too close to the chart axis x = 0");
  switch (which) {
    case ThetaField::Theta1:
    case ThetaField::Theta2: {
      const cnum d = P.x - P.y;
      if (std::abs(d) <= 1e-8 * scale)
        throw std::runtime_error("theta: too close to the ramification locus x = y");
      if (which == ThetaField::Theta1) return {P.x / d, cnum(0.0)};
      const cnum dp = S.poly().divided_difference(P.z, P.z);  // p'(z)
      return {-dp / d, cnum(1.0)};
    }
    case ThetaField::Pushed:
      return {cnum(1.0), cnum(0.0)};
    case ThetaField::PushedTilde:
      return {cnum(0.0), cnum(1.0)};
  }
  return {cnum(0.0), cnum(0.0)};
}

}  // namespace

cnum theta_apply(const Danielewski& S, ThetaField which, const SurfaceFunction& F,
                 const SurfacePoint& P, double h) {
  const TangentVector v = field_vector(S, which, P);
  const clong vx(v.vx.real(), v.vx.imag());
  const clong vz(v.vz.real(), v.vz.imag());
  const clong x0(P.x.real(), P.x.imag());
  const clong z0(P.z.real(), P.z.imag());

  const double coord = std::max(std::abs(P.x), std::abs(P.z));
  const double speed = std::max(std::abs(v.vx), std::abs(v.vz));
  const long double t0 = h * (1.0 + coord) / (1.0 + speed);

  const auto along = [&](long double t) -> clong {
    const clong x = x0 + t * vx;
    const clong z = z0 + t * vz;
    return F(S.chart_unchecked(x, z));
  };
  const auto central = [&](long double t) -> clong {
    return (along(t) - along(-t)) / (2.0L * t);
  };
  const clong d = (4.0L * central(t0 / 2.0L) - central(t0)) / 3.0L;
  return {static_cast<double>(d.real()), static_cast<double>(d.imag())};
}

cnum jacobian_xz(const Danielewski& S, const Word& W, const SurfacePoint& P,
                 double h) {
  const double scale =
      1.0 + std::max({std::abs(P.x), std::abs(P.y), std::abs(P.z)});
  if (std::abs(P.x) <= 1e-8 * scale)
    throw std::runtime_error("jacobian_xz: too close to the chart axis x = 0");

  const ComplexPoly& p = S.poly();
  const clong x0(P.x.real(), P.x.imag());
  const clong z0(P.z.real(), P.z.imag());

  const SurfacePointL image0 = word_apply_raw(p, W, S.chart_unchecked(x0, z0));
  const long double image_scale =
      1.0L + std::max({std::abs(image0.x), std::abs(image0.y), std::abs(image0.z)});
  if (std::abs(image0.x) <= 1e-8L * image_scale)
    throw std::runtime_error("jacobian_xz: chart breakdown at the image (u near 0)");

  const auto at = [&](const clong& x, const clong& z) {
    return word_apply_raw(p, W, S.chart_unchecked(x, z));
  };
  // u and w components share each perturbed evaluation.
  const auto partials_x = [&](long double d) {
    const SurfacePointL plus = at(x0 + d, z0);
    const SurfacePointL minus = at(x0 - d, z0);
    return std::pair<clong, clong>{(plus.x - minus.x) / (2.0L * d),
                                   (plus.z - minus.z) / (2.0L * d)};
  };
  const auto partials_z = [&](long double d) {
    const SurfacePointL plus = at(x0, z0 + d);
    const SurfacePointL minus = at(x0, z0 - d);
    return std::pair<clong, clong>{(plus.x - minus.x) / (2.0L * d),
                                   (plus.z - minus.z) / (2.0L * d)};
  };

  const long double dx = h * (1.0 + std::abs(P.x));
  const long double dz = h * (1.0 + std::abs(P.z));
  const auto [ux_h, wx_h] = partials_x(dx);
  const auto [ux_h2, wx_h2] = partials_x(dx / 2.0L);
  const auto [uz_h, wz_h] = partials_z(dz);
  const auto [uz_h2, wz_h2] = partials_z(dz / 2.0L);

  const clong du_dx = (4.0L * ux_h2 - ux_h) / 3.0L;
  const clong dw_dx = (4.0L * wx_h2 - wx_h) / 3.0L;
  const clong du_dz = (4.0L * uz_h2 - uz_h) / 3.0L;
  const clong dw_dz = (4.0L * wz_h2 - wz_h) / 3.0L;

  const clong jac = (x0 / image0.x) * (du_dx * dw_dz - du_dz * dw_dx);
  return {static_cast<double>(jac.real()), static_cast<double>(jac.imag())};
}

std::string characteristic_csv_header() {
  return "r,mean,stderr,n_samples,n_skipped,seed";
}

std::string characteristic_csv_row(const CharacteristicEstimate& e) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%lld,%lld,%llu", e.r, e.mean,
                e.std_error, static_cast<long long>(e.n_samples),
                static_cast<long long>(e.n_skipped),
                static_cast<unsigned long long>(e.seed));
  return buf;
}

}  // namespace dlab
