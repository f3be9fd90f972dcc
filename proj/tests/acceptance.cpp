// Acceptance criteria AC-1..AC-10: one PASS/FAIL line each, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "mrft/multiplier.hpp"
#include "mrft/transforms.hpp"
#include "mrft/verify.hpp"

using namespace mrft;
using std::numbers::pi;

namespace {

constexpr double kTwoPi = 2 * pi;

struct Outcome {
  bool pass;
  std::string detail;
};

QuadratureSpec with_tol(double tol) {
  QuadratureSpec q;
  q.tol = tol;
  return q;
}

Eigen::ArrayXd one(double r) { return Eigen::ArrayXd::Constant(1, r); }

double d1(const PartialField& f, double w, int order) {
  const double x[1] = {w};
  const int o[1] = {order};
  return f(x, o);
}

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::ArrayXd R = Eigen::ArrayXd::LinSpaced(50, 0.1, 4.0);
  const QuadratureSpec q = with_tol(1e-12);
  double worst = 0.0;
  bool converged = true;
  const auto score = [&](const SampledTransform& t) {
    converged = converged && t.all_converged();
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      double s = 0.0;
      for (double r : t.point(i)) s += r * r;
      const double want = std::exp(-pi * s);
      worst = std::max(worst, std::abs(t.values(i) - want) / std::max(1e-6 * want, 1e-12) * 1e-6);
    }
  };
  const RadialProfile g1 = catalog_get("gaussian"), g2 = catalog_get("gaussian", 2);
  for (int n = 1; n <= 5; ++n) score(direct_transform(g1, DimensionSignature({n}), {R}, q));
  for (auto dims : {std::vector<int>{1, 1}, {3, 3}, {3, 1}}) score(direct_transform(g2, DimensionSignature(dims), {R, R}, q));
  const double wall = seconds_since(t0);
  return {worst <= 1e-6 && converged && wall < 120.0,
          "worst relative error " + g(worst) + " (tol 1e-6, floor 1e-12), " + g(wall) + " s"};
}

Outcome ac2() {
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::ArrayXd R = Eigen::ArrayXd::LinSpaced(20, 0.2, 3.0);
  const QuadratureSpec q = with_tol(1e-11);
  double worst_odd = 0.0, worst_even = 0.0, worst_odd2 = 0.0, worst_even2 = 0.0;
  const auto rel = [](double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-4); };
  for (const char* name : {"gaussian", "bump_hat"}) {
    const RadialProfile p = catalog_get(name);
    const DerivativeProvider odd = DerivativeProvider::analytic(1, p.phi_hat);
    const DerivativeProvider even = DerivativeProvider::analytic(1, p.f2);
    for (int k = 1; k <= 2; ++k) {
      const SampledTransform d = direct_transform(p, DimensionSignature({2 * k + 1}), {R}, q);
      const int kk[1] = {k};
      for (Eigen::Index i = 0; i < R.size(); ++i) {
        const double x[1] = {R(i)};
        worst_odd = std::max(worst_odd, rel(recursion_odd(odd, kk, x), d.values(i)));
      }
    }
    const SampledTransform d4 = direct_transform(p, DimensionSignature({4}), {R}, q);
    const int k1[1] = {1};
    for (Eigen::Index i = 0; i < R.size(); ++i) {
      const double x[1] = {R(i)};
      worst_even = std::max(worst_even, rel(recursion_even(even, k1, x), d4.values(i)));
    }
    // separable m=2 case on a coarser grid
    const RadialProfile p2 = catalog_get(name, 2);
    const Eigen::ArrayXd R2 = Eigen::ArrayXd::LinSpaced(4, 0.2, 3.0);
    const DerivativeProvider odd2 = DerivativeProvider::analytic(2, p2.phi_hat);
    const DerivativeProvider even2 = DerivativeProvider::analytic(2, p2.f2);
    const int k11[2] = {1, 1};
    const SampledTransform d33 = direct_transform(p2, DimensionSignature({3, 3}), {R2, R2}, with_tol(1e-9));
    const SampledTransform d44 = direct_transform(p2, DimensionSignature({4, 4}), {R2, R2}, with_tol(1e-9));
    for (Eigen::Index i = 0; i < d33.size(); ++i) {
      const auto x = d33.point(i);
      worst_odd2 = std::max(worst_odd2, rel(recursion_odd(odd2, k11, x), d33.values(i)));
      worst_even2 = std::max(worst_even2, rel(recursion_even(even2, k11, x), d44.values(i)));
    }
  }
  const double wall = seconds_since(t0);
  const bool pass = worst_odd <= 1e-5 && worst_even <= 1e-4 && worst_odd2 <= 2e-5 && worst_even2 <= 2e-4 && wall < 300;
  return {pass, "odd " + g(worst_odd) + " (1e-5), even " + g(worst_even) + " (1e-4), m=2 odd " + g(worst_odd2) +
                    " (2e-5), m=2 even " + g(worst_even2) + " (2e-4), " + g(wall) + " s"};
}

Outcome ac3() {
  int mismatches = 0;
  for (int k = 1; k <= 5; ++k) {
    const auto e = raising_expansion(k);
    if (static_cast<int>(e.size()) != k) ++mismatches;
    for (int l = 1; l <= k; ++l) {
      const auto it = e.find({2 * k - l, l});
      if (it == e.end() || it->second != coefficient(k, l)) ++mismatches;
    }
  }
  std::ostringstream out, err;
  const int code = cli::run({"coeffs", "--k", "5"}, out, err);
  std::ostringstream want;
  want << "k,l,c\n";
  for (int k = 1; k <= 5; ++k)
    for (int l = 1; l <= k; ++l) {
      const auto e = raising_expansion(k);
      want << k << "," << l << "," << format_rational(e.at({2 * k - l, l})) << "\n";
    }
  const bool cli_ok = code == 0 && out.str() == want.str();
  return {mismatches == 0 && cli_ok,
          std::to_string(mismatches) + " symbolic mismatches for k <= 5; coeffs output " + (cli_ok ? "matches" : "differs")};
}

Outcome ac4() {
  const RadialProfile bh = catalog_get("bump_hat");
  const QuadratureSpec qa = with_tol(1e-12);
  const auto dphi = [&](double w) { return d1(bh.phi_hat, w, 1); };
  const Eigen::ArrayXd R = Eigen::ArrayXd::LinSpaced(15, 0.1, 0.8);
  const SampledTransform d = direct_transform(bh, DimensionSignature({2}), {R}, with_tol(1e-12));
  std::vector<double> c;
  for (Eigen::Index i = 0; i < R.size(); ++i) c.push_back(bandlimited_f2(dphi, 1.0, R(i), qa) / d.values(i));
  const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
  const double mean = 0.5 * (*lo + *hi), spread = (*hi - *lo) / std::abs(mean);
  std::string verdict = std::abs(mean - 1) < 1e-3 ? "asserted c=1" : std::abs(mean - kTwoPi) < 1e-3 * kTwoPi ? "c=2pi"
                        : std::abs(mean + kTwoPi) < 1e-3 * kTwoPi ? "neither; c=-2pi (2pi magnitude, sign flipped)"
                                                                  : "neither";

  const RadialProfile e3 = catalog_get("example3");
  int p_hits = 0, c_hits = 0;
  for (double r : {0.3, 0.5, 0.7}) {
    const SampledTransform t = direct_transform(e3, DimensionSignature({2}), {one(r)}, with_tol(1e-10));
    const auto ref = reference_value("example3", DimensionSignature({2}), std::vector<double>{r});
    const double scaled = t.values(0) / kTwoPi;
    p_hits += std::abs(scaled - ref.candidates[0].value) <= 1e-2;
    c_hits += std::abs(scaled - ref.candidates[1].value) <= 1e-2;
  }
  const bool decided = (p_hits == 3) != (c_hits == 3);
  const std::string e3v = p_hits == 3 ? "cos-form candidate" : c_hits == 3 ? "one-minus-cos candidate" : "no candidate";
  return {spread <= 1e-3 && decided, "bump_hat c = " + g(mean) + " spread " + g(spread) + " (1e-3), matches " + verdict +
                                         "; example3: " + e3v + " matches direct/(2pi)"};
}

Outcome ac5() {
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 10; ++i) pts.push_back({0.1 + 0.19 * i});
  const QuadratureSpec q = with_tol(1e-11);
  bool pass = true;
  std::string detail;
  for (const char* name : {"bump", "gaussian"}) {
    const InvolutionReport r = hankel_involution_residual(catalog_get(name), pts, q);
    if (r.winner < 0) {
      pass = false;
      detail += std::string(name) + ": no winner; ";
      continue;
    }
    const auto& win = r.candidates[r.winner];
    const auto& lose = r.candidates[1 - r.winner];
    pass = pass && win.sup_residual < 1e-4 && lose.sup_residual > 1e-1;
    detail += std::string(name) + ": " + win.label + " wins (" + g(win.sup_residual) + " vs " + g(lose.sup_residual) + "); ";
  }
  QuadratureSpec w = with_tol(1e-8);
  w.acceleration = Acceleration::smooth_cutoff;
  int votes_2pi = 0, votes_1 = 0;
  for (double t : {0.7, 1.3})
    for (double s : {0.3 * t, 0.6 * t}) {
      RadialFunction f{[t](double r) { return bessel_j_int(1, kTwoPi * t * r); }, 1.0, 0.5};
      const double v = integrate_hankel(f, BesselOrder::of(0), kTwoPi * s, 0, w).value;
      votes_2pi += std::abs(v - 1 / (kTwoPi * t)) <= 2e-3;
      votes_1 += std::abs(v - 1 / t) <= 2e-3;
    }
  const bool ws = (votes_2pi == 4) != (votes_1 == 4);
  detail += std::string("Weber-Schafheitlin selects ") + (votes_2pi == 4 ? "1/(2 pi t)" : votes_1 == 4 ? "1/t" : "none");
  return {pass && ws, detail};
}

Outcome ac6() {
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  const QuadratureSpec q = with_tol(1e-13);
  double worst_kernel = 0.0;
  for (int i = 0; i < 20;) {
    double y = u(rng), x = u(rng);
    if (y > x) std::swap(y, x);
    if (x - y < 1e-3) continue;
    ++i;
    const double mid = 0.5 * (x + y), h = std::sqrt((x - mid) * (x + mid));
    const double a = integrate_abel([x](double w) { return w / std::sqrt((x - w) * (x + w)); }, y, mid, q).value;
    const double b =
        integrate_adaptive([x, y](double v) { return 1.0 / std::sqrt(x * x - v * v - y * y); }, 0.0, h, q).value;
    worst_kernel = std::max(worst_kernel, std::abs(a + b - pi / 2));
  }
  const RadialProfile bh = catalog_get("bump_hat");
  const QuadratureSpec qa = with_tol(1e-12);
  const auto dphi = [&](double w) { return d1(bh.phi_hat, w, 1); };
  double worst15 = 0.0, worst18 = 0.0;
  for (double x : {0.3, 1.1, 2.7}) {
    const double v = integrate_adaptive(
                         [&](double s) { return solve_abel_profile(dphi, 1.0, s, qa) * bessel_j_int(0, kTwoPi * s * x) * s; },
                         0.0, 1.0, with_tol(1e-11))
                         .value;
    const double px[1] = {x};
    worst15 = std::max(worst15, std::abs(v - bh.phi(px)));
  }
  for (double w : {0.2, 0.5, 0.8}) {
    const double v = integrate_abel([&](double s) { return solve_abel_profile(dphi, 1.0, s, qa) * s; }, w, 1.0, qa).value / pi;
    worst18 = std::max(worst18, std::abs(v - d1(bh.phi_hat, w, 0)));
  }
  return {worst_kernel <= 1e-10 && worst15 <= 1e-4 && worst18 <= 1e-5,
          "kernel " + g(worst_kernel) + " (1e-10), reconstruction of phi " + g(worst15) + " (1e-4), of phi_hat " +
              g(worst18) + " (1e-5)"};
}

Outcome ac7() {
  const auto t0 = std::chrono::steady_clock::now();
  const RadialProfile bh2 = catalog_get("bump_hat", 2);
  const DerivativeProvider prov = DerivativeProvider::analytic(2, bh2.phi_hat);
  Eigen::ArrayXd R(3);
  R << 0.2, 0.45, 0.7;
  const SampledTransform d = direct_transform(bh2, DimensionSignature({2, 2}), {R, R}, with_tol(1e-11));
  const int k0[2] = {0, 0};
  const double c = kTwoPi * kTwoPi;  // (-2 pi) per axis
  double worst = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const auto x = d.point(i);
    const double v = bandlimited_multiradial(prov, 1.0, k0, Parity::even, x, with_tol(1e-12));
    worst = std::max(worst, std::abs(v - c * d.values(i)));
  }
  const double wall = seconds_since(t0);
  return {worst <= 1e-3 && d.all_converged() && wall < 600,
          "|formula - (2pi)^2 direct| max " + g(worst) + " over 9 points (1e-3), " + g(wall) + " s"};
}

Outcome ac8() {
  const BilinearSymbol& demo = symbol_get("demo");
  const double c2 = 1 / (kTwoPi * kTwoPi);
  const auto prim = [](double r) { return r - std::atan(r); };
  double worst = 0.0;
  for (double r1 : {0.1, 0.5, 1.0, 2.0, 5.0})
    for (double r2 : {0.1, 0.5, 1.0, 2.0, 5.0})
      worst = std::max(worst, std::abs(transform_symbol(demo, 3, r1, r2) - c2 * prim(r1) * prim(r2) / (r1 * r2)));
  const PreservationReport d = preservation_report(demo, 3, 1);
  bool finite = d.ratios.size() == 4;
  for (const auto& [o, r] : d.ratios) finite = finite && std::isfinite(r);
  const PreservationReport c = preservation_report(symbol_get("constant"), 3, 0);
  const double dc = std::abs(c.ratios.at({0, 0}) - c2);
  return {worst <= 1e-8 && finite && dc <= 1e-10, "closed form " + g(worst) + " (1e-8); demo ratios " +
                                                      (finite ? "finite" : "not finite") + "; constant ratio error " +
                                                      g(dc) + " (1e-10)"};
}

Outcome ac9() {
  QuadratureSpec q = with_tol(1e-8);
  q.rel_tol = 1e-8;
  bool pass = true;
  std::string detail;
  const auto probe = [&](const std::string& name, std::vector<int> dims, std::vector<std::vector<double>> pts) {
    const RadialProfile p = catalog_get(name);
    const DimensionSignature sig(dims);
    bool match = true, converged = true;
    std::vector<double> ratio;
    std::string values;
    for (const auto& x : pts) {
      const SampledTransform d = direct_transform(p, sig, {one(x[0]), one(x[1])}, q);
      const double ref = reference_value(name, sig, x).candidates[0].value;
      converged = converged && d.converged(0);
      match = match && std::abs(ref - d.values(0)) <= 1e-3 * std::max(1.0, std::abs(ref));
      ratio.push_back(ref / d.values(0));
      values += " direct " + g(d.values(0)) + " ref " + g(ref) + ";";
    }
    const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
    pass = pass && converged;
    detail += name + " " + sig.str() + ": " +
              (match ? "matches" : "DISCREPANCY flagged, reference/direct = " + g(*lo) + ".." + g(*hi)) + values + " ";
  };
  probe("example1", {1, 1}, {{0.1, 0.4}, {0.3, 0.7}, {0.5, 0.4}, {0.2, 0.9}, {0.45, 0.25}});
  probe("example2", {2, 1}, {{0.1, 0.1}, {0.1, 0.3}, {0.3, 0.1}, {0.3, 0.3}, {0.2, 0.15}});
  return {pass, detail};
}

Outcome ac10() {
  int failed = 0;
  for (const auto& r : run_suite("bessel")) failed += !r.passed;
  const auto t0 = std::chrono::steady_clock::now();
  int failed_all = 0, total = 0;
  for (const auto& r : run_suite("all")) {
    ++total;
    failed_all += !r.passed;
  }
  const double wall = seconds_since(t0);
  return {failed == 0 && failed_all == 0 && wall < 1800, "bessel suite failures " + std::to_string(failed) +
                                                             "; verify all: " + std::to_string(total - failed_all) +
                                                             "/" + std::to_string(total) + " pass in " + g(wall) + " s"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC-1", ac1}, {"AC-2", ac2}, {"AC-3", ac3}, {"AC-4", ac4}, {"AC-5", ac5},
      {"AC-6", ac6}, {"AC-7", ac7}, {"AC-8", ac8}, {"AC-9", ac9}, {"AC-10", ac10}};
  int failures = 0;
  for (const auto& [id, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", id.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
