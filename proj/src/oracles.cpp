#include "sphereclamp/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sphereclamp/metric_core.hpp"

namespace sphereclamp::oracles {
namespace {

double dense_t(int j, int samples) {
  return j == samples - 1 ? 0.0 : 1.0 - static_cast<double>(j) / static_cast<double>(samples - 1);
}

double eigen_angle(const Eigen::Quaterniond& q) {
  const double a = Eigen::AngleAxisd(q).angle();
  return a > std::numbers::pi ? 2.0 * std::numbers::pi - a : a;
}

struct EeData {
  Eigen::Vector3d vs, vf, vy;
  Eigen::Quaterniond qs, qf, qy_inv;
  double p_e, r_e;
};

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Vector3d v;
  do {
    v = {g(rng), g(rng), g(rng)};
  } while (v.norm() < 1e-6);
  return v.normalized();
}

Rotation to_rotation(const Eigen::Quaterniond& q) { return Rotation(q.w(), q.x(), q.y(), q.z()); }

struct Instance {
  enum Kind { kScalar, kStacked } kind = kScalar;
  double y = 0, s = 0, f = 0;
  std::optional<MultiPose> ys, ss, fs;
  MultiMetricParams metric;
  std::string label;
};

Instance make_scalar(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> noise(-1.6, 1.6);
  Instance in;
  in.kind = Instance::kScalar;
  in.s = u(rng);
  in.f = u(rng);
  const double t0 = unit(rng);
  in.y = (1.0 - t0) * in.s + t0 * in.f + noise(rng);
  in.label = "1d";
  return in;
}

Instance make_stacked(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> pos(-100.0, 100.0);
  std::uniform_real_distribution<double> len(20.0, 300.0);
  std::uniform_real_distribution<double> pe(10.0, 60.0);
  std::uniform_real_distribution<double> re(0.2, 1.0);
  std::uniform_real_distribution<double> turn(0.0, 2.5);

  Instance in;
  in.kind = Instance::kStacked;
  in.metric.norm_order = unit(rng) < 0.8 ? std::numeric_limits<double>::infinity() : 2.0;
  const bool outside = unit(rng) < 0.3;
  const double t0 = unit(rng);
  std::vector<std::string> ids;
  std::vector<Pose> s, f, y;
  for (int i = 0; i < n; ++i) {
    ids.push_back("ee" + std::to_string(i));
    Se3MetricParams p{pe(rng), unit(rng) < 0.2 ? std::numeric_limits<double>::infinity() : re(rng)};
    in.metric.per_ee.push_back(p);

    const Eigen::Vector3d vs(pos(rng), pos(rng), pos(rng));
    const Eigen::Vector3d vf = vs + len(rng) * random_unit(rng);
    const Eigen::Quaterniond qs = random_quaternion(rng);
    const Eigen::Quaterniond qf =
        (qs * Eigen::Quaterniond(Eigen::AngleAxisd(turn(rng), random_unit(rng)))).normalized();

    // Reference point on the trajectory, then pushed off it.
    const Eigen::Vector3d v0 = (1.0 - t0) * vs + t0 * vf;
    const Eigen::Quaterniond q0 = qs.slerp(t0, qf);
    const double scale = (outside && i == 0) ? 1.2 + 1.3 * unit(rng) : 0.7 * unit(rng);
    const Eigen::Vector3d vy = v0 + scale * p.p_e * random_unit(rng);
    const double rot_noise = std::isinf(p.r_e) ? std::numbers::pi * unit(rng) : scale * p.r_e * unit(rng);
    const Eigen::Quaterniond qy =
        (q0 * Eigen::Quaterniond(Eigen::AngleAxisd(rot_noise, random_unit(rng)))).normalized();

    s.emplace_back(vs, to_rotation(qs));
    f.emplace_back(vf, to_rotation(qf));
    y.emplace_back(vy, to_rotation(qy));
  }
  in.ss = MultiPose(ids, s);
  in.fs = MultiPose(ids, f);
  in.ys = MultiPose(ids, y);
  in.label = "se3^" + std::to_string(n);
  return in;
}

}  // namespace

Eigen::Quaterniond random_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Vector4d c;
  do {
    c = {g(rng), g(rng), g(rng), g(rng)};
  } while (c.norm() < 1e-6);
  c.normalize();
  return Eigen::Quaterniond(c[0], c[1], c[2], c[3]);
}

std::optional<double> dense_argmax_t_1d(double sensed, double start, double finish, int samples) {
  const double span = finish - start;
  for (int j = 0; j < samples; ++j) {
    const double t = dense_t(j, samples);
    const double p = t == 1.0 ? finish : start + t * span;
    if (std::abs(p - sensed) <= 1.0) return t;
  }
  return std::nullopt;
}

std::optional<double> dense_argmax_t_stacked(const MultiPose& sensed, const MultiPose& start,
                                             const MultiPose& finish,
                                             const MultiMetricParams& metric, int samples) {
  const std::size_t n = start.size();
  std::vector<EeData> ee(n);
  for (std::size_t i = 0; i < n; ++i) {
    ee[i] = {start.pose(i).v,
             finish.pose(i).v,
             sensed.pose(i).v,
             start.pose(i).rotation.quaternion(),
             finish.pose(i).rotation.quaternion(),
             sensed.pose(i).rotation.quaternion().conjugate(),
             metric.per_ee[i].p_e,
             metric.per_ee[i].r_e};
  }
  const double k = metric.norm_order;
  const bool max_norm = std::isinf(k);
  std::vector<double> trans2(n);

  for (int j = 0; j < samples; ++j) {
    const double t = dense_t(j, samples);
    // Translational part alone is a lower bound on every per-EE distance.
    bool reject = false;
    double lower = 0.0;
    for (std::size_t i = 0; i < n && !reject; ++i) {
      const Eigen::Vector3d v = ee[i].vs + t * (ee[i].vf - ee[i].vs);
      trans2[i] = ((v - ee[i].vy) / ee[i].p_e).squaredNorm();
      if (max_norm) {
        reject = trans2[i] > 1.0;
      } else {
        lower += std::pow(trans2[i], 0.5 * k);
      }
    }
    if (reject || (!max_norm && lower > 1.0)) continue;

    double acc = 0.0;
    for (std::size_t i = 0; i < n && !reject; ++i) {
      double d2 = trans2[i];
      if (!std::isinf(ee[i].r_e)) {
        const Eigen::Quaterniond q = ee[i].qs.slerp(t, ee[i].qf);
        const double r = eigen_angle(ee[i].qy_inv * q) / ee[i].r_e;
        d2 += r * r;
      }
      if (max_norm) {
        reject = d2 > 1.0;
      } else {
        acc += std::pow(d2, 0.5 * k);
      }
    }
    if (reject || (!max_norm && acc > 1.0)) continue;
    return t;
  }
  return std::nullopt;
}

ClampOracleReport run_clamp_oracle_suite(int instances, std::uint64_t seed, int oracle_samples) {
  const auto t_begin = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  std::vector<Instance> cases;
  cases.reserve(static_cast<std::size_t>(instances));
  const int sizes[3] = {1, 2, 6};
  for (int i = 0; i < instances; ++i) {
    cases.push_back(i % 4 == 0 ? make_scalar(rng) : make_stacked(rng, sizes[i % 4 - 1]));
  }

  struct Result {
    bool verdict_ok = true;
    bool within = true;
    bool no_solution = false;
    double ratio = 0.0;
    std::string note;
  };
  std::vector<Result> results(cases.size());

#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < static_cast<int>(cases.size()); ++idx) {
    const Instance& in = cases[static_cast<std::size_t>(idx)];
    Result r;
    int samples = 0;
    bool alg_found = false;
    double alg_t = 0.0;
    std::optional<double> oracle;
    if (in.kind == Instance::kScalar) {
      const auto d = [](double a, double b) { return std::abs(a - b); };
      samples = sample_count(in.s, in.f, d, ClampConfig{});
      const auto out = hypersphere_clamp(in.y, in.s, in.f, ScalarLerp{}, d, samples);
      alg_found = has_solution(out);
      if (alg_found) alg_t = std::get<ClampSolution<double>>(out).t;
      oracle = dense_argmax_t_1d(in.y, in.s, in.f, oracle_samples);
    } else {
      const StackedMetric d(in.metric);
      samples = sample_count(*in.ss, *in.fs, d, ClampConfig{});
      const auto out = hypersphere_clamp(*in.ys, *in.ss, *in.fs, StackedInterp{}, d, samples);
      alg_found = has_solution(out);
      if (alg_found) alg_t = std::get<ClampSolution<MultiPose>>(out).t;
      oracle = dense_argmax_t_stacked(*in.ys, *in.ss, *in.fs, in.metric, oracle_samples);
    }
    r.no_solution = !oracle.has_value();
    r.verdict_ok = alg_found == oracle.has_value();
    if (r.verdict_ok && alg_found) {
      r.ratio = std::abs(alg_t - *oracle) * static_cast<double>(samples - 1);
      r.within = r.ratio <= 1.0;
    }
    if (!r.verdict_ok || !r.within) {
      std::ostringstream os;
      os << "instance " << idx << " (" << in.label << ", I=" << samples << "): alg "
         << (alg_found ? std::to_string(alg_t) : "none") << " oracle "
         << (oracle ? std::to_string(*oracle) : "none");
      r.note = os.str();
    }
    results[static_cast<std::size_t>(idx)] = r;
  }

  ClampOracleReport report;
  report.instances = instances;
  for (const auto& r : results) {
    if (r.verdict_ok && r.within) ++report.agreed;
    if (!r.verdict_ok) ++report.verdict_mismatches;
    if (r.verdict_ok && !r.within) ++report.tolerance_failures;
    if (r.no_solution) ++report.no_solution_instances;
    report.max_ratio = std::max(report.max_ratio, r.ratio);
    if (!r.note.empty() && report.failures.size() < 10) report.failures.push_back(r.note);
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  return report;
}

bool MetricAxiomReport::passed() const {
  if (metrics.empty()) return false;
  return std::all_of(metrics.begin(), metrics.end(),
                     [](const AxiomCounts& c) { return c.triples > 0 && c.violations() == 0; });
}

namespace {

template <typename Point, typename Metric, typename Gen>
AxiomCounts check_axioms(const std::string& name, int triples, double tol, Gen&& gen,
                         Metric&& d) {
  AxiomCounts c;
  c.metric = name;
  c.triples = triples;
  for (int i = 0; i < triples; ++i) {
    const Point x = gen();
    const Point y = gen();
    const Point z = gen();
    const double xy = d(x, y);
    const double yx = d(y, x);
    const double yz = d(y, z);
    const double xz = d(x, z);
    if (xy < 0.0 || yz < 0.0 || xz < 0.0) ++c.negative;
    if (std::abs(d(x, x)) > tol || !(xy > 0.0)) ++c.identity;
    if (std::abs(xy - yx) > tol) ++c.symmetry;
    const double excess = xz - (xy + yz);
    c.max_triangle_excess = std::max(c.max_triangle_excess, excess);
    if (excess > tol) ++c.triangle;
  }
  return c;
}

}  // namespace

MetricAxiomReport run_metric_axiom_suite(int triples, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-200.0, 200.0);
  std::uniform_real_distribution<double> scale(0.5, 50.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MetricAxiomReport report;

  {
    const std::vector<double> delta{scale(rng), scale(rng), scale(rng)};
    const WeightedEuclidean d(delta);
    auto gen = [&] { return std::vector<double>{pos(rng), pos(rng), pos(rng)}; };
    report.metrics.push_back(check_axioms<std::vector<double>>(
        "weighted_euclidean", triples, tol, gen,
        [&d](const std::vector<double>& a, const std::vector<double>& b) { return d(a, b); }));
  }

  auto random_pose = [&] {
    return Pose(Eigen::Vector3d(pos(rng), pos(rng), pos(rng)), to_rotation(random_quaternion(rng)));
  };
  for (double r_e : {0.5, std::numeric_limits<double>::infinity()}) {
    const Se3Metric d(Se3MetricParams{20.0, r_e});
    report.metrics.push_back(check_axioms<Pose>(std::isinf(r_e) ? "se3(r_e=inf)" : "se3", triples,
                                                tol, random_pose, d));
  }

  const std::vector<std::string> ids{"a", "b", "c"};
  auto random_multi = [&] {
    return MultiPose(ids, {random_pose(), random_pose(), random_pose()});
  };
  for (double k : {1.0, 2.0, 3.0, std::numeric_limits<double>::infinity()}) {
    MultiMetricParams params;
    params.norm_order = k;
    params.per_ee = {{10.0 + 40.0 * unit(rng), 0.3 + unit(rng)},
                     {10.0 + 40.0 * unit(rng), std::numeric_limits<double>::infinity()},
                     {10.0 + 40.0 * unit(rng), 0.3 + unit(rng)}};
    const StackedMetric d(params);
    std::ostringstream name;
    name << "stacked(k=" << (std::isinf(k) ? std::string("inf") : std::to_string(int(k))) << ")";
    report.metrics.push_back(check_axioms<MultiPose>(name.str(), triples, tol, random_multi, d));
  }
  return report;
}

SlerpReport run_slerp_suite(int cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SlerpReport r;
  r.cases = cases;
  constexpr double kDelta = 1e-3;
  for (int i = 0; i < cases; ++i) {
    const Eigen::Quaterniond qa = random_quaternion(rng);
    const Eigen::Quaterniond qb = random_quaternion(rng);
    const Rotation a = to_rotation(qa);
    const Rotation b = to_rotation(qb);
    const double t = unit(rng) * (1.0 - kDelta);

    // exp(t log(a^-1 b)) on the shorter arc.
    Eigen::Quaterniond rel = a.quaternion().conjugate() * b.quaternion();
    if (rel.w() < 0.0) rel.coeffs() = -rel.coeffs();
    const Eigen::AngleAxisd aa(rel);
    const Eigen::Quaterniond expected =
        a.quaternion() * Eigen::Quaterniond(Eigen::AngleAxisd(t * aa.angle(), aa.axis()));

    const Rotation got = slerp(a, b, t);
    r.max_geodesic_deviation =
        std::max(r.max_geodesic_deviation, got.quaternion().angularDistance(expected));

    const double e0 = (slerp(a, b, 0.0).quaternion().coeffs() - a.quaternion().coeffs()).cwiseAbs().maxCoeff();
    const double e1 = (slerp(a, b, 1.0).quaternion().coeffs() - b.quaternion().coeffs()).cwiseAbs().maxCoeff();
    r.max_endpoint_error = std::max({r.max_endpoint_error, e0, e1});

    const Rotation flipped = slerp(a, b.negated(), t);
    r.max_sign_deviation =
        std::max(r.max_sign_deviation, got.quaternion().angularDistance(flipped.quaternion()));

    const double total = eigen_angle(rel);
    const double step = slerp(a, b, t + kDelta).quaternion().angularDistance(got.quaternion());
    r.max_velocity_deviation = std::max(r.max_velocity_deviation, std::abs(step - total * kDelta));
  }
  return r;
}

}  // namespace sphereclamp::oracles
