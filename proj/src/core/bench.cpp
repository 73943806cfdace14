#include "skelet/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "skelet/bounds.hpp"
#include "skelet/error.hpp"
#include "skelet/geometry.hpp"
#include "skelet/keyvalue.hpp"

namespace skelet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Errors below this fraction of sigma_1 count as zero in suboptimality ratios.
constexpr double kZeroFloor = 1e-12;

std::string fmt(double x) {
  if (std::isnan(x)) return "NA";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return format_double(x);
}

bool parse_bool(const std::string& v, const std::string& what) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  fail(ErrorCode::parse, what + ": expected true or false, got '" + v + "'");
}

Index parse_index(const std::string& v, const std::string& what) {
  const long long x = parse_integer(v, what);
  require(x >= 0, ErrorCode::parse, what + " must be non-negative");
  return static_cast<Index>(x);
}

std::vector<Index> parse_ranks(const std::string& v) {
  std::vector<Index> out;
  for (const auto& item : split(v, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_index(parts[0], "rank"));
    } else if (parts.size() == 3) {
      const Index lo = parse_index(parts[0], "rank range start");
      const Index hi = parse_index(parts[1], "rank range stop");
      const Index step = parse_index(parts[2], "rank range step");
      require(step >= 1 && lo <= hi, ErrorCode::parse, "rank range must be start:stop:step with step >= 1");
      for (Index k = lo; k <= hi; k += step) out.push_back(k);
    } else {
      fail(ErrorCode::parse, "ranks: expected k or start:stop:step, got '" + item + "'");
    }
  }
  for (Index k : out) require(k >= 1, ErrorCode::parse, "ranks must be positive");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Runs fn(entry) for each entry, prefixing errors with the entry's line.
template <typename Fn>
void for_each_entry(const KeyValueSection& section, Fn fn) {
  for (const auto& e : section.entries) {
    try {
      fn(e);
    } catch (const Error& err) {
      const std::string what = err.what();
      if (what.rfind("line ", 0) == 0) throw;
      fail(err.code(), "line " + std::to_string(e.line) + ": " + what);
    }
  }
}

std::uint64_t matrix_seed(std::uint64_t seed, Index matrix) {
  return seed ^ (static_cast<std::uint64_t>(matrix) * 0x9E3779B97F4A7C15ULL);
}

double tail_frobenius(const std::vector<double>& s, Index k) {
  return k < s.size() ? norm2(std::span<const double>(s).subspan(k)) : 0.0;
}

double ratio_with_floor(double err, double opt, double floor) {
  return std::max(err, floor) / std::max(opt, floor);
}

std::string flag(const BoundReport& r) { return (r.applicable ? "" : "!") + r.name; }

}  // namespace

std::string to_string(Algorithm alg) {
  switch (alg) {
    case Algorithm::rsvd: return "rsvd";
    case Algorithm::gks: return "gks";
    case Algorithm::rgks: return "rgks";
    case Algorithm::rid: return "rid";
    case Algorithm::lss: return "lss";
  }
  return {};
}

Algorithm parse_algorithm(const std::string& text) {
  for (auto a : {Algorithm::rsvd, Algorithm::gks, Algorithm::rgks, Algorithm::rid, Algorithm::lss})
    if (to_string(a) == text) return a;
  fail(ErrorCode::parse, "unknown algorithm '" + text + "'");
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  const auto sections = parse_key_value_text(text);
  ExperimentConfig cfg;
  for_each_entry(sections[0], [&](const KeyValueEntry& e) {
    const std::string& v = e.value;
    if (e.key == "algorithms") {
      cfg.algorithms.clear();
      for (const auto& a : split(v, ',')) cfg.algorithms.push_back(parse_algorithm(a));
    } else if (e.key == "ranks") {
      cfg.ranks = parse_ranks(v);
    } else if (e.key == "p") {
      if (v == "ceil-k-over-10") cfg.oversampling.ceil_k_over_10 = true;
      else cfg.oversampling = {false, parse_index(v, "p")};
    } else if (e.key == "q") {
      cfg.power_iterations = parse_index(v, "q");
    } else if (e.key == "trials") {
      cfg.trials = parse_index(v, "trials");
      require(cfg.trials >= 1, ErrorCode::parse, "trials must be >= 1");
    } else if (e.key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_integer(v, "seed"));
    } else if (e.key == "norms") {
      cfg.spectral_norm = cfg.frobenius_norm = false;
      for (const auto& nm : split(v, ',')) {
        if (nm == "spectral") cfg.spectral_norm = true;
        else if (nm == "frobenius") cfg.frobenius_norm = true;
        else fail(ErrorCode::parse, "unknown norm '" + nm + "'");
      }
    } else if (e.key == "outputs") {
      cfg.bounds = cfg.angles = false;
      for (const auto& o : split(v, ',')) {
        if (o == "bounds") cfg.bounds = true;
        else if (o == "angles" || o == "projector-stats") cfg.angles = true;
        else if (o != "errors") fail(ErrorCode::parse, "unknown output '" + o + "'");
      }
    } else if (e.key == "summary") {
      cfg.summary = parse_bool(v, "summary");
    } else if (e.key == "pivoter") {
      if (v == "golub-businger") cfg.pivot.kind = Pivoter::golub_businger;
      else if (v == "gu-eisenstat") cfg.pivot.kind = Pivoter::gu_eisenstat;
      else fail(ErrorCode::parse, "unknown pivoter '" + v + "'");
    } else if (e.key == "f") {
      cfg.pivot.f = parse_double(v, "f");
      require(cfg.pivot.f > 1.0, ErrorCode::parse, "f must exceed 1");
    } else if (e.key == "rid_sketch") {
      if (v == "default") cfg.rid_wide_sketch = false;
      else if (v == "wide") cfg.rid_wide_sketch = true;
      else fail(ErrorCode::parse, "rid_sketch must be default or wide");
    } else {
      fail(ErrorCode::parse, "unknown key '" + e.key + "'");
    }
  });
  for (Index i = 1; i < sections.size(); ++i) {
    const auto& sec = sections[i];
    if (sec.name != "matrix")
      fail(ErrorCode::parse, "line " + std::to_string(sec.line) + ": unknown section [" + sec.name + "]");
    MatrixSource src;
    KeyValueSection spec_part;
    for_each_entry(sec, [&](const KeyValueEntry& e) {
      if (e.key == "file") src.file = e.value;
      else if (e.key == "coherence_target") src.coherence_target = parse_double(e.value, "coherence_target");
      else if (e.key == "calibrate_rank") src.calibrate_rank = parse_index(e.value, "calibrate_rank");
      else if (is_test_matrix_key(e.key)) spec_part.entries.push_back(e);
      else fail(ErrorCode::parse, "unknown matrix key '" + e.key + "'");
    });
    src.spec = spec_from_section(spec_part);
    if (src.coherence_target && src.spec.subspace != SubspaceKind::mixed)
      fail(ErrorCode::parse, "line " + std::to_string(sec.line) + ": coherence_target needs subspace = mixed");
    cfg.matrices.push_back(std::move(src));
  }
  require(!cfg.matrices.empty(), ErrorCode::parse, "config has no [matrix] section");
  require(!cfg.ranks.empty(), ErrorCode::parse, "config has no ranks");
  require(!cfg.algorithms.empty(), ErrorCode::parse, "config has no algorithms");
  return cfg;
}

std::string experiment_config_help() {
  return R"(Sweep config: flat `key = value` lines, '#' comments, one or more [matrix] blocks.
Top-level keys:
  algorithms  = rsvd, gks, rgks, rid, lss     (comma list; default rsvd, rgks)
  ranks       = 5, 10, 20 | 4:64:4            (list and/or start:stop:step ranges)
  p           = 2 | ceil-k-over-10            (oversampling; default 2)
  q           = 0                             (power iterations)
  trials      = 100
  seed        = 0
  norms       = spectral, frobenius           (default both)
  outputs     = errors, bounds, angles        (default errors; projector-stats = angles,
                                              full projector statistics come from projector-exp)
  summary     = true                          (mean / q10 / q90 rows per group)
  pivoter     = golub-businger | gu-eisenstat
  f           = 2                             (strong RRQR bound)
  rid_sketch  = default | wide                (k + p or min(m, 2(k + p)) sketch rows)
[matrix] keys:
  n                = 256
  spectrum         = geometric:0.85 | staircase:16:10 | flat-geometric:20:0.9 | custom:1,0.5,...
  subspace         = mixed | random-orthogonal | noisy-permutation | noisy-hadamard
  alpha            = 0.0                      (mixed: weight of the permutation)
  delta            = 0.00625                  (noisy kinds; default 0.1/sqrt(n))
  seed             = 0
  coherence_target = 0.16                     (calibrate alpha; mixed only)
  calibrate_rank   = 20                       (rank for coherence_target; default first rank)
  file             = path                     (load a matrix file instead of generating)
)";
}

PreparedMatrix prepare_matrix(const MatrixSource& source, Index default_calibration_rank) {
  PreparedMatrix pm;
  if (!source.file.empty()) {
    pm.a = load_matrix(source.file);
    pm.truth = svd(pm.a);
    pm.alpha = kNaN;
    pm.description = "file=" + source.file;
    return pm;
  }
  TestMatrixSpec spec = source.spec;
  if (source.coherence_target) {
    const Index rank = source.calibrate_rank ? source.calibrate_rank : default_calibration_rank;
    spec.alpha = calibrate_alpha(spec.n, rank, *source.coherence_target, spec.seed).alpha;
  }
  TestMatrix t = build_test_matrix(spec);
  pm.a = std::move(t.a);
  pm.truth = {std::move(t.u), std::move(t.s), std::move(t.v)};
  pm.alpha = spec.alpha;
  std::string d = to_key_value(spec);
  std::replace(d.begin(), d.end(), '\n', ' ');
  pm.description = trim(d);
  return pm;
}

TrialRecord run_trial(const PreparedMatrix& m, const ExperimentConfig& cfg, Algorithm alg, Index k, Index trial,
                      std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const Matrix& a = m.a;
  const auto& s = m.truth.s;
  require(k < std::min(a.rows(), a.cols()), ErrorCode::out_of_range, "rank must be below min(m, n)");
  TrialRecord rec;
  rec.trial = trial;
  rec.algorithm = alg;
  rec.n = a.cols();
  rec.k = k;
  rec.p = cfg.oversampling.for_rank(k);
  rec.q = cfg.power_iterations;
  rec.alpha = m.alpha;
  rec.seed = seed;
  const Matrix vk = m.truth.v.left_cols(k);
  rec.coherence = coherence(vk);
  rec.gamma = s[k - 1] > 0.0 ? s[k] / s[k - 1] : kNaN;
  const double tail = tail_frobenius(s, k);
  rec.stable_rank = s[k] > 0.0 ? (tail / s[k]) * (tail / s[k]) : kNaN;
  const auto t32 = static_cast<std::uint32_t>(trial);
  const RsvdConfig rcfg{k, std::min(rec.p, std::min(a.rows(), a.cols()) - k), rec.q, seed, t32};

  LowRankApprox approx;
  std::optional<IndexSet> skeleton;
  std::optional<Matrix> v_hat;
  switch (alg) {
    case Algorithm::rsvd: {
      RsvdResult r = rsvd(a, rcfg);
      approx = r.as_lowrank();
      v_hat = std::move(r.v);
      break;
    }
    case Algorithm::gks: {
      InterpolativeDecomp id = gks_from_basis(a, m.truth.v, s, k, cfg.pivot);
      skeleton = id.columns;
      approx = id.as_lowrank();
      break;
    }
    case Algorithm::rgks: {
      RgksResult r = rgks(a, rcfg, cfg.pivot);
      skeleton = r.id.columns;
      approx = r.id.as_lowrank();
      v_hat = std::move(r.sketch.v);
      break;
    }
    case Algorithm::rid: {
      InterpolativeDecomp id = rid(a, {k, rcfg.p, seed, t32, cfg.rid_wide_sketch});
      skeleton = id.columns;
      approx = id.as_lowrank();
      break;
    }
    case Algorithm::lss:
      approx = lss(a, {k, rcfg.p, seed, t32});
      break;
  }

  const Matrix e = approx.residual(a);
  const double floor = kZeroFloor * s[0];
  rec.err_frob = frobenius_norm(e);
  rec.subopt_frob = ratio_with_floor(rec.err_frob, tail, floor);
  ResidualStats stats;
  if (cfg.spectral_norm || cfg.bounds) {
    stats = residual_stats(e);
    rec.err_spec = stats.spectral();
    rec.subopt_spec = ratio_with_floor(rec.err_spec, s[k], floor);
  } else {
    rec.err_spec = rec.subopt_spec = kNaN;
  }
  if (!cfg.frobenius_norm) rec.err_frob = rec.subopt_frob = kNaN;

  rec.phi_max = rec.phi_hat_max = rec.theta_max = rec.mu = kNaN;
  rec.bound_thm41 = rec.bound_thm52 = rec.bound_thm54 = rec.bound_gks_spec = rec.bound_gks_frob = kNaN;
  const bool small_k = 2 * k <= a.cols();
  if (cfg.angles || cfg.bounds) {
    if (skeleton && small_k) rec.phi_max = angles_to_index_subspace(vk, *skeleton).max_angle();
    if (skeleton && v_hat && small_k) rec.phi_hat_max = angles_to_index_subspace(*v_hat, *skeleton).max_angle();
    if (v_hat) {
      rec.theta_max = principal_angles(vk, *v_hat).max_angle();
      rec.mu = d_row_upper(vk, *v_hat);
    }
  }
  if (cfg.bounds) {
    std::vector<std::string> flags;
    if (skeleton) {
      const BoundReport b41 = spectral_secant_bound(m.truth, *skeleton, k, rec.err_spec);
      const BoundReport b52 = frobenius_stablerank_bound(m.truth, *skeleton, k, frobenius_norm(e));
      rec.bound_thm41 = b41.value;
      rec.bound_thm52 = b52.value;
      flags.push_back(flag(b41));
      flags.push_back(flag(b52));
    }
    const BoundReport b54 = condition_number_bound(s, stats, k).report;
    rec.bound_thm54 = b54.value;
    flags.push_back(flag(b54));
    if (alg == Algorithm::gks && cfg.pivot.kind == Pivoter::gu_eisenstat) {
      const BoundPair g = gks_rrqr_bounds(m.truth, k, cfg.pivot.f, rec.err_spec, frobenius_norm(e));
      rec.bound_gks_spec = g.spectral.value;
      rec.bound_gks_frob = g.frobenius.value;
      flags.push_back(flag(g.spectral));
      flags.push_back(flag(g.frobenius));
    }
    for (Index i = 0; i < flags.size(); ++i) rec.applicable_flags += (i ? ";" : "") + flags[i];
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, const std::vector<PreparedMatrix>& matrices,
                                    unsigned workers) {
  struct Item {
    Index matrix, k;
    Algorithm alg;
    Index trial;
  };
  std::vector<Algorithm> algs = cfg.algorithms;
  std::sort(algs.begin(), algs.end(), [](Algorithm x, Algorithm y) { return to_string(x) < to_string(y); });
  algs.erase(std::unique(algs.begin(), algs.end()), algs.end());
  std::vector<Item> items;
  for (Index mi = 0; mi < matrices.size(); ++mi)
    for (Index k : cfg.ranks)
      for (Algorithm alg : algs)
        for (Index t = 0; t < cfg.trials; ++t) items.push_back({mi, k, alg, t});

  std::vector<TrialRecord> out(items.size());
  std::atomic<Index> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const Index i = next.fetch_add(1);
      if (i >= items.size()) return;
      const Item& it = items[i];
      try {
        out[i] = run_trial(matrices[it.matrix], cfg, it.alg, it.k, it.trial, matrix_seed(cfg.seed, it.matrix));
        out[i].matrix = it.matrix;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = items.size();
      }
    }
  };
  workers = std::max(1u, workers);
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

double nearest_rank_quantile(std::vector<double> values, double q) {
  require(!values.empty(), ErrorCode::invalid_argument, "quantile of an empty sample");
  require(q > 0.0 && q <= 1.0, ErrorCode::invalid_argument, "quantile level must lie in (0, 1]");
  std::sort(values.begin(), values.end());
  auto rank = static_cast<Index>(std::ceil(q * static_cast<double>(values.size()) - 1e-12));
  rank = std::clamp<Index>(rank, 1, values.size());
  return values[rank - 1];
}

std::string sweep_csv(const ExperimentConfig& cfg, const std::vector<PreparedMatrix>& matrices,
                      const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  out << "# skelet-csv v1\n";
  out << "# quantiles: nearest-rank; q10 is the ceil(0.1 N)-th smallest value, q90 the ceil(0.9 N)-th\n";
  out << "# trials=" << cfg.trials << " q=" << cfg.power_iterations << " p="
      << (cfg.oversampling.ceil_k_over_10 ? std::string("ceil-k-over-10") : std::to_string(cfg.oversampling.fixed))
      << " seed=" << cfg.seed << "\n";
  for (Index i = 0; i < matrices.size(); ++i) out << "# matrix " << i << ": " << matrices[i].description << "\n";
  out << "trial,algorithm,n,k,p,q,alpha,c_k,gamma_k,r_k,err_spec,err_frob,subopt_spec,subopt_frob,phi_max,"
         "phi_hat_max,theta_max,mu,bound_thm41,bound_thm52,bound_thm54,bound_gks_spec,bound_gks_frob,"
         "applicable_flags,seed\n";

  using Field = double TrialRecord::*;
  static constexpr Field kNumeric[] = {
      &TrialRecord::coherence,   &TrialRecord::gamma,       &TrialRecord::stable_rank, &TrialRecord::err_spec,
      &TrialRecord::err_frob,    &TrialRecord::subopt_spec, &TrialRecord::subopt_frob, &TrialRecord::phi_max,
      &TrialRecord::phi_hat_max, &TrialRecord::theta_max,   &TrialRecord::mu,          &TrialRecord::bound_thm41,
      &TrialRecord::bound_thm52, &TrialRecord::bound_thm54, &TrialRecord::bound_gks_spec,
      &TrialRecord::bound_gks_frob};

  auto prefix = [&](const std::string& trial, const TrialRecord& r) {
    out << trial << ',' << to_string(r.algorithm) << ',' << r.n << ',' << r.k << ',' << r.p << ',' << r.q << ','
        << fmt(r.alpha);
  };
  Index last_matrix = std::numeric_limits<Index>::max();
  for (Index i = 0; i < records.size();) {
    Index end = i;
    while (end < records.size() && records[end].matrix == records[i].matrix && records[end].k == records[i].k &&
           records[end].algorithm == records[i].algorithm)
      ++end;
    if (matrices.size() > 1 && records[i].matrix != last_matrix) out << "# matrix " << records[i].matrix << "\n";
    last_matrix = records[i].matrix;
    for (Index r = i; r < end; ++r) {
      const TrialRecord& rec = records[r];
      prefix(std::to_string(rec.trial), rec);
      for (Field f : kNumeric) out << ',' << fmt(rec.*f);
      out << ',' << rec.applicable_flags << ',' << rec.seed << '\n';
    }
    if (cfg.summary) {
      for (const char* label : {"mean", "q10", "q90"}) {
        prefix(label, records[i]);
        for (Field f : kNumeric) {
          std::vector<double> vals;
          for (Index r = i; r < end; ++r)
            if (!std::isnan(records[r].*f)) vals.push_back(records[r].*f);
          double v = kNaN;
          if (!vals.empty()) {
            if (label[0] == 'm') {
              v = 0.0;
              for (double x : vals) v += x;
              v /= static_cast<double>(vals.size());
            } else {
              v = nearest_rank_quantile(vals, label[1] == '1' ? 0.1 : 0.9);
            }
          }
          out << ',' << fmt(v);
        }
        out << ",," << records[i].seed << '\n';
      }
    }
    i = end;
  }
  return out.str();
}

std::string run_sweep(const ExperimentConfig& cfg, unsigned workers) {
  std::vector<PreparedMatrix> matrices;
  for (const auto& src : cfg.matrices) matrices.push_back(prepare_matrix(src, cfg.ranks.front()));
  return sweep_csv(cfg, matrices, run_trials(cfg, matrices, workers));
}

OracleResult oracle_best_subset(const Matrix& a, Index k) {
  const Index n = a.cols();
  require(k >= 1 && k <= n, ErrorCode::out_of_range, "oracle needs 1 <= k <= n");
  double count = 1.0;
  for (Index i = 0; i < k; ++i) count = count * static_cast<double>(n - i) / static_cast<double>(i + 1);
  if (count > 1e6 + 0.5) fail(ErrorCode::too_large, "oracle instance too large: C(n, k) > 1e6");
  OracleResult best;
  best.err_spectral = best.err_frobenius = std::numeric_limits<double>::infinity();
  IndexSet j(k);
  for (Index i = 0; i < k; ++i) j[i] = i;
  for (;;) {
    const Matrix e = id_from_columns(a, j).as_lowrank().residual(a);
    const double fro = frobenius_norm(e);
    const double spec = spectral_norm(e);
    if (spec < best.err_spectral) {
      best.err_spectral = spec;
      best.best_spectral = j;
    }
    if (fro < best.err_frobenius) {
      best.err_frobenius = fro;
      best.best_frobenius = j;
    }
    ++best.subsets;
    Index i = k;
    while (i > 0 && j[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++j[i - 1];
    for (Index t = i; t < k; ++t) j[t] = j[t - 1] + 1;
  }
  return best;
}

SpectrumProfile projector_default_spectrum(Index n, Index k) {
  SpectrumProfile p;
  p.kind = SpectrumKind::custom;
  p.values.resize(n);
  // Geometric decay through rank k, then a gap of 0.85 into a slowly
  // decaying tail.
  double level = 1.0;
  for (Index i = 0; i < n; ++i) {
    p.values[i] = level;
    level *= i + 1 < k ? 0.8 : (i + 1 == k ? 0.85 : 0.995);
  }
  return p;
}

ProjectorConfig parse_projector_config(const std::string& text) {
  const auto sections = parse_key_value_text(text);
  require(sections.size() == 1, ErrorCode::parse, "projector config takes no sections");
  ProjectorConfig cfg;
  bool spectrum_given = false;
  for_each_entry(sections[0], [&](const KeyValueEntry& e) {
    const std::string& v = e.value;
    if (e.key == "n") cfg.n = parse_index(v, "n");
    else if (e.key == "k") cfg.k = parse_index(v, "k");
    else if (e.key == "p") cfg.p = parse_index(v, "p");
    else if (e.key == "q") cfg.q = parse_index(v, "q");
    else if (e.key == "trials") cfg.trials = parse_index(v, "trials");
    else if (e.key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_integer(v, "seed"));
    else if (e.key == "delta") cfg.delta = parse_double(v, "delta");
    else if (e.key == "bins") cfg.bins = parse_index(v, "bins");
    else if (e.key == "spectrum") {
      cfg.spectrum = parse_spectrum(v);
      spectrum_given = true;
    } else if (e.key == "kinds") {
      cfg.kinds.clear();
      for (const auto& kind : split(v, ',')) cfg.kinds.push_back(parse_subspace_kind(kind));
    } else {
      fail(ErrorCode::parse, "unknown key '" + e.key + "'");
    }
  });
  require(cfg.trials >= 1 && cfg.bins >= 1, ErrorCode::parse, "trials and bins must be >= 1");
  require(cfg.k >= 1 && cfg.k + cfg.p <= cfg.n, ErrorCode::parse, "need 1 <= k and k + p <= n");
  if (!spectrum_given) cfg.spectrum = projector_default_spectrum(cfg.n, cfg.k);
  return cfg;
}

std::string projector_config_help() {
  return R"(Projector experiment config: flat `key = value` lines.
  n = 256, k = 18, p = 5, q = 0, trials = 100, seed = 0
  kinds    = noisy-permutation, noisy-hadamard, random-orthogonal
  spectrum = (default: geometric 0.8 through rank k, gap 0.85, tail ratio 0.995)
  delta    = (noise level; default 0.1/sqrt(n))
  bins     = 32 (log10-spaced histogram bins over [1e-8, 1])
)";
}

std::vector<ProjectorTrial> projector_trials(const ProjectorConfig& cfg, unsigned workers) {
  std::vector<ProjectorTrial> out(cfg.kinds.size() * cfg.trials);
  for (Index ki = 0; ki < cfg.kinds.size(); ++ki) {
    TestMatrixSpec spec;
    spec.n = cfg.n;
    spec.spectrum = cfg.spectrum;
    spec.subspace = cfg.kinds[ki];
    spec.delta = cfg.delta;
    spec.seed = cfg.seed;
    const TestMatrix tm = build_test_matrix(spec);
    const Matrix vk = tm.v.left_cols(cfg.k);
    std::atomic<Index> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
      for (;;) {
        const Index t = next.fetch_add(1);
        if (t >= cfg.trials) return;
        try {
          const RsvdResult r = rsvd(tm.a, {cfg.k, cfg.p, cfg.q, cfg.seed, static_cast<std::uint32_t>(t)});
          out[ki * cfg.trials + t] = {cfg.kinds[ki], t, projector_distance(vk, r.v)};
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = cfg.trials;
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < std::max(1u, workers); ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  return out;
}

std::string projector_error_experiment(const ProjectorConfig& cfg, unsigned workers) {
  const auto trials = projector_trials(cfg, workers);
  using Field = double ProjectorDistance::*;
  const std::pair<const char*, Field> metrics[] = {{"sin_theta_max", &ProjectorDistance::sin_theta_max},
                                                   {"elem_max", &ProjectorDistance::elem_max},
                                                   {"elem_median", &ProjectorDistance::elem_median},
                                                   {"elem_mean", &ProjectorDistance::elem_mean}};
  std::ostringstream out;
  out << "# skelet-projector-csv v1\n";
  out << "# n=" << cfg.n << " k=" << cfg.k << " p=" << cfg.p << " q=" << cfg.q << " trials=" << cfg.trials
      << " seed=" << cfg.seed << " spectrum=" << to_string(cfg.spectrum) << "\n";
  out << "# histogram bins are log10-spaced over [1e-8, 1]; values below 1e-8 fall in the first bin\n";
  out << "record,kind,trial,metric,sin_theta_max,elem_max,elem_median,elem_mean,bin_lo,bin_hi,count\n";
  for (SubspaceKind kind : cfg.kinds) {
    const std::string name = to_string(kind);
    std::vector<const ProjectorTrial*> mine;
    for (const auto& t : trials)
      if (t.kind == kind) mine.push_back(&t);
    for (const auto* t : mine) {
      out << "trial," << name << ',' << t->trial << ',';
      for (const auto& [label, f] : metrics) out << ',' << fmt(t->stats.*f);
      out << ",NA,NA,NA\n";
    }
    for (const char* label : {"mean", "q10", "median", "q90"}) {
      out << "summary," << name << ',' << label << ',';
      for (const auto& [metric, f] : metrics) {
        std::vector<double> vals;
        for (const auto* t : mine) vals.push_back(t->stats.*f);
        double v = 0.0;
        if (label[0] == 'm' && label[1] == 'e' && label[2] == 'a') {
          for (double x : vals) v += x;
          v /= static_cast<double>(vals.size());
        } else {
          v = nearest_rank_quantile(vals, label[0] == 'm' ? 0.5 : (label[1] == '1' ? 0.1 : 0.9));
        }
        out << ',' << fmt(v);
      }
      out << ",NA,NA,NA\n";
    }
    const double lo = -8.0, width = 8.0 / static_cast<double>(cfg.bins);
    for (const auto& [metric, f] : metrics) {
      std::vector<Index> counts(cfg.bins, 0);
      for (const auto* t : mine) {
        const double x = t->stats.*f;
        const double pos = x > 0.0 ? (std::log10(x) - lo) / width : 0.0;
        const auto bin = static_cast<Index>(std::clamp(pos, 0.0, static_cast<double>(cfg.bins - 1)));
        ++counts[bin];
      }
      for (Index b = 0; b < cfg.bins; ++b) {
        out << "hist," << name << ",," << metric << ",NA,NA,NA,NA," << fmt(lo + width * static_cast<double>(b))
            << ',' << fmt(lo + width * static_cast<double>(b + 1)) << ',' << counts[b] << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace skelet
