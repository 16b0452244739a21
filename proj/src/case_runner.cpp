#include "dqplate/case_runner.hpp"

#include "dqplate/errors.hpp"
#include "dqplate/series_reference.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace dqplate {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Reads the members of one JSON object, rejecting unknown keys.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  [[nodiscard]] bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& get(const std::string& key) {
    if (!has(key)) fail(key, "missing required field");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::size_t count(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(key, "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  std::string text(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  bool flag_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = get(key);
    if (!v.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(key, "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<std::size_t> counts(const std::string& key) {
    const json& v = get(key);
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of integers");
    std::vector<std::size_t> out;
    for (const auto& e : v) {
      if (!e.is_number_integer() || e.get<long long>() < 0) {
        fail(key, "expected a non-empty array of integers");
      }
      out.push_back(e.get<std::size_t>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) fail(key, "unknown field");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    std::string field = path_;
    if (!key.empty()) field += field.empty() ? key : "." + key;
    throw CaseParseError("field '" + (field.empty() ? std::string("<root>") : field) + "': " + msg);
  }

  [[nodiscard]] std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

GridKind parse_kind(const std::string& s, const ObjectReader& r, const std::string& key) {
  if (s == "chebyshev_mapped" || s == "chebyshev") return GridKind::chebyshev_mapped;
  if (s == "uniform") return GridKind::uniform;
  r.fail(key, "unknown grid kind '" + s + "' (expected chebyshev_mapped or uniform)");
}

JacobianStrategy parse_strategy(const std::string& s, const ObjectReader& r, const std::string& key) {
  if (s == "sjt") return JacobianStrategy::sjt_analytic;
  if (s == "fd") return JacobianStrategy::finite_difference;
  r.fail(key, "unknown jacobian strategy '" + s + "' (expected sjt or fd)");
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void dump_report(const NewtonReport& rep, std::ostream& log) {
  log << "newton report: strategy=" << to_string(rep.jacobian_strategy)
      << " iterations=" << rep.iterations << " converged=" << (rep.converged ? "yes" : "no");
  if (!rep.failure.empty()) log << " failure=\"" << rep.failure << "\"";
  log << "\n  residual history:";
  for (double r : rep.residual_history) log << ' ' << format_number(r);
  log << "\n  time residual=" << format_number(rep.times.residual_s)
      << "s jacobian=" << format_number(rep.times.jacobian_s)
      << "s linear=" << format_number(rep.times.linear_solve_s) << "s\n";
}

// Runs fn(0..count-1) on a small pool of threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool is_isotropic(const PlateSpec& s) {
  const double g = s.E1 / (2.0 * (1.0 + s.nu12));
  return s.E1 == s.E2 && std::abs(s.G12 - g) <= 1e-12 * g;
}

template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const CaseParseError& e) {
    log << "error: " << e.what() << "\n";
    return exit_code::parse_error;
  } catch (const InvalidArgument& e) {
    log << "error: invalid case: " << e.what() << "\n";
    return exit_code::parse_error;
  } catch (const InvalidMaterial& e) {
    log << "error: invalid case: " << e.what() << "\n";
    return exit_code::parse_error;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_code::failure;
  }
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CaseFile parse_case(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw CaseParseError("line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }

  CaseFile c;
  ObjectReader top(root, "");

  {
    ObjectReader plate(top.get("plate"), "plate");
    c.spec.a = plate.number("a");
    c.spec.b = plate.number_or("b", c.spec.a);
    c.spec.h = plate.number("h");
    plate.finish();
  }
  {
    ObjectReader mat(top.get("material"), "material");
    if (mat.has("E")) {
      const double e = mat.number("E");
      const double nu = mat.number("nu");
      c.spec.E1 = c.spec.E2 = e;
      c.spec.nu12 = nu;
      c.spec.G12 = e / (2.0 * (1.0 + nu));
    } else {
      c.spec.E1 = mat.number("E1");
      c.spec.E2 = mat.number("E2");
      c.spec.nu12 = mat.number("nu12");
      c.spec.G12 = mat.number("G12");
    }
    mat.finish();
  }
  {
    ObjectReader load(top.get("load"), "load");
    c.spec.q = load.number("q");
    load.finish();
  }
  {
    const std::string bc = top.text("boundary");
    if (bc == "simply_supported") {
      c.spec.bc = BcKind::simply_supported;
    } else if (bc == "clamped") {
      c.spec.bc = BcKind::clamped;
    } else {
      top.fail("boundary", "expected simply_supported or clamped, got '" + bc + "'");
    }
  }
  {
    ObjectReader grid(top.get("grid"), "grid");
    if (grid.has("kind")) c.spec.grid_kind = parse_kind(grid.text("kind"), grid, "kind");
    c.spec.nx = grid.count("nx");
    c.spec.ny = grid.has("ny") ? grid.count("ny") : c.spec.nx;
    grid.finish();
  }
  if (top.has("solver")) {
    ObjectReader solver(top.get("solver"), "solver");
    c.solver.tol = solver.number_or("tol", c.solver.tol);
    if (solver.has("max_iter")) c.solver.max_iter = static_cast<int>(solver.count("max_iter"));
    if (solver.has("jacobian")) c.jacobian = parse_strategy(solver.text("jacobian"), solver, "jacobian");
    c.fd_step = solver.number_or("fd_step", c.fd_step);
    solver.finish();
    if (!(c.solver.tol > 0.0)) solver.fail("tol", "must be positive");
    if (!(c.fd_step > 0.0)) solver.fail("fd_step", "must be positive");
  }
  if (top.has("sweep")) {
    ObjectReader sweep(top.get("sweep"), "sweep");
    SweepBlock s{sweep.numbers("loads")};
    sweep.finish();
    if (s.loads.empty()) sweep.fail("loads", "must not be empty");
    c.sweep = std::move(s);
  }
  if (top.has("bench")) {
    ObjectReader bench(top.get("bench"), "bench");
    BenchBlock b;
    b.grids = bench.counts("grids");
    if (bench.has("repetitions")) b.repetitions = static_cast<int>(bench.count("repetitions"));
    bench.finish();
    if (b.repetitions < 1) bench.fail("repetitions", "must be at least 1");
    c.bench = std::move(b);
  }
  if (top.has("convergence")) {
    ObjectReader conv(top.get("convergence"), "convergence");
    ConvergenceBlock b;
    b.grids = conv.counts("grids");
    if (conv.has("kinds")) {
      const json& kinds = conv.get("kinds");
      if (!kinds.is_array() || kinds.empty()) conv.fail("kinds", "expected a non-empty array");
      b.kinds.clear();
      for (const auto& k : kinds) {
        if (!k.is_string()) conv.fail("kinds", "expected grid kind strings");
        b.kinds.push_back(parse_kind(k.get<std::string>(), conv, "kinds"));
      }
    }
    if (conv.has("loads")) b.loads = conv.numbers("loads");
    if (conv.has("reference_grid")) b.reference_grid = conv.count("reference_grid");
    b.linear_comparison = conv.flag_or("linear_comparison", false);
    b.delta = conv.number_or("delta", b.delta);
    conv.finish();
    c.convergence = std::move(b);
  }
  top.finish();

  try {
    c.spec.validate();
  } catch (const std::invalid_argument& e) {
    throw CaseParseError(std::string("invalid plate: ") + e.what());
  }
  return c;
}

CaseFile load_case(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CaseParseError("cannot open case file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_case(ss.str());
}

void apply_overrides(CaseFile& c, const Overrides& o) {
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw CaseParseError("--tol must be positive");
    c.solver.tol = *o.tol;
  }
  if (o.max_iter) {
    if (*o.max_iter < 0) throw CaseParseError("--max-iter must be non-negative");
    c.solver.max_iter = *o.max_iter;
  }
  if (o.jacobian) c.jacobian = *o.jacobian;
}

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DQPLATE_WORKERS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

BenchReport run_benchmark(const CaseFile& c) {
  if (!c.bench) throw CaseParseError("field 'bench': missing benchmark block");
  BenchReport rep;
  for (std::size_t n : c.bench->grids) {
    PlateSpec spec = c.spec;
    spec.nx = spec.ny = n;
    const AssembledSystem sys = assemble(spec);
    const Vector w0 = linear_solve(sys);
    const ResidualFn res = [&sys](const Vector& w) { return residual(sys, w); };

    Vector converged[2];
    for (JacobianStrategy s : {JacobianStrategy::sjt_analytic, JacobianStrategy::finite_difference}) {
      BenchRow row;
      row.n = n;
      row.strategy = s;
      row.jac_ms = std::numeric_limits<double>::infinity();
      row.solve_ms = std::numeric_limits<double>::infinity();
      for (int r = 0; r < c.bench->repetitions; ++r) {
        auto t0 = Clock::now();
        const Matrix j = s == JacobianStrategy::sjt_analytic ? jacobian(sys, w0)
                                                             : fd_jacobian(res, w0, c.fd_step);
        row.jac_ms = std::min(row.jac_ms, ms_since(t0));
        if (j.size() == 0) throw std::logic_error("empty Jacobian");

        t0 = Clock::now();
        const PlateSolution sol = solve_plate(sys, c.solver, s, std::nullopt, c.fd_step);
        row.solve_ms = std::min(row.solve_ms, ms_since(t0));
        row.iterations = sol.report.iterations;
        row.converged = sol.report.converged;
        converged[s == JacobianStrategy::sjt_analytic ? 0 : 1] = sol.field.Wbar;
      }
      rep.rows.push_back(row);
    }
    const double scale = std::max(converged[0].cwiseAbs().maxCoeff(), 1e-300);
    rep.strategy_difference.push_back((converged[0] - converged[1]).cwiseAbs().maxCoeff() / scale);
  }
  return rep;
}

ConvergenceReport run_convergence_study(const CaseFile& c) {
  if (!c.convergence) throw CaseParseError("field 'convergence': missing convergence block");
  const ConvergenceBlock& b = *c.convergence;
  std::vector<double> loads = b.loads.empty() ? std::vector<double>{c.spec.q} : b.loads;
  for (std::size_t i = 0; i < loads.size(); ++i) {
    if (!(loads[i] > 0.0) || (i > 0 && !(loads[i] > loads[i - 1]))) {
      throw CaseParseError("field 'convergence.loads': loads must be positive and increasing");
    }
  }

  struct Task {
    GridKind kind;
    std::size_t n;
  };
  std::vector<Task> tasks{{GridKind::chebyshev_mapped, b.reference_grid}};
  for (GridKind k : b.kinds) {
    for (std::size_t n : b.grids) tasks.push_back({k, n});
  }
  std::vector<SweepResult> results(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    PlateSpec spec = c.spec;
    spec.grid_kind = tasks[i].kind;
    spec.nx = spec.ny = tasks[i].n;
    results[i] = load_sweep(spec, loads, c.solver, c.jacobian);
  });

  ConvergenceReport rep;
  const SweepResult& ref = results[0];
  if (!ref.complete) rep.all_converged = false;
  for (std::size_t t = 1; t < tasks.size(); ++t) {
    const SweepResult& r = results[t];
    if (!r.complete) rep.all_converged = false;
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
      ConvergenceRow row;
      row.kind = tasks[t].kind;
      row.n = tasks[t].n;
      row.q = r.rows[k].q;
      row.center_deflection_ratio = r.rows[k].center_deflection_ratio;
      row.converged = r.rows[k].converged;
      row.abs_error = k < ref.rows.size()
                          ? std::abs(row.center_deflection_ratio - ref.rows[k].center_deflection_ratio)
                          : std::numeric_limits<double>::quiet_NaN();
      rep.rows.push_back(row);
    }
  }

  if (b.linear_comparison) {
    if (!is_isotropic(c.spec)) {
      throw CaseParseError("field 'convergence.linear_comparison': series reference needs an isotropic plate");
    }
    const DerivedMaterial m = derive_material(c.spec);
    const double alpha = linear_center_coefficient(c.spec.bc, c.spec.b / c.spec.a);
    const double series = alpha * c.spec.q * std::pow(c.spec.a, 4) / (m.D1 * c.spec.h);
    const std::string reduced = c.spec.bc == BcKind::clamped ? "dqcy" : "dqwb";
    for (std::size_t n : b.grids) {
      PlateSpec spec = c.spec;
      spec.nx = spec.ny = n;
      const double dq = [&] {
        const AssembledSystem sys = assemble(spec);
        const Vector w = linear_solve(sys);
        return recover_fields(sys, w, Vector::Zero(w.size()), Vector::Zero(w.size()))
            .center_deflection_ratio;
      }();
      const double delta = linear_delta_center(spec, b.delta);
      rep.linear.push_back({"delta", n, delta, series, std::abs(delta - series)});
      rep.linear.push_back({reduced, n, dq, series, std::abs(dq - series)});
    }
  }
  return rep;
}

int run_case(const std::filesystem::path& path, const std::filesystem::path& out_dir,
             const Overrides& o, std::ostream& log) {
  return guarded(log, [&] {
    CaseFile c = load_case(path);
    apply_overrides(c, o);
    const auto t0 = Clock::now();
    const AssembledSystem sys = assemble(c.spec);
    const PlateSolution sol = solve_plate(sys, c.solver, c.jacobian, std::nullopt, c.fd_step);
    const double wall_s = ms_since(t0) / 1000.0;

    std::filesystem::create_directories(out_dir);
    std::string summary = "center_w_over_h,iterations,final_residual,wall_time_s,converged\n";
    summary += format_number(sol.field.center_deflection_ratio) + "," +
               std::to_string(sol.report.iterations) + "," +
               format_number(sol.report.final_residual()) + "," + format_number(wall_s) + "," +
               (sol.report.converged ? "1" : "0") + "\n";
    write_file(out_dir / "summary.csv", summary);

    if (!sol.report.converged) {
      log << "error: Newton iteration did not converge\n";
      dump_report(sol.report, log);
      return exit_code::not_converged;
    }
    std::string csv = "x,y,w,u,v\n";
    const auto& f = sol.field;
    for (Eigen::Index i = 0; i < f.w.rows(); ++i) {
      for (Eigen::Index j = 0; j < f.w.cols(); ++j) {
        csv += format_number(f.x[static_cast<std::size_t>(i)]) + "," +
               format_number(f.y[static_cast<std::size_t>(j)]) + "," + format_number(f.w(i, j)) +
               "," + format_number(f.u(i, j)) + "," + format_number(f.v(i, j)) + "\n";
      }
    }
    write_file(out_dir / "solution.csv", csv);
    log << "center w/h = " << format_number(f.center_deflection_ratio) << " after "
        << sol.report.iterations << " Newton iterations (max residual "
        << format_number(sol.report.final_residual()) << ")\n";
    return exit_code::ok;
  });
}

int run_sweep(const std::filesystem::path& path, const std::filesystem::path& out_dir,
              const Overrides& o, std::ostream& log) {
  return guarded(log, [&] {
    CaseFile c = load_case(path);
    apply_overrides(c, o);
    if (!c.sweep) throw CaseParseError("field 'sweep': missing sweep block");
    SweepResult r;
    try {
      r = load_sweep(c.spec, c.sweep->loads, c.solver, c.jacobian);
    } catch (const InvalidArgument& e) {
      throw CaseParseError(std::string("field 'sweep.loads': ") + e.what());
    }
    std::filesystem::create_directories(out_dir);
    std::string csv = "q,center_w_over_h,iterations,converged\n";
    for (const auto& row : r.rows) {
      csv += format_number(row.q) + "," + format_number(row.center_deflection_ratio) + "," +
             std::to_string(row.iterations) + "," + (row.converged ? "1" : "0") + "\n";
    }
    write_file(out_dir / "sweep.csv", csv);
    if (!r.complete) {
      log << "error: sweep stopped: " << r.failure << "\n";
      return exit_code::not_converged;
    }
    log << "sweep: " << r.rows.size() << " loads solved\n";
    return exit_code::ok;
  });
}

int run_bench(const std::filesystem::path& path, const std::filesystem::path& out_dir,
              const Overrides& o, std::ostream& log) {
  return guarded(log, [&] {
    CaseFile c = load_case(path);
    apply_overrides(c, o);
    const BenchReport rep = run_benchmark(c);
    std::filesystem::create_directories(out_dir);
    std::string csv = "n,strategy,jac_ms,solve_ms,iterations\n";
    bool all_converged = true;
    for (const auto& row : rep.rows) {
      csv += std::to_string(row.n) + "," + to_string(row.strategy) + "," +
             format_number(row.jac_ms) + "," + format_number(row.solve_ms) + "," +
             std::to_string(row.iterations) + "\n";
      all_converged = all_converged && row.converged;
    }
    write_file(out_dir / "bench.csv", csv);
    for (std::size_t i = 0; i < rep.strategy_difference.size(); ++i) {
      log << "grid " << c.bench->grids[i] << ": max relative W difference sjt vs fd = "
          << format_number(rep.strategy_difference[i]) << "\n";
    }
    if (!all_converged) {
      log << "error: at least one benchmark solve did not converge\n";
      return exit_code::not_converged;
    }
    return exit_code::ok;
  });
}

int run_convergence(const std::filesystem::path& path, const std::filesystem::path& out_dir,
                    const Overrides& o, std::ostream& log) {
  return guarded(log, [&] {
    CaseFile c = load_case(path);
    apply_overrides(c, o);
    const ConvergenceReport rep = run_convergence_study(c);
    std::filesystem::create_directories(out_dir);
    std::string csv = "grid_kind,n,q,center_w_over_h,abs_error,converged\n";
    for (const auto& row : rep.rows) {
      csv += std::string(to_string(row.kind)) + "," + std::to_string(row.n) + "," +
             format_number(row.q) + "," + format_number(row.center_deflection_ratio) + "," +
             format_number(row.abs_error) + "," + (row.converged ? "1" : "0") + "\n";
    }
    write_file(out_dir / "convergence.csv", csv);
    if (!rep.linear.empty()) {
      std::string lin = "method,n,center_w_over_h,series,abs_error\n";
      for (const auto& row : rep.linear) {
        lin += row.method + "," + std::to_string(row.n) + "," +
               format_number(row.center_deflection_ratio) + "," + format_number(row.series) + "," +
               format_number(row.abs_error) + "\n";
      }
      write_file(out_dir / "linear_comparison.csv", lin);
    }
    if (!rep.all_converged) {
      log << "error: at least one convergence point did not converge\n";
      return exit_code::not_converged;
    }
    log << "convergence: " << rep.rows.size() << " points\n";
    return exit_code::ok;
  });
}

}  // namespace dqplate
