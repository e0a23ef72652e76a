#include "revar/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <set>

#include "revar/asymptotics.hpp"
#include "revar/dgp_sim.hpp"
#include "revar/forecast_eval.hpp"
#include "revar/io.hpp"
#include "revar/selection.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace revar {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Keys accepted by each command, on the command line (--key) or in a config file.
const std::map<std::string, std::vector<std::string>> kKeys = {
    {"fit", {"input", "model", "p", "d", "u", "algorithm", "restarts", "seed"}},
    {"select", {"input", "pmax", "criterion", "alpha", "mode", "algorithm", "restarts", "seed"}},
    {"simulate",
     {"name", "study", "dims", "errors", "sample_sizes", "replications", "seed", "se_ratios", "pmax", "alpha",
      "algorithm", "restarts"}},
    {"forecast",
     {"input", "p", "d", "u", "pmax", "alpha", "eval_start", "horizons", "bootstrap", "block_length", "refit",
      "algorithm", "restarts", "seed"}},
};

class Run {
 public:
  Run(std::string command, ConfigMap cfg, fs::path dir, int threads)
      : command_(std::move(command)), cfg_(std::move(cfg)), dir_(std::move(dir)), threads_(threads) {}

  const std::string& command() const { return command_; }
  int threads() const { return threads_; }
  bool has(const std::string& k) const { return cfg_.count(k) > 0; }

  std::string str(const std::string& k, const std::string& def) const {
    auto it = cfg_.find(k);
    return it == cfg_.end() ? def : it->second;
  }
  std::string required(const std::string& k) const {
    auto it = cfg_.find(k);
    if (it == cfg_.end() || it->second.empty()) throw UsageError("missing required option --" + dash(k));
    return it->second;
  }
  template <class T>
  T num(const std::string& k, T def) const {
    auto it = cfg_.find(k);
    return it == cfg_.end() ? def : parse_num<T>(k, it->second);
  }
  template <class T>
  T required_num(const std::string& k) const {
    return parse_num<T>(k, required(k));
  }
  template <class T>
  static T parse_num(const std::string& k, const std::string& v) {
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw UsageError("option --" + dash(k) + " expects a number, got '" + v + "'");
    }
    return out;
  }
  static std::string dash(std::string k) {
    for (char& c : k) c = c == '_' ? '-' : c;
    return k;
  }

  void write(const std::string& name, const std::string& text) {
    write_text(dir_ / name, text);
    outputs_.push_back(name);
  }

  void write_manifest(int status) {
    json m;
    m["tool"] = "revar";
    m["version"] = kVersion;
    m["command"] = command_;
    json c = json::object();
    for (const auto& [k, v] : cfg_) c[k] = v;
    m["config"] = c;
    m["seeds"] = {{"master", num<std::uint64_t>("seed", 0)}};
    m["status"] = status;
    m["outputs"] = outputs_;
    write_text(dir_ / "manifest.json", m.dump(2) + "\n");
  }

  EnvelopeOptions envelope() const {
    EnvelopeOptions o;
    o.algorithm = parse_algorithm(str("algorithm", "auto"));
    o.restarts = num<int>("restarts", o.restarts);
    o.seed = num<std::uint64_t>("seed", 0);
    return o;
  }

  TimeSeriesData input() const { return read_csv(required("input")); }

 private:
  std::string command_;
  ConfigMap cfg_;
  fs::path dir_;
  int threads_;
  std::vector<std::string> outputs_;
};

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json dims_json(const Dims& d) { return {{"d", d.d}, {"u", d.u}, {"p", d.p}, {"q", d.q}}; }

std::string lower(ModelKind m) {
  std::string s = to_string(m);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// ---------------------------------------------------------------- fit

int cmd_fit(Run& run, std::ostream& out) {
  const TimeSeriesData data = run.input();
  const std::string which = run.str("model", "revar");
  std::vector<ModelKind> models;
  if (which == "all") {
    models = {ModelKind::OLSVAR, ModelKind::EVAR, ModelKind::RRVAR, ModelKind::REVAR};
  } else {
    models = {parse_model(which)};
  }
  Dims dims;
  dims.q = static_cast<int>(data.dim());
  dims.p = run.required_num<int>("p");
  for (ModelKind m : models) {
    if (m == ModelKind::RRVAR || m == ModelKind::REVAR) dims.d = run.required_num<int>("d");
    if (m == ModelKind::EVAR || m == ModelKind::REVAR) dims.u = run.required_num<int>("u");
  }
  const AutocovarianceSet acov = sample_autocovariances(build_lag_design(data, dims.p));
  const Index T = acov.sample_size;
  const EnvelopeOptions opts = run.envelope();

  json report = json::array();
  std::string summary = "model,d,u,p,q,nop,loglik,aic,bic,converged\n";
  bool warnings = false;
  for (ModelKind m : models) {
    const VarEstimate est = fit_model(m, acov, dims, opts);
    const std::string dir = lower(m) + "/";
    run.write(dir + "alpha.csv", matrix_to_csv(est.alpha));
    run.write(dir + "beta.csv", matrix_to_csv(est.beta));
    run.write(dir + "sigma.csv", matrix_to_csv(est.sigma));
    const std::pair<const char*, const MatrixXd*> factors[] = {
        {"a", &est.a},   {"b", &est.b},   {"phi", &est.phi},     {"phi0", &est.phi0},
        {"nu", &est.nu}, {"xi", &est.xi}, {"omega", &est.omega}, {"omega0", &est.omega0}};
    for (const auto& [name, mat] : factors) {
      if (mat->size() > 0) run.write(dir + name + ".csv", matrix_to_csv(*mat));
    }
    const ParameterVectors params = parameters_from_estimate(est, acov.gamma_p);
    run.write(dir + "se.csv", matrix_to_csv(avar(m, params).standard_errors(T)));

    const bool converged = !est.has_envelope() || est.envelope.converged;
    warnings = warnings || !converged;
    json e = {{"model", to_string(m)},
              {"dims", dims_json(est.dims)},
              {"sample_size", T},
              {"loglik", est.loglik},
              {"nop", est.nop},
              {"aic", information_criterion(Criterion::AIC, est.loglik, est.nop, T)},
              {"bic", information_criterion(Criterion::BIC, est.loglik, est.nop, T)},
              {"converged", converged}};
    if (est.has_envelope()) {
      e["envelope"] = {{"objective", est.envelope.objective},
                       {"iterations", est.envelope.iterations},
                       {"start", est.envelope.start}};
    }
    report.push_back(e);
    summary += to_string(m) + "," + std::to_string(est.dims.d) + "," + std::to_string(est.dims.u) + "," +
               std::to_string(est.dims.p) + "," + std::to_string(est.dims.q) + "," + std::to_string(est.nop) + "," +
               format_double(est.loglik) + "," + format_double(e["aic"].get<double>()) + "," +
               format_double(e["bic"].get<double>()) + "," + (converged ? "true" : "false") + "\n";
    out << to_string(m) << ": loglik=" << format_double(est.loglik) << " nop=" << est.nop
        << (converged ? "" : " (not converged)") << "\n";
  }
  run.write("fit.json", report.dump(2) + "\n");
  run.write("summary.csv", summary);
  return warnings ? kExitWarnings : kExitOk;
}

// ---------------------------------------------------------------- select

int cmd_select(Run& run, std::ostream& out) {
  const TimeSeriesData data = run.input();
  const int pmax = run.num<int>("pmax", 4);
  const Criterion crit = parse_criterion(run.str("criterion", "bic"));
  const double alpha = run.num<double>("alpha", 0.05);
  const DimsMode mode = parse_dims_mode(run.str("mode", "sequential"));
  const SelectionReport lag = select_lag(data, pmax, crit);

  std::string lags = "p,logdet,nop,value\n";
  for (const LagCandidate& c : lag.lags) {
    lags += std::to_string(c.p) + "," + format_double(c.logdet) + "," + std::to_string(c.nop) + "," +
            format_double(c.value) + "\n";
  }
  run.write("lags.csv", lags);

  SelectionReport dims;
  dims.d_hat = dims.u_hat = 0;
  if (lag.p_hat >= 1) {
    const AutocovarianceSet acov = sample_autocovariances(build_lag_design(data, lag.p_hat));
    dims = select_dims(acov, acov.sample_size, mode, crit, alpha, run.envelope());
  }
  std::string ranks = "d0,statistic,df,p_value\n";
  for (const RankTestResult& r : dims.rank_tests) {
    ranks += std::to_string(r.d0) + "," + format_double(r.statistic) + "," + std::to_string(r.df) + "," +
             format_double(r.p_value) + "\n";
  }
  std::string grid = "d,u,loglik,nop,value,converged,failed\n";
  bool warnings = false;
  for (const DimsCandidate& c : dims.grid) {
    grid += std::to_string(c.d) + "," + std::to_string(c.u) + "," + format_double(c.loglik) + "," +
            std::to_string(c.nop) + "," + format_double(c.value) + "," + (c.converged ? "true" : "false") + "," +
            (c.failed ? "true" : "false") + "\n";
    warnings = warnings || (!c.failed && !c.converged);
  }
  std::string tests = "u0,statistic,df,p_value\n";
  for (const DimsTestResult& t : dims.dims_tests) {
    tests += std::to_string(t.u0) + "," + format_double(t.statistic) + "," + std::to_string(t.df) + "," +
             format_double(t.p_value) + "\n";
  }
  run.write("rank_tests.csv", ranks);
  run.write("grid.csv", grid);
  run.write("dims_tests.csv", tests);

  json j = {{"criterion", to_string(crit)}, {"mode", to_string(mode)}, {"alpha", alpha}, {"pmax", pmax},
            {"p_hat", lag.p_hat},        {"d_hat", dims.d_hat},     {"u_hat", dims.u_hat}, {"q", data.dim()}};
  run.write("selection.json", j.dump(2) + "\n");
  out << "p_hat=" << lag.p_hat << " d_hat=" << dims.d_hat << " u_hat=" << dims.u_hat << " (mode=" << to_string(mode)
      << ", criterion=" << to_string(crit) << ")\n";
  return warnings ? kExitWarnings : kExitOk;
}

// ---------------------------------------------------------------- simulate

SimulationScenario scenario_from(const Run& run) {
  SimulationScenario s;
  s.name = run.str("name", "scenario");
  const std::vector<std::string> d = split_list(run.required("dims"));
  if (d.size() != 4) throw UsageError("--dims expects d,u,p,q");
  s.dims.d = Run::parse_num<int>("dims", d[0]);
  s.dims.u = Run::parse_num<int>("dims", d[1]);
  s.dims.p = Run::parse_num<int>("dims", d[2]);
  s.dims.q = Run::parse_num<int>("dims", d[3]);
  s.family = parse_family(run.str("errors", "normal"));
  if (run.has("sample_sizes")) {
    s.sample_sizes.clear();
    for (const std::string& t : split_list(run.str("sample_sizes", ""))) {
      s.sample_sizes.push_back(Run::parse_num<Index>("sample_sizes", t));
    }
  }
  s.replications = run.num<int>("replications", s.replications);
  s.seed = run.num<std::uint64_t>("seed", s.seed);
  s.envelope = run.envelope();
  s.se_ratios = run.str("se_ratios", "true") != "false";
  s.p_max = run.num<int>("pmax", s.p_max);
  s.alpha = run.num<double>("alpha", s.alpha);
  s.threads = run.threads();
  return s;
}

int cmd_simulate(Run& run, std::ostream& out) {
  const SimulationScenario sc = scenario_from(run);
  const std::string study = run.str("study", "mc");
  if (study == "selection") {
    std::string csv = "scenario,T,n,p_correct,d_correct,u_correct,u_over,u_under,status\n";
    try {
      const SelectionStudy st = run_selection_study(sc);
      for (const SelectionStudyRow& r : st.rows) {
        csv += sc.name + "," + std::to_string(r.T) + "," + std::to_string(r.n) + "," +
               format_double(100.0 * r.p_correct) + "," + format_double(100.0 * r.d_correct) + "," +
               format_double(100.0 * r.u_correct) + "," + std::to_string(r.u_over) + "," +
               std::to_string(r.u_under) + ",ok\n";
        out << "T=" << r.T << " p%=" << format_double(100.0 * r.p_correct)
            << " d%=" << format_double(100.0 * r.d_correct) << " u%=" << format_double(100.0 * r.u_correct) << "\n";
      }
      run.write("selection_study.csv", csv);
      return st.failures > 0 ? kExitWarnings : kExitOk;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CannotStabilize) throw;
      csv += sc.name + ",,,,,,,," + to_string(e.kind()) + "\n";
      run.write("selection_study.csv", csv);
      out << sc.name << ": " << e.what() << "\n";
      return kExitWarnings;
    }
  }
  if (study != "mc") throw UsageError("--study must be mc or selection");

  std::string csv = "scenario,T,model,n,mean_error,se_mean,r_min,r_max,r_avg,status\n";
  McReport rep;
  try {
    rep = run_monte_carlo(sc);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::CannotStabilize) throw;
    csv += sc.name + ",,,,,,,,," + to_string(e.kind()) + "\n";
    run.write("mc.csv", csv);
    out << sc.name << ": " << e.what() << "\n";
    return kExitWarnings;
  }
  for (const McRow& r : rep.rows) {
    csv += sc.name + "," + std::to_string(r.T) + "," + to_string(r.model) + "," + std::to_string(r.n) + "," +
           format_double(r.mean_error) + "," + format_double(r.se_mean) + "," + format_double(r.r_min) + "," +
           format_double(r.r_max) + "," + format_double(r.r_avg) + ",ok\n";
  }
  run.write("mc.csv", csv);

  std::string errs = "T,model,rep,error\n";
  for (std::size_t t = 0; t < rep.errors.size(); ++t) {
    for (std::size_t m = 0; m < rep.errors[t].size(); ++m) {
      for (std::size_t r = 0; r < rep.errors[t][m].size(); ++r) {
        errs += std::to_string(sc.sample_sizes[t]) + "," + to_string(rep.rows[t * 4 + m].model) + "," +
                std::to_string(r) + "," + format_double(rep.errors[t][m][r]) + "\n";
      }
    }
  }
  run.write("errors.csv", errs);
  run.write("truth_beta.csv", matrix_to_csv(rep.truth.beta));
  run.write("truth_sigma.csv", matrix_to_csv(rep.truth.sigma));

  json j = {{"scenario", sc.name},
            {"dims", dims_json(sc.dims)},
            {"errors", to_string(sc.family)},
            {"replications", sc.replications},
            {"seed", sc.seed},
            {"spectral_radius", rep.truth.spectral_radius},
            {"failures", rep.failures},
            {"convergence_warnings", rep.convergence_warnings},
            {"failure_messages", rep.failure_messages}};
  run.write("report.json", j.dump(2) + "\n");
  for (const McRow& r : rep.rows) {
    out << "T=" << r.T << " " << to_string(r.model) << " mean_error=" << format_double(r.mean_error) << "\n";
  }
  return rep.failures + rep.convergence_warnings > 0 ? kExitWarnings : kExitOk;
}

// ---------------------------------------------------------------- forecast

int cmd_forecast(Run& run, std::ostream& out) {
  const TimeSeriesData data = run.input();
  EvalConfig cfg;
  cfg.eval_start = run.num<double>("eval_start", 0.75);
  cfg.horizons = run.num<int>("horizons", 4);
  cfg.policy = parse_refit_policy(run.str("refit", "refit"));
  cfg.envelope = run.envelope();
  const int B = run.num<int>("bootstrap", 100);
  const std::uint64_t seed = run.num<std::uint64_t>("seed", 0);

  Dims dims;
  dims.q = static_cast<int>(data.dim());
  std::string dims_source = "given";
  if (run.has("p") && run.has("d") && run.has("u")) {
    dims.p = run.required_num<int>("p");
    dims.d = run.required_num<int>("d");
    dims.u = run.required_num<int>("u");
  } else {
    // Selected once on the pre-evaluation sample.
    dims_source = "selected";
    const Index t0 = static_cast<Index>(std::llround(cfg.eval_start * static_cast<double>(data.length())));
    TimeSeriesData pre;
    pre.values = data.values.topRows(std::min(t0, data.length()));
    dims.p = run.has("p") ? run.required_num<int>("p")
                          : std::max(1, select_lag(pre, run.num<int>("pmax", 4), Criterion::BIC).p_hat);
    const AutocovarianceSet acov = sample_autocovariances(build_lag_design(pre, dims.p));
    dims.d = run.has("d") ? run.required_num<int>("d")
                          : std::max(1, select_rank(acov, acov.sample_size, run.num<double>("alpha", 0.05)).d_hat);
    dims.u = run.has("u") ? run.required_num<int>("u")
                          : select_envelope_dim(acov, acov.sample_size, dims.d, Criterion::BIC, cfg.envelope).u_hat;
  }
  if (dims.d < 1 || dims.d > dims.u || dims.u > dims.q) throw Error(ErrorKind::BadDims, "need 1 <= d <= u <= q");

  const std::vector<ModelSpec> specs = {{ModelKind::OLSVAR, dims},
                                        {ModelKind::EVAR, dims},
                                        {ModelKind::RRVAR, dims},
                                        {ModelKind::REVAR, dims}};
  std::optional<double> block;
  if (run.has("block_length")) block = run.required_num<double>("block_length");
  const ForecastTable table = bootstrap_forecast_table(data, specs, B, cfg, seed, block, run.threads());

  std::string csv = "model,d,u,p,q,NOP,r_avg";
  for (int h = 1; h <= cfg.horizons; ++h) csv += ",h=" + std::to_string(h);
  csv += "\n";
  json rows = json::array();
  bool warnings = false;
  for (const ForecastTableRow& r : table.rows) {
    csv += to_string(r.spec.model) + "," + std::to_string(dims.d) + "," + std::to_string(dims.u) + "," +
           std::to_string(dims.p) + "," + std::to_string(dims.q) + "," + std::to_string(r.nop) + "," +
           (std::isfinite(r.r_avg) ? format_double(r.r_avg) : "");
    json rm = json::array();
    for (int h = 0; h < cfg.horizons; ++h) {
      csv += "," + format_double(r.rmsfe(h));
      rm.push_back(number(r.rmsfe(h)));
    }
    csv += "\n";
    rows.push_back({{"model", to_string(r.spec.model)},
                    {"nop", r.nop},
                    {"r_avg", number(r.r_avg)},
                    {"rmsfe", rm},
                    {"samples", r.samples},
                    {"fit_failures", r.fit_failures},
                    {"convergence_warnings", r.convergence_warnings}});
    warnings = warnings || r.fit_failures > 0 || r.convergence_warnings > 0;
    out << to_string(r.spec.model) << " NOP=" << r.nop << " RMSFE_1=" << format_double(r.rmsfe(0)) << "\n";
  }
  run.write("forecast_table.csv", csv);
  json j = {{"dims", dims_json(dims)},
            {"dims_source", dims_source},
            {"eval_start", cfg.eval_start},
            {"horizons", cfg.horizons},
            {"refit", to_string(cfg.policy)},
            {"bootstrap", B},
            {"block_length", table.block_length},
            {"seed", seed},
            {"rows", rows}};
  run.write("forecast.json", j.dump(2) + "\n");
  return warnings ? kExitWarnings : kExitOk;
}

int dispatch(Run& run, std::ostream& out) {
  if (run.command() == "fit") return cmd_fit(run, out);
  if (run.command() == "select") return cmd_select(run, out);
  if (run.command() == "simulate") return cmd_simulate(run, out);
  if (run.command() == "forecast") return cmd_forecast(run, out);
  throw UsageError("unknown command '" + run.command() + "'");
}

void report_error(std::ostream& err, const fs::path& dir, const std::string& kind, const std::string& message,
                  long row = 0, long column = 0) {
  json e = {{"error", kind}, {"message", message}};
  if (row > 0) e["row"] = row;
  if (column > 0) e["column"] = column;
  err << e.dump() << "\n";
  try {
    write_text(dir / "error.json", e.dump(2) + "\n");
  } catch (const std::exception&) {
  }
}

fs::path default_out_dir() {
  const char* env = std::getenv("REVAR_OUTPUT_DIR");
  return env && *env ? fs::path(env) : fs::path("revar_out");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reduced-rank envelope VAR estimation, selection, simulation and forecasting", "revar"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::string out_dir;
  int threads = 1;
  app.add_option("--out", out_dir, "Output directory (default $REVAR_OUTPUT_DIR or ./revar_out)");
  app.add_option("--threads", threads, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::string> config_path;
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> help = {
      {"fit", "Fit OLSVAR, RRVAR, EVAR, REVAR or all four"},
      {"select", "Select lag order, rank and envelope dimension"},
      {"simulate", "Monte-Carlo estimation error or selection study"},
      {"forecast", "Pseudo-real-time forecast comparison with stationary bootstrap"},
  };
  for (const auto& [cmd, keys] : kKeys) {
    CLI::App* sub = app.add_subcommand(cmd, help.at(cmd));
    sub->add_option("--config", config_path[cmd], "key = value file; flags override it");
    for (const std::string& k : keys) {
      if (k == "input") {
        sub->add_option("input", values[cmd][k], "CSV input (header row, oldest first)");
      } else {
        sub->add_option("--" + Run::dash(k), values[cmd][k]);
      }
    }
    subs[cmd] = sub;
  }
  std::string manifest_path;
  CLI::App* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", manifest_path, "manifest.json")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, out_dir.empty() ? default_out_dir() : fs::path(out_dir), "Usage", e.what());
    return kExitError;
  }

  const fs::path dir = out_dir.empty() ? default_out_dir() : fs::path(out_dir);
  std::string command;
  ConfigMap cfg;
  try {
    if (replay->parsed()) {
      const json m = json::parse(read_text(manifest_path));
      command = m.at("command").get<std::string>();
      for (const auto& [k, v] : m.at("config").items()) cfg[k] = v.get<std::string>();
    } else {
      for (const auto& [cmd, sub] : subs) {
        if (!sub->parsed()) continue;
        command = cmd;
        if (!config_path[cmd].empty()) cfg = read_config(config_path[cmd]);
        for (const auto& [k, v] : values[cmd]) {
          if (sub->count(k == "input" ? "input" : "--" + Run::dash(k)) > 0) cfg[k] = v;
        }
      }
    }
    if (!kKeys.count(command)) throw UsageError("unknown command '" + command + "'");
    const std::vector<std::string>& allowed = kKeys.at(command);
    for (const auto& [k, v] : cfg) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        throw UsageError("unknown key '" + k + "' for " + command);
      }
    }
    if (cfg.count("input")) cfg["input"] = fs::absolute(cfg["input"]).lexically_normal().string();
  } catch (const ParseError& e) {
    report_error(err, dir, "Parse", e.what(), e.row(), e.column());
    return kExitError;
  } catch (const std::exception& e) {
    report_error(err, dir, "Usage", e.what());
    return kExitError;
  }

  Run run(command, cfg, dir, threads);
  try {
    const int status = dispatch(run, out);
    run.write_manifest(status);
    return status;
  } catch (const ParseError& e) {
    report_error(err, dir, "Parse", e.what(), e.row(), e.column());
  } catch (const Error& e) {
    report_error(err, dir, to_string(e.kind()), e.what());
  } catch (const UsageError& e) {
    report_error(err, dir, "Usage", e.what());
  } catch (const std::exception& e) {
    report_error(err, dir, "Internal", e.what());
  }
  return kExitError;
}

}  // namespace revar
