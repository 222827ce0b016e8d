#include "wlra/bench.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "wlra/comm.hpp"
#include "wlra/errors.hpp"
#include "wlra/generators.hpp"
#include "wlra/io.hpp"
#include "wlra/matrix.hpp"
#include "wlra/random.hpp"
#include "wlra/solvers.hpp"
#include "wlra/svd.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace wlra {

namespace {

constexpr const char* kResultsHeader = "dataset,solver,rank,trial,seed,loss,seconds,iterations,params";

const std::vector<std::string> kSolverNames = {
    "svd_w", "svd_w_randomized", "em", "greedy", "sample",
    "adam",  "svd",              "css", "svd_w_then_em"};

// key=value settings collected from positional arguments.
class Settings {
public:
  explicit Settings(const std::vector<std::string>& tokens) {
    for (const auto& tok : tokens) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("expected key=value, got '" + tok + "'");
      const std::string key = tok.substr(0, eq);
      if (kv_.count(key)) throw std::invalid_argument("duplicate setting '" + key + "'");
      kv_[key] = tok.substr(eq + 1);
    }
  }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string str(const std::string& key, const std::string& fallback = "") {
    used_.insert(key);
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }

  std::string require(const std::string& key) {
    used_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw std::invalid_argument("missing required setting " + key + "=...");
    return it->second;
  }

  long long integer(const std::string& key, long long fallback) {
    const std::string v = str(key);
    if (v.empty() && !has(key)) return fallback;
    try {
      std::size_t pos = 0;
      const long long out = std::stoll(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw std::invalid_argument("setting " + key + "='" + v + "' is not an integer");
    }
  }

  double real(const std::string& key, double fallback) {
    const std::string v = str(key);
    if (v.empty() && !has(key)) return fallback;
    try {
      std::size_t pos = 0;
      const double out = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw std::invalid_argument("setting " + key + "='" + v + "' is not a number");
    }
  }

  // Every provided key must have been consumed by one of the accessors.
  void finish() const {
    for (const auto& [key, value] : kv_)
      if (!used_.count(key)) throw std::invalid_argument("unknown setting '" + key + "'");
  }

private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto next = s.find(sep, pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
    if (next == s.size()) break;
  }
  return out;
}

// "1..20" or "1,2,5" or a mix of both.
std::vector<int> parse_ranks(const std::string& text) {
  std::vector<int> ranks;
  for (const auto& item : split(text, ',')) {
    const auto dots = item.find("..");
    try {
      if (dots == std::string::npos) {
        ranks.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dots));
        const int hi = std::stoi(item.substr(dots + 2));
        for (int k = lo; k <= hi; ++k) ranks.push_back(k);
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("bad rank list item '" + item + "'");
    }
  }
  if (ranks.empty()) throw std::invalid_argument("empty rank list");
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] < 1) throw std::invalid_argument("ranks must be positive");
    if (i > 0 && ranks[i] <= ranks[i - 1])
      throw std::invalid_argument("ranks must be strictly ascending");
  }
  return ranks;
}

std::string format_double(double v, const char* fmt = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ParseError(path.string(), 0, "cannot open for writing");
  out << content;
  if (!out) throw ParseError(path.string(), 0, "write failed");
}

json read_meta(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return j;
}

// ---------------------------------------------------------------- generate

void write_instance_matrix(const fs::path& path, const Matrix& m, const std::string& format) {
  if (format == "binary")
    write_matrix_binary(path.string(), m);
  else
    write_matrix_csv(path.string(), m);
}

int cmd_generate(bool mog, bool planted, const std::vector<std::string>& tokens) {
  if (mog == planted)
    throw std::invalid_argument("generate needs exactly one of --mog or --planted");
  Settings s(tokens);
  const int n = static_cast<int>(s.integer("n", 0));
  const int d = static_cast<int>(s.integer("d", 0));
  const int k = static_cast<int>(s.integer("k", 1));
  const int r = static_cast<int>(s.integer("r", 1));
  const auto seed = static_cast<std::uint64_t>(s.integer("seed", 0));
  const std::string format = s.str("format", "csv");
  if (format != "csv" && format != "binary")
    throw std::invalid_argument("format must be csv or binary");
  const std::string ext = format == "binary" ? ".wlrm" : ".csv";
  const fs::path dir = s.str("out", ".");
  const double noise = s.real("noise", 0.0);
  s.finish();
  fs::create_directories(dir);

  json meta;
  meta["rng"] = kRngName;
  meta["format"] = format;
  meta["n"] = n;
  meta["d"] = d;
  meta["k"] = k;
  meta["r"] = r;
  meta["seed"] = seed;
  std::string dataset;

  if (mog) {
    const auto data = gen_mog({n, d, k, r, seed});
    dataset = "mog-n" + std::to_string(n) + "-d" + std::to_string(d) + "-k" + std::to_string(k) +
              "-r" + std::to_string(r) + "-seed" + std::to_string(seed);
    write_instance_matrix(dir / ("A" + ext), data.a, format);
    write_instance_matrix(dir / ("W" + ext), data.w, format);
    meta["generator"] = "mog";
    meta["weight_rank_bound"] = k * r;
    meta["labels"] = data.labels;
    meta["files"] = {{"a", "A" + ext}, {"w", "W" + ext}};
  } else {
    const auto data = gen_planted({n, d, k, r, noise, seed});
    dataset = "planted-n" + std::to_string(n) + "-d" + std::to_string(d) + "-k" +
              std::to_string(k) + "-r" + std::to_string(r) + "-noise" + format_double(noise, "%g") +
              "-seed" + std::to_string(seed);
    write_instance_matrix(dir / ("A" + ext), data.a, format);
    write_instance_matrix(dir / ("W" + ext), data.w.dense(), format);
    write_instance_matrix(dir / ("A_true" + ext), data.a_true.dense(), format);
    meta["generator"] = "planted";
    meta["noise_sigma"] = noise;
    meta["weight_rank_bound"] = r;
    meta["files"] = {{"a", "A" + ext}, {"w", "W" + ext}, {"a_true", "A_true" + ext}};
  }
  meta["dataset"] = dataset;
  write_text_file(dir / "meta.json", meta.dump(2) + "\n");
  std::printf("wrote %s under %s\n", dataset.c_str(), dir.string().c_str());
  return 0;
}

// --------------------------------------------------------------------- run

struct RunOptions {
  int iters = 25;
  int epochs = 100;
  double eps = 0.5;
  int sample_rows = 0;  // 0 means one draw per matrix row
};

struct ResultRow {
  std::string dataset;
  std::string solver;
  int rank = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double loss = 0.0;
  double seconds = 0.0;
  long long iterations = 0;
  long long params = 0;
};

Matrix read_instance_matrix(const fs::path& path) {
  if (path.extension() == ".wlrm") return read_matrix_binary(path.string());
  return read_matrix_csv(path.string());
}

struct Instance {
  std::string dataset;
  Matrix a;
  Matrix wmat;
  int wrank = 1;
  std::optional<json> meta;
};

Instance load_instance(Settings& s) {
  Instance inst;
  if (s.has("in")) {
    const fs::path dir = s.require("in");
    const json meta = read_meta(dir / "meta.json");
    inst.dataset = meta.value("dataset", dir.filename().string());
    const auto& files = meta.at("files");
    inst.a = read_instance_matrix(dir / files.at("a").get<std::string>());
    inst.wmat = read_instance_matrix(dir / files.at("w").get<std::string>());
    inst.wrank = meta.value("weight_rank_bound", 1);
    inst.meta = meta;
  } else if (s.has("a") && s.has("w")) {
    const fs::path apath = s.require("a");
    inst.a = read_instance_matrix(apath);
    inst.wmat = read_instance_matrix(s.require("w"));
    inst.wrank = static_cast<int>(
        s.integer("wrank", std::min(inst.a.rows(), inst.a.cols())));
    inst.dataset = s.str("dataset", apath.stem().string());
  } else {
    throw std::invalid_argument("run needs in=dir or a=file w=file");
  }
  if (inst.a.rows() != inst.wmat.rows() || inst.a.cols() != inst.wmat.cols())
    throw NumericalError("instance matrices have mismatched shapes");
  return inst;
}

ResultRow solve_one(const std::string& solver, const Matrix& a, const Weight& w, int k,
                    std::uint64_t seed, const RunOptions& opt) {
  const Index n = a.rows(), d = a.cols();
  const long long factored_params = static_cast<long long>(k) * (n + d);
  ResultRow row;
  row.solver = solver;
  row.rank = k;
  row.seed = seed;
  row.iterations = 1;
  row.params = factored_params;

  const auto start = std::chrono::steady_clock::now();
  if (solver == "svd_w") {
    const auto sol = svd_w(a, w, k);
    row.loss = weighted_loss(a, w, sol);
    row.params = sol.parameter_count();
  } else if (solver == "svd_w_randomized") {
    const auto sol = svd_w(a, w, k, SvdWMethod::randomized, opt.eps, seed);
    row.loss = weighted_loss(a, w, sol);
    row.params = sol.parameter_count();
  } else if (solver == "em") {
    const auto res = em_wlra(a, w, k, opt.iters);
    row.loss = res.trace.back();
    row.iterations = opt.iters;
  } else if (solver == "greedy") {
    const auto res = greedy_wlra(a, w, k);
    row.loss = res.trace.back();
    row.iterations = k;
  } else if (solver == "sample") {
    const int t = opt.sample_rows > 0 ? opt.sample_rows : static_cast<int>(n);
    const auto res = sample_wlra(a, w, t, seed);
    row.loss = weighted_loss(a, w, res.approx);
    row.params = static_cast<long long>(t) * (n + d);
  } else if (solver == "adam") {
    GdOptions gd;
    gd.epochs = opt.epochs;
    const auto res = factored_gd_wlra(a, w, k, gd, seed);
    row.loss = res.trace.back();
    row.iterations = opt.epochs;
  } else if (solver == "svd") {
    row.loss = weighted_loss(a, w, plain_svd_baseline(a, k));
  } else if (solver == "css") {
    const auto sol = css_wlra(a, w, k, opt.eps, seed);
    row.loss = weighted_loss(a, w, sol.reconstruction());
    row.params = sol.parameter_count();
  } else if (solver == "svd_w_then_em") {
    const auto res = svd_w_then_em(a, w, k, opt.iters);
    row.loss = res.loss;
    row.iterations = 1 + opt.iters;
    row.params = res.refined_won ? factored_params : res.base.parameter_count();
  } else {
    std::string names;
    for (const auto& name : kSolverNames) names += (names.empty() ? "" : ", ") + name;
    throw std::invalid_argument("unknown solver '" + solver + "'; valid solvers: " + names);
  }
  const auto stop = std::chrono::steady_clock::now();
  row.seconds = std::chrono::duration<double>(stop - start).count();
  return row;
}

Instance regenerate(const json& meta, std::uint64_t seed) {
  const std::string generator = meta.value("generator", "");
  Instance inst;
  if (generator == "planted") {
    const auto data =
        gen_planted({meta.at("n").get<int>(), meta.at("d").get<int>(), meta.at("k").get<int>(),
                     meta.at("r").get<int>(), meta.value("noise_sigma", 0.0), seed});
    inst.a = data.a;
    inst.wmat = data.w.dense();
  } else if (generator == "mog") {
    const auto data = gen_mog({meta.at("n").get<int>(), meta.at("d").get<int>(),
                               meta.at("k").get<int>(), meta.at("r").get<int>(), seed});
    inst.a = data.a;
    inst.wmat = data.w;
  } else {
    throw std::invalid_argument("instance-trials needs a dataset generated by this tool");
  }
  inst.dataset = meta.value("dataset", "regenerated");
  inst.wrank = meta.value("weight_rank_bound", 1);
  return inst;
}

int cmd_run(bool instance_trials, const std::vector<std::string>& tokens) {
  Settings s(tokens);
  Instance inst = load_instance(s);
  const std::vector<int> ranks = parse_ranks(s.str("ranks", "1..5"));
  const std::vector<std::string> solvers = split(s.require("solvers"), ',');
  const int trials = static_cast<int>(s.integer("trials", 1));
  const auto base_seed = static_cast<std::uint64_t>(s.integer("seed", 0));
  const fs::path out = s.str("out", "results.csv");
  RunOptions opt;
  opt.iters = static_cast<int>(s.integer("iters", opt.iters));
  opt.epochs = static_cast<int>(s.integer("epochs", opt.epochs));
  opt.eps = s.real("eps", opt.eps);
  opt.sample_rows = static_cast<int>(s.integer("t", 0));
  s.finish();

  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  for (const auto& solver : solvers)
    if (std::find(kSolverNames.begin(), kSolverNames.end(), solver) == kSolverNames.end()) {
      std::string names;
      for (const auto& name : kSolverNames) names += (names.empty() ? "" : ", ") + name;
      throw std::invalid_argument("unknown solver '" + solver + "'; valid solvers: " + names);
    }
  const int maxk = static_cast<int>(std::min(inst.a.rows(), inst.a.cols()));
  if (ranks.back() > maxk)
    throw std::invalid_argument("rank " + std::to_string(ranks.back()) +
                                " exceeds min(n, d) = " + std::to_string(maxk));
  if (instance_trials && !inst.meta)
    throw std::invalid_argument("instance-trials needs a dataset directory with meta.json");

  std::vector<ResultRow> rows;
  for (int trial = 0; trial < trials; ++trial) {
    const Instance* active = &inst;
    Instance regenerated;
    std::uint64_t seed = base_seed + static_cast<std::uint64_t>(trial);
    if (instance_trials) {
      const auto meta_seed = inst.meta->value("seed", std::uint64_t{0});
      seed = meta_seed + static_cast<std::uint64_t>(trial);
      regenerated = regenerate(*inst.meta, seed);
      active = &regenerated;
    }
    const Weight w(active->wmat, active->wrank);
    for (const auto& solver : solvers)
      for (int k : ranks) {
        ResultRow row = solve_one(solver, active->a, w,
                                  k, instance_trials ? base_seed : seed, opt);
        row.dataset = active->dataset;
        row.trial = trial;
        row.seed = seed;
        rows.push_back(std::move(row));
      }
  }
  std::sort(rows.begin(), rows.end(), [](const ResultRow& x, const ResultRow& y) {
    return std::tie(x.solver, x.rank, x.trial) < std::tie(y.solver, y.rank, y.trial);
  });

  std::ostringstream csv;
  csv << kResultsHeader << '\n';
  for (const auto& row : rows)
    csv << row.dataset << ',' << row.solver << ',' << row.rank << ',' << row.trial << ','
        << row.seed << ',' << format_double(row.loss) << ',' << format_double(row.seconds, "%.9g")
        << ',' << row.iterations << ',' << row.params << '\n';
  write_text_file(out, csv.str());
  std::printf("wrote %zu rows to %s\n", rows.size(), out.string().c_str());
  return 0;
}

// ------------------------------------------------------------------ report

struct ParsedResults {
  std::vector<ResultRow> rows;
};

ParsedResults read_results(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open");
  std::string line;
  long lineno = 0;
  ParsedResults out;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (line != kResultsHeader)
        throw ParseError(path.string(), 1,
                         std::string("header mismatch; expected '") + kResultsHeader + "'");
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 9)
      throw ParseError(path.string(), lineno,
                       "expected 9 fields, got " + std::to_string(fields.size()));
    try {
      ResultRow row;
      row.dataset = fields[0];
      row.solver = fields[1];
      row.rank = std::stoi(fields[2]);
      row.trial = std::stoi(fields[3]);
      row.seed = std::stoull(fields[4]);
      row.loss = std::stod(fields[5]);
      row.seconds = std::stod(fields[6]);
      row.iterations = std::stoll(fields[7]);
      row.params = std::stoll(fields[8]);
      out.rows.push_back(std::move(row));
    } catch (const std::exception&) {
      throw ParseError(path.string(), lineno, "malformed numeric field");
    }
  }
  if (out.rows.empty()) throw ParseError(path.string(), lineno, "no result rows");
  return out;
}

int cmd_report(const std::string& gnuplot_path, const std::vector<std::string>& tokens) {
  Settings s(tokens);
  const fs::path in = s.require("in");
  const std::string out = s.str("out");
  std::set<int> rank_filter;
  if (s.has("ranks"))
    for (int k : parse_ranks(s.str("ranks"))) rank_filter.insert(k);
  s.finish();
  if (!gnuplot_path.empty() && out.empty())
    throw std::invalid_argument("--gnuplot needs out=summary.csv to reference");

  const auto results = read_results(in);
  std::map<std::pair<std::string, int>, std::vector<const ResultRow*>> groups;
  for (const auto& row : results.rows) {
    if (!rank_filter.empty() && !rank_filter.count(row.rank)) continue;
    groups[{row.solver, row.rank}].push_back(&row);
  }
  if (groups.empty()) throw NumericalError("no rows left after the rank filter");

  std::printf("%-18s %6s %16s %14s %8s\n", "solver", "rank", "mean_loss", "mean_seconds",
              "trials");
  std::ostringstream csv;
  csv << "solver,rank,mean_loss,mean_seconds,trials\n";
  std::set<std::string> solver_names;
  for (const auto& [key, rows] : groups) {
    double loss = 0.0, seconds = 0.0;
    for (const ResultRow* row : rows) {
      loss += row->loss;
      seconds += row->seconds;
    }
    loss /= static_cast<double>(rows.size());
    seconds /= static_cast<double>(rows.size());
    std::printf("%-18s %6d %16.8g %14.6g %8zu\n", key.first.c_str(), key.second, loss, seconds,
                rows.size());
    csv << key.first << ',' << key.second << ',' << format_double(loss) << ','
        << format_double(seconds, "%.9g") << ',' << rows.size() << '\n';
    solver_names.insert(key.first);
  }
  if (!out.empty()) write_text_file(out, csv.str());
  if (!gnuplot_path.empty()) {
    std::string solver_list;
    for (const auto& name : solver_names)
      solver_list += (solver_list.empty() ? "" : " ") + name;
    std::ostringstream script;
    script << "set datafile separator \",\"\n"
           << "set xlabel \"rank\"\n"
           << "set ylabel \"mean loss\"\n"
           << "set logscale y\n"
           << "set key outside\n"
           << "solvers = \"" << solver_list << "\"\n"
           << "summary = \"" << out << "\"\n"
           << "plot for [i=1:words(solvers)] summary every ::1 using "
              "2:((strcol(1) eq word(solvers, i)) ? column(3) : NaN) "
              "with linespoints title word(solvers, i)\n";
    write_text_file(gnuplot_path, script.str());
  }
  return 0;
}

// --------------------------------------------------------------- comm_demo

long long comm_demo_bits(int n, int r, int s, int k, std::uint64_t seed, double eps,
                         bool* recovered) {
  const auto inst = build_lb_instance(n, r, s, k, seed);
  const Weight w(inst.w);
  const auto sol = css_wlra(inst.a, w, k, eps);
  const auto encoded = encode_css(inst.a, sol);
  if (recovered) {
    const auto weighted = svd_w(inst.a, w, k);
    try {
      const Matrix secret = recover_secret(weighted, inst);
      *recovered = (secret - inst.a_dense).cwiseAbs().maxCoeff() == 0.0;
    } catch (const RecoveryError&) {
      *recovered = false;
    }
  }
  return encoded.total_bits;
}

int cmd_comm_demo(const std::vector<std::string>& tokens) {
  Settings s(tokens);
  const int n = static_cast<int>(s.integer("n", 12));
  const int r = static_cast<int>(s.integer("r", 3));
  const int sparsity = static_cast<int>(s.integer("s", 2));
  const int k = static_cast<int>(s.integer("k", 2));
  const auto seed = static_cast<std::uint64_t>(s.integer("seed", 0));
  const double eps = s.real("eps", 1.0);
  const double clutter = s.real("clutter", 3.0);
  s.finish();

  std::printf("instance n=%d r=%d s=%d k=%d seed=%llu\n", n, r, sparsity, k,
              static_cast<unsigned long long>(seed));
  const long long reference = static_cast<long long>(sparsity) * r * k;
  bool recovered = false;
  const long long bits = comm_demo_bits(n, r, sparsity, k, seed, eps, &recovered);
  std::printf("svd_w secret recovery: %s\n", recovered ? "exact" : "FAILED");
  std::printf("encoded css solution: %lld bits (reference s*r*k = %lld)\n", bits, reference);

  if (2 * sparsity <= n / r) {
    const long long doubled = comm_demo_bits(n, r, 2 * sparsity, k, seed, eps, nullptr);
    std::printf("s doubled to %d: %lld bits, ratio %.3f\n", 2 * sparsity, doubled,
                static_cast<double>(doubled) / static_cast<double>(bits));
  }

  const auto inst = build_lb_instance(n, r, sparsity, k, seed);
  const Matrix cluttered = add_offsupport_noise(inst, clutter, seed + 1);
  const Matrix plain = plain_svd_baseline(cluttered, k).dense();
  try {
    const Matrix secret = recover_secret(plain, inst);
    std::printf("plain svd on off-support clutter: recovered %s\n",
                (secret - inst.a_dense).cwiseAbs().maxCoeff() == 0.0 ? "the exact secret"
                                                                     : "a WRONG secret");
  } catch (const RecoveryError& e) {
    std::printf("plain svd on off-support clutter: recovery failed (%s)\n", e.what());
  }
  return 0;
}

// ---------------------------------------------------------------- dispatch

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"weighted low rank approximation benchmark tool"};
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "write a synthetic instance to disk");
  bool mog = false, planted = false;
  std::vector<std::string> generate_kv;
  generate->add_flag("--mog", mog, "mixture-of-Gaussians instance");
  generate->add_flag("--planted", planted, "planted low-rank instance");
  generate->add_option("settings", generate_kv, "key=value settings (n, d, k, r, seed, noise, out, format)");

  auto* run = app.add_subcommand("run", "run a solver sweep and write a results CSV");
  bool instance_trials = false;
  std::vector<std::string> run_kv;
  run->add_flag("--instance-trials", instance_trials,
                "vary the instance seed per trial instead of the solver seed");
  run->add_option("settings", run_kv,
                  "key=value settings (in, a, w, wrank, dataset, solvers, ranks, trials, seed, "
                  "out, iters, epochs, eps, t)");

  auto* report = app.add_subcommand("report", "aggregate a results CSV");
  std::string gnuplot_path;
  std::vector<std::string> report_kv;
  report->add_option("--gnuplot", gnuplot_path, "also write a gnuplot script to this path");
  report->add_option("settings", report_kv, "key=value settings (in, out, ranks)");

  auto* comm_demo = app.add_subcommand("comm_demo", "bit accounting on the planted hard family");
  std::vector<std::string> comm_kv;
  comm_demo->add_option("settings", comm_kv, "key=value settings (n, r, s, k, seed, eps, clutter)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (generate->parsed()) return cmd_generate(mog, planted, generate_kv);
  if (run->parsed()) return cmd_run(instance_trials, run_kv);
  if (report->parsed()) return cmd_report(gnuplot_path, report_kv);
  return cmd_comm_demo(comm_kv);
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  try {
    return dispatch(args);
  } catch (const DegenerateInputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace wlra
