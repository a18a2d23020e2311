#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "mfe/cumulants.hpp"
#include "mfe/moments.hpp"
#include "mfe/opvalued.hpp"
#include "mfe/rmt.hpp"

namespace mfe::cli {

namespace {

using nlohmann::json;

// Argument errors raised after parsing; mapped to kExitUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string format = "json";
  std::string output;
  int threads = 0;

  std::vector<std::string> words;
  bool limit = false;
  int n = 0;
  std::vector<std::string> ratios;
  std::vector<int> dims;
  int N = 0;
  std::string field = "C";
  std::vector<double> times;

  int p = 1;
  std::vector<int> i_seq;
  std::vector<int> j_seq;

  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  int steps = kDefaultStepsPerUnit;
  std::string dump;

  bool check = false;
  double sigma = 4.0;
  double limit_tol = 0.25;

  std::vector<int> letters;
};

std::string format_double(double x) {
  std::ostringstream s;
  s << std::setprecision(15) << x;
  return s.str();
}

std::vector<OWord> parse_words(const std::vector<std::string>& texts) {
  if (texts.empty()) throw UsageError("at least one --word is required");
  std::vector<OWord> out;
  for (const auto& t : texts) {
    try {
      out.push_back(parse_oword(t));
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("unparsable word '") + t + "': " + e.what());
    }
  }
  return out;
}

int max_index(const std::vector<OWord>& words) {
  int m = 0;
  for (const auto& u : words)
    for (const auto& l : u) m = std::max({m, l.i + 1, l.j + 1});
  return m;
}

Field field_option(const Options& o) {
  try {
    return parse_field(o.field);
  } catch (const std::invalid_argument&) {
    throw UsageError("unknown field '" + o.field + "' (expected R, C or H)");
  }
}

std::vector<double> time_list(const Options& o) {
  if (o.times.empty()) throw UsageError("--t is required");
  for (double t : o.times)
    if (!(t >= 0) || !std::isfinite(t)) throw UsageError("times must be nonnegative");
  return o.times;
}

// Number of colours: --n, else the length of --dims / --ratios, else the
// largest index in the words.
int colour_count(const Options& o, const std::vector<OWord>& words) {
  int n = o.n;
  if (n == 0 && !o.dims.empty()) n = static_cast<int>(o.dims.size());
  if (n == 0 && !o.ratios.empty()) n = static_cast<int>(o.ratios.size());
  if (n == 0) n = std::max(1, max_index(words));
  if (n < 1) throw UsageError("--n must be positive");
  if (!o.dims.empty() && static_cast<int>(o.dims.size()) != n) throw UsageError("--dims has the wrong length");
  if (!o.ratios.empty() && static_cast<int>(o.ratios.size()) != n) throw UsageError("--ratios has the wrong length");
  if (max_index(words) > n) throw UsageError("word index exceeds the number of colours");
  return n;
}

std::vector<int> finite_dims(const Options& o, int n) {
  if (!o.dims.empty()) {
    for (int d : o.dims)
      if (d <= 0) throw UsageError("dims must be positive");
    if (o.N != 0) {
      int sum = 0;
      for (int d : o.dims) sum += d;
      if (sum != o.N) throw UsageError("--dims does not sum to --N");
    }
    return o.dims;
  }
  if (o.N <= 0) throw UsageError("--dims or --N is required");
  if (o.N % n != 0) throw UsageError("--N is not divisible by the number of colours");
  return std::vector<int>(static_cast<std::size_t>(n), o.N / n);
}

DimensionFunction limit_ratios(const Options& o, int n) {
  std::vector<Rational> r;
  if (!o.ratios.empty()) {
    for (const auto& s : o.ratios) {
      try {
        r.push_back(parse_rational(s));
      } catch (const std::invalid_argument&) {
        throw UsageError("unparsable ratio '" + s + "'");
      }
      if (r.back() <= 0) throw UsageError("ratios must be positive");
    }
  } else if (!o.dims.empty()) {
    for (int d : o.dims) {
      if (d <= 0) throw UsageError("dims must be positive");
      r.push_back(Rational(d));
    }
  } else {
    r.assign(static_cast<std::size_t>(n), Rational(1));
  }
  Rational total = 0;
  for (const auto& x : r) total += x;
  for (auto& x : r) {
    x /= total;
    x.canonicalize();
  }
  return DimensionFunction(std::move(r));
}

json ratio_json(const DimensionFunction& r) {
  json a = json::array();
  for (const auto& x : r.dims()) a.push_back(to_string(x));
  return a;
}

McConfig mc_config(const Options& o, Field field, std::vector<int> dims, std::vector<double> times) {
  if (o.samples == 0) throw UsageError("--samples must be positive");
  if (o.steps <= 0) throw UsageError("--steps must be positive");
  McConfig cfg;
  cfg.field = field;
  cfg.dims = std::move(dims);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  cfg.times = std::move(times);
  cfg.samples = o.samples;
  cfg.steps_per_unit = o.steps;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  return cfg;
}

std::size_t time_index(const std::vector<double>& times, double t) {
  return static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), t) - times.begin());
}

// One row of the comparison table; absent values are NaN.
struct Row {
  std::string statistic;
  double t = 0;
  double exact_d = std::nan("");
  double limit = std::nan("");
  double mc_mean = std::nan("");
  double mc_stderr = std::nan("");
};

void write_csv(std::ostream& out, const std::vector<Row>& rows) {
  auto cell = [](double x) { return std::isnan(x) ? std::string() : format_double(x); };
  out << "statistic,t,exact_d,limit,mc_mean,mc_stderr\n";
  for (const auto& r : rows)
    out << '"' << r.statistic << "\"," << format_double(r.t) << ',' << cell(r.exact_d) << ',' << cell(r.limit) << ','
        << cell(r.mc_mean) << ',' << cell(r.mc_stderr) << '\n';
}

json row_json(const Row& r) {
  json j;
  j["statistic"] = r.statistic;
  j["t"] = r.t;
  if (!std::isnan(r.exact_d)) j["exact_d"] = r.exact_d;
  if (!std::isnan(r.limit)) j["limit"] = r.limit;
  if (!std::isnan(r.mc_mean)) j["mc_mean"] = r.mc_mean;
  if (!std::isnan(r.mc_stderr)) j["mc_stderr"] = r.mc_stderr;
  return j;
}

json header(const std::string& command) {
  json j;
  j["schema"] = 1;
  j["command"] = command;
  return j;
}

void emit(std::ostream& out, const Options& o, const json& j, const std::vector<Row>& rows) {
  if (o.format == "csv") write_csv(out, rows);
  else out << j.dump(2) << '\n';
}

// ------------------------------------------------------------ subcommands

int cmd_moment(const Options& o, std::ostream& out) {
  const auto words = parse_words(o.words);
  const int n = colour_count(o, words);
  const auto times = o.limit && o.times.empty() ? std::vector<double>{} : time_list(o);
  json j = header("moment");
  std::vector<Row> rows;
  json results = json::array();
  for (const auto& u : words) {
    json r;
    r["word"] = oword_to_string(u);
    json values = json::array();
    if (o.limit) {
      const auto ratios = limit_ratios(o, n);
      const Field field = field_option(o);
      const MomentFunction m = moment_of_word_limit(u, ratios, field_class(field));
      r.update(to_json(m));
      r["expression"] = m.to_string();
      r["ratios"] = ratio_json(ratios);
      for (double t : times) {
        values.push_back({{"t", t}, {"value", m(t)}});
        rows.push_back({oword_to_string(u), t, std::nan(""), m(t), std::nan(""), std::nan("")});
      }
    } else {
      const Field field = field_option(o);
      const auto dims = finite_dims(o, n);
      r["field"] = field_name(field);
      r["dims"] = dims;
      for (double t : times) {
        const double v = moment_of_word_finite(u, t, field, dimension_function(dims));
        values.push_back({{"t", t}, {"value", v}});
        rows.push_back({oword_to_string(u), t, v, std::nan(""), std::nan(""), std::nan("")});
      }
    }
    r["values"] = values;
    results.push_back(r);
  }
  if (results.size() == 1) j.update(results.front());
  else j["results"] = results;
  emit(out, o, j, rows);
  return kExitOk;
}

int cmd_cumulant(const Options& o, std::ostream& out) {
  if (o.p < 1) throw UsageError("--p must be positive");
  const int n = o.n == 0 ? 1 : o.n;
  if (n < 1) throw UsageError("--n must be positive");
  Colourization col;
  auto seq = [&](const std::vector<int>& s, const char* name) {
    if (s.empty()) return std::vector<int>(static_cast<std::size_t>(o.p), 0);
    if (static_cast<int>(s.size()) != o.p) throw UsageError(std::string("--") + name + " must have length p");
    std::vector<int> r;
    for (int x : s) {
      if (x < 1 || x > n) throw UsageError(std::string("--") + name + " entries must lie in 1..n");
      r.push_back(x - 1);
    }
    return r;
  };
  col.i = seq(o.i_seq, "i");
  col.j = seq(o.j_seq, "j");
  const auto times = time_list(o);
  const MomentFunction closed = kappa_closed_form(o.p, n, col);
  const MomentFunction mobius = cumulant_of_generators(col, n);
  json j = header("cumulant");
  j["p"] = o.p;
  j["n"] = n;
  j["word"] = oword_to_string(col.word());
  j["closed_form"] = to_json(closed);
  j["closed_form"]["expression"] = closed.to_string();
  j["mobius"] = to_json(mobius);
  j["mobius"]["expression"] = mobius.to_string();
  j["agree"] = closed == mobius;
  json values = json::array();
  std::vector<Row> rows;
  for (double t : times) {
    values.push_back({{"t", t}, {"closed_form", closed(t)}, {"mobius", mobius(t)}});
    rows.push_back({"kappa " + oword_to_string(col.word()), t, std::nan(""), closed(t), std::nan(""), std::nan("")});
  }
  j["values"] = values;
  emit(out, o, j, rows);
  return closed == mobius ? kExitOk : kExitCheckFailed;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const auto words = parse_words(o.words);
  const int n = colour_count(o, words);
  const Field field = field_option(o);
  const auto dims = finite_dims(o, n);
  const auto times = time_list(o);
  McConfig cfg = mc_config(o, field, dims, times);
  std::unique_ptr<std::ofstream> dump;
  if (!o.dump.empty()) {
    dump = std::make_unique<std::ofstream>(o.dump);
    if (!*dump) throw UsageError("cannot open dump file " + o.dump);
    cfg.dump = dump.get();
  }
  const auto est = estimate_words(words, cfg);
  json j = header("simulate");
  j["field"] = field_name(field);
  j["dims"] = dims;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["steps_per_unit"] = cfg.steps_per_unit;
  json results = json::array();
  std::vector<Row> rows;
  for (std::size_t s = 0; s < words.size(); ++s)
    for (double t : times) {
      const auto& e = est[time_index(cfg.times, t) * words.size() + s];
      results.push_back({{"word", oword_to_string(words[s])}, {"t", t}, {"mean", e.mean}, {"stderr", e.stderr_}});
      rows.push_back({oword_to_string(words[s]), t, std::nan(""), std::nan(""), e.mean, e.stderr_});
    }
  j["results"] = results;
  emit(out, o, j, rows);
  return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
  const auto words = parse_words(o.words);
  const int n = colour_count(o, words);
  const Field field = field_option(o);
  const auto dims = finite_dims(o, n);
  const auto times = time_list(o);
  const auto ratios = limit_ratios(o, n);
  const McConfig cfg = mc_config(o, field, dims, times);
  const auto est = estimate_words(words, cfg);
  json j = header("compare");
  j["field"] = field_name(field);
  j["dims"] = dims;
  j["ratios"] = ratio_json(ratios);
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["sigma"] = o.sigma;
  j["limit_tol"] = o.limit_tol;
  json results = json::array();
  std::vector<Row> rows;
  bool ok = true;
  for (std::size_t s = 0; s < words.size(); ++s) {
    const MomentFunction lim = moment_of_word_limit(words[s], ratios, field_class(field));
    for (double t : times) {
      Row r{oword_to_string(words[s]), t};
      r.exact_d = moment_of_word_finite(words[s], t, field, dimension_function(dims));
      r.limit = lim(t);
      const auto& e = est[time_index(cfg.times, t) * words.size() + s];
      r.mc_mean = e.mean;
      r.mc_stderr = e.stderr_;
      const double mc_delta = r.mc_mean - r.exact_d;
      const double limit_delta = r.exact_d - r.limit;
      const bool mc_ok = e.stderr_ > 0 ? std::abs(mc_delta) <= o.sigma * e.stderr_ : std::abs(mc_delta) <= 1e-9;
      const bool limit_ok = std::abs(limit_delta) <= o.limit_tol;
      ok = ok && mc_ok && limit_ok;
      json x = row_json(r);
      x["delta_mc"] = mc_delta;
      x["delta_limit"] = limit_delta;
      x["pass"] = mc_ok && limit_ok;
      results.push_back(x);
      rows.push_back(r);
    }
  }
  j["results"] = results;
  j["pass"] = ok;
  emit(out, o, j, rows);
  return o.check && !ok ? kExitCheckFailed : kExitOk;
}

int cmd_amalgamated(const Options& o, std::ostream& out) {
  const auto words = parse_words(o.words);
  if (words.size() != 1) throw UsageError("amalgamated takes exactly one --word");
  const OWord& u = words.front();
  const int k = static_cast<int>(u.size());
  const int n = colour_count(o, words);
  const Field field = field_option(o);
  const FieldClass fc = field_class(field);
  const auto ratios = limit_ratios(o, n);
  const auto times = time_list(o);
  std::vector<int> letters(static_cast<std::size_t>(k), 0);
  if (!o.letters.empty()) {
    if (static_cast<int>(o.letters.size()) != k) throw UsageError("--letters must have one entry per generator");
    for (int m = 0; m < k; ++m) {
      if (o.letters[m] < 1) throw UsageError("letters are 1-based");
      letters[m] = o.letters[m] - 1;
    }
  }
  std::vector<int> i, jj;
  std::vector<bool> star;
  for (const auto& l : u) {
    i.push_back(l.i);
    jj.push_back(l.j);
    star.push_back(l.star);
  }
  const BasisIndex seed = cumulant_seed(i, jj, star, letters, fc);
  json j = header("amalgamated");
  j["word"] = oword_to_string(u);
  std::vector<int> letters_text;
  for (int l : letters) letters_text.push_back(l + 1);
  j["letters"] = letters_text;
  j["ratios"] = ratio_json(ratios);
  json coeffs = json::array();
  std::vector<Row> rows;
  MomentFunction sum;
  for (const auto& beta : enumerate_nc(k)) {
    const MomentFunction c = limit_cumulant_coefficient(beta, seed, ratios, fc);
    sum += c;
    json x;
    x["beta"] = beta.to_string();
    x["coefficient"] = to_json(c);
    x["expression"] = c.to_string();
    json values = json::array();
    for (double t : times) {
      values.push_back({{"t", t}, {"value", c(t)}});
      rows.push_back({"c" + beta.to_string(), t, std::nan(""), c(t), std::nan(""), std::nan("")});
    }
    x["values"] = values;
    coeffs.push_back(x);
  }
  j["limit_coefficients"] = coeffs;
  j["sum"] = to_json(sum);
  j["sum"]["expression"] = sum.to_string();
  if (!o.dims.empty() || o.N != 0) {
    const auto dims = finite_dims(o, n);
    McConfig cfg = mc_config(o, field, dims, times);
    std::vector<AmalgamatedArgument> args;
    for (int m = 0; m < k; ++m) args.push_back({letters[m], u[m].star, u[m].i, u[m].j});
    const auto est = estimate_amalgamated(args, cfg);
    json mc = json::array();
    for (const auto& e : est) {
      json x;
      x["pi"] = e.pi.to_string();
      x["t"] = e.t;
      json ev = json::array(), cv = json::array();
      for (const auto& v : e.e_pi) ev.push_back({{"mean", v.mean}, {"stderr", v.stderr_}});
      for (const auto& v : e.c_pi) cv.push_back({{"mean", v.mean}, {"stderr", v.stderr_}});
      x["e_pi"] = ev;
      x["c_pi"] = cv;
      mc.push_back(x);
      const int colour = u.front().i;
      rows.push_back({"c" + e.pi.to_string() + "@p" + std::to_string(colour + 1), e.t, std::nan(""), std::nan(""),
                      e.c_pi[colour].mean, e.c_pi[colour].stderr_});
    }
    j["dims"] = dims;
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j["monte_carlo"] = mc;
  }
  emit(out, o, j, rows);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Master-field statistics of block extractions of unitary Brownian motions", "mfe_cli"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("-o,--output", o.output, "Write results to this file");
  app.add_option("--threads", o.threads, "Worker threads (0: MFE_THREADS or hardware)");

  auto add_word = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--word", o.words, "Word such as \"u12 u21*\" (repeatable)");
    if (required) opt->required();
  };
  auto add_dims = [&](CLI::App* c) {
    c->add_option("--n", o.n, "Number of colours");
    c->add_option("--dims", o.dims, "Block sizes")->delimiter(',');
    c->add_option("--N", o.N, "Total dimension, split evenly");
    c->add_option("--ratios", o.ratios, "Block ratios for the limit")->delimiter(',');
    c->add_option("--field", o.field, "R, C or H");
  };
  auto add_times = [&](CLI::App* c) { c->add_option("--t", o.times, "Times")->delimiter(','); };
  auto add_mc = [&](CLI::App* c) {
    c->add_option("--samples", o.samples, "Monte-Carlo samples");
    c->add_option("--seed", o.seed, "Base seed");
    c->add_option("--steps", o.steps, "Euler steps per unit time");
  };

  auto* moment = app.add_subcommand("moment", "Exact finite-d or limit moments of words");
  add_word(moment, true);
  add_dims(moment);
  add_times(moment);
  moment->add_flag("--limit", o.limit, "Large-dimension limit in closed form");

  auto* cumulant = app.add_subcommand("cumulant", "Closed-form free cumulants with a Möbius cross-check");
  cumulant->add_option("--p", o.p, "Order")->required();
  cumulant->add_option("--n", o.n, "Number of colours");
  cumulant->add_option("--i", o.i_seq, "Row colours (1-based)")->delimiter(',');
  cumulant->add_option("--j", o.j_seq, "Column colours (1-based)")->delimiter(',');
  add_times(cumulant);

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo estimates with standard errors");
  add_word(simulate, true);
  add_dims(simulate);
  add_times(simulate);
  add_mc(simulate);
  simulate->add_option("--dump", o.dump, "Per-sample CSV dump");

  auto* compare = app.add_subcommand("compare", "Exact finite-d, limit and Monte-Carlo table");
  add_word(compare, true);
  add_dims(compare);
  add_times(compare);
  add_mc(compare);
  compare->add_flag("--check", o.check, "Exit 1 if a tolerance is violated");
  compare->add_option("--sigma", o.sigma, "Allowed standard errors for Monte-Carlo");
  compare->add_option("--limit-tol", o.limit_tol, "Allowed |exact_d - limit|");

  auto* amalgamated = app.add_subcommand("amalgamated", "Limit coefficients c_beta and Monte-Carlo E_pi, c_pi");
  add_word(amalgamated, true);
  add_dims(amalgamated);
  add_times(amalgamated);
  add_mc(amalgamated);
  amalgamated->add_option("--letters", o.letters, "Independent process of each generator (1-based)")->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!o.output.empty()) {
    file.open(o.output);
    if (!file) {
      err << "error: cannot open " << o.output << '\n';
      return kExitUsage;
    }
    sink = &file;
  }
  try {
    if (*moment) return cmd_moment(o, *sink);
    if (*cumulant) return cmd_cumulant(o, *sink);
    if (*simulate) return cmd_simulate(o, *sink);
    if (*compare) return cmd_compare(o, *sink);
    if (*amalgamated) return cmd_amalgamated(o, *sink);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  err << "error: unknown subcommand\n";
  return kExitUsage;
}

}  // namespace mfe::cli
