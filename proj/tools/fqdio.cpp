#include "CLI11.hpp"
#include "json.hpp"

#include "fqdio/approx.hpp"
#include "fqdio/dimension.hpp"
#include "fqdio/errors.hpp"
#include "fqdio/game.hpp"
#include "fqdio/geom.hpp"
#include "fqdio/white_strategy.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace fqdio;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string field = "2", format = "json";
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool no_timestamp = false;
  std::uint64_t budget = kDefaultSearchBudget;
};

json mag(const Magnitude& m) { return m.is_zero() ? json(nullptr) : json(m.exp); }

json polys(const std::vector<Poly>& q) {
  json a = json::array();
  for (const auto& p : q) a.push_back(p.str());
  return a;
}

json witness_json(const ApproxWitness& w) {
  return {{"q", polys(w.q)}, {"height_exp", mag(w.height)}, {"dist_exp", mag(w.dist)}, {"score_exp", mag(w.score)}};
}

json matrix_json(const SeriesMatrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) r.push_back(format_series(a(i, j)));
    rows.push_back(r);
  }
  return rows;
}

SeriesMatrix read_matrix(const std::vector<std::string>& entries, std::size_t rows, std::size_t cols,
                         const FieldRef& f, long precision) {
  if (entries.size() != rows * cols)
    throw UsageError("expected " + std::to_string(rows * cols) + " --a entries (row-major), got " +
                     std::to_string(entries.size()));
  SeriesMatrix a(f, rows, cols);
  for (std::size_t e = 0; e < entries.size(); ++e) {
    auto x = parse_series(entries[e], f);
    if (precision > 0 && !x.is_zero()) x = x.truncate(-precision);
    a(e / cols, e % cols) = x;
  }
  return a;
}

Magnitude parse_magnitude(const std::string& s) {
  if (s == "0") return Magnitude::zero_value();
  if (s.rfind("k^", 0) != 0) throw UsageError("magnitude must be 0 or k^e, got '" + s + "'");
  try {
    return Magnitude::power(std::stol(s.substr(2)));
  } catch (const std::exception&) {
    throw UsageError("bad exponent in '" + s + "'");
  }
}

std::string timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json echo_options(const CLI::App* app) {
  json cfg = json::object();
  for (const auto* opt : app->get_options()) {
    std::string name = opt->get_name(false, true);
    if (name.empty() || name == "--help" || name == "-h") continue;
    name = opt->get_single_name();
    auto res = opt->results();
    if (res.empty()) {
      if (!opt->get_default_str().empty()) cfg[name] = opt->get_default_str();
      continue;
    }
    if (opt->get_expected_max() > 1 || res.size() > 1)
      cfg[name] = res;
    else if (opt->get_type_size() == 0)
      cfg[name] = true;
    else
      cfg[name] = res.front();
  }
  return cfg;
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

std::string csv_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void emit(const Common& c, const std::string& command, const json& config, const json& result) {
  json env;
  env["command"] = command;
  env["seed"] = c.seed;
  env["config"] = config;
  if (!c.no_timestamp) env["timestamp"] = timestamp();
  env["result"] = result;
  if (c.format == "json") {
    std::cout << env.dump(2) << "\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> meta;
  json head = env;
  head.erase("result");
  flatten(head, "", meta);
  if (c.format == "csv") {
    for (const auto& [k, v] : meta) std::cout << "# " << k << " = " << v << "\n";
    if (result.contains("rows") && result["rows"].is_array() && !result["rows"].empty()) {
      const json& rows = result["rows"];
      std::string line;
      for (auto it = rows.front().begin(); it != rows.front().end(); ++it) line += (line.empty() ? "" : ",") + it.key();
      std::cout << line << "\n";
      for (const auto& r : rows) {
        line.clear();
        bool first = true;
        for (auto it = r.begin(); it != r.end(); ++it) {
          line += (first ? "" : ",") + csv_cell(it.value());
          first = false;
        }
        std::cout << line << "\n";
      }
      return;
    }
    std::vector<std::pair<std::string, std::string>> flat;
    flatten(result, "", flat);
    std::cout << "key,value\n";
    for (const auto& [k, v] : flat) std::cout << csv_cell(k) << "," << csv_cell(v) << "\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> flat;
  flatten(env, "", flat);
  for (const auto& [k, v] : flat) std::cout << k << ": " << v << "\n";
}

StrategyConfig strategy_config(std::size_t m, std::size_t n, long r, unsigned k) {
  StrategyConfig cfg;
  cfg.m = m;
  cfg.n = n;
  cfg.k = k;
  cfg.r_exp = r;
  return cfg;
}

std::unique_ptr<Strategy> make_strategy(const std::string& name, Player side, const StrategyConfig& cfg,
                                        std::uint64_t seed) {
  bool white = side == Player::White;
  if (name == "white-avoid" || name == "white-literal") {
    if (!white) throw UsageError(name + " plays White only");
    StrategyConfig c = cfg;
    c.mode = name == "white-avoid" ? WhiteMode::Avoidance : WhiteMode::Literal;
    return std::make_unique<WhiteStrategy>(c);
  }
  if (name == "shrink") return std::make_unique<ShrinkInPlace>();
  if (white) throw UsageError("unknown White strategy '" + name + "'");
  if (name == "black-random") return std::make_unique<BlackRandom>(seed);
  if (name == "black-greedy") return std::make_unique<BlackGreedy>();
  if (name == "black-stdin") return std::make_unique<StreamStrategy>(std::cin, &std::cerr);
  throw UsageError("unknown Black strategy '" + name + "'");
}

json diagnostic(const std::string& kind, const std::exception& e) {
  return {{"error", kind}, {"message", e.what()}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diophantine approximation over F_q((1/X)): series, continued fractions, badness, "
               "geometry of numbers, Schmidt games and dimension bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--field", c.field, "field: p or p^r[:c_{r-1},...,c_0]")->capture_default_str();
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}))->capture_default_str();
  app.add_option("--seed", c.seed, "seed for randomized commands")->capture_default_str();
  app.add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--budget", c.budget, "enumeration budget")->capture_default_str();
  app.add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp field");
  app.set_config("--config", "", "key = value file with the same keys as the flags");

  std::function<json(const FieldRef&)> run;
  CLI::App* active = nullptr;
  auto sub = [&](CLI::App* s) {
    s->callback([&, s] { active = s; });
    return s;
  };

  // series
  std::string x_text;
  long precision = 0;
  int ndigits = 0;
  auto* series = sub(app.add_subcommand("series", "parse, evaluate and measure a series"));
  series->add_option("--x", x_text, "series expression")->required();
  series->add_option("--precision", precision, "forget digits below X^-P");
  series->add_option("--digits", ndigits, "list this many coefficients from the leading one");

  // cf
  int terms = 8;
  auto* cf = sub(app.add_subcommand("cf", "continued fraction expansion"));
  cf->add_option("--x", x_text, "series expression")->required();
  cf->add_option("--terms", terms, "maximum partial quotients (a_0 included)")->capture_default_str();
  cf->add_option("--precision", precision, "forget digits below X^-P");

  // matrix-valued inputs
  std::vector<std::string> entries;
  std::size_t m = 1, n = 1, d = 2;
  long cap = 3, t_exp = 2, known_below = LONG_MIN, r_exp = 2, level = 0;
  std::vector<long> bounds;
  int degree_bound = -1;
  auto add_matrix = [&](CLI::App* s) {
    s->add_option("--a", entries, "matrix entries, row-major")->required();
    s->add_option("--m", m, "rows")->capture_default_str();
    s->add_option("--n", n, "columns")->capture_default_str();
    s->add_option("--precision", precision, "forget digits below X^-P");
  };
  auto* badness = sub(app.add_subcommand("badness", "min ||q||^m <qA>^n over ||q|| <= k^cap"));
  add_matrix(badness);
  badness->add_option("--cap", cap, "height cap exponent")->capture_default_str();
  badness->add_option("--known-below", known_below, "treat entries as known only down to X^e");

  auto* dirichlet = sub(app.add_subcommand("dirichlet", "Dirichlet witness with ||q|| <= k^t"));
  add_matrix(dirichlet);
  dirichlet->add_option("--t", t_exp, "height exponent")->capture_default_str();

  auto add_body = [&](CLI::App* s) {
    s->add_option("--a", entries, "d x d matrix entries, row-major")->required();
    s->add_option("--d", d, "dimension")->capture_default_str();
    s->add_option("--bounds", bounds, "bound exponents c_j = k^e_j (default all 0)")->delimiter(',');
  };
  auto* sucmin = sub(app.add_subcommand("sucmin", "successive minima of P_A"));
  add_body(sucmin);
  sucmin->add_option("--degree-bound", degree_bound, "search bound (default: certified bound)");
  auto* measure = sub(app.add_subcommand("measure", "Haar measure of P_A"));
  add_body(measure);
  auto* polar = sub(app.add_subcommand("polar", "polar body of P_A"));
  add_body(polar);

  auto* duality = sub(app.add_subcommand("duality", "lambda_m sigma_{n+1} = 1 on the structured pair"));
  duality->add_option("--a", entries, "m x n matrix C, row-major")->required();
  duality->add_option("--m", m, "rows")->capture_default_str();
  duality->add_option("--n", n, "columns")->capture_default_str();
  duality->add_option("--r", r_exp, "R = k^r")->capture_default_str();
  duality->add_option("--level", level, "level i")->capture_default_str();
  duality->add_option("--degree-bound", degree_bound, "search bound (default: certified bound)");

  // game
  std::string white_name = "white-avoid", black_name = "black-random", out_path;
  std::string alpha_text = "1/4", beta_text = "1/2", rho1_text = "1";
  std::size_t rounds = 24;
  auto* game = app.add_subcommand("game", "Schmidt games");
  game->require_subcommand(1);
  auto* game_run = sub(game->add_subcommand("run", "play a game and write its JSONL transcript"));
  game_run->add_option("--white", white_name, "white-avoid | white-literal | shrink")->capture_default_str();
  game_run->add_option("--black", black_name, "black-random | black-greedy | black-stdin | shrink")
      ->capture_default_str();
  game_run->add_option("--alpha", alpha_text, "White's ratio")->capture_default_str();
  game_run->add_option("--beta", beta_text, "Black's ratio")->capture_default_str();
  game_run->add_option("--rounds", rounds, "moves after B_1")->capture_default_str();
  game_run->add_option("--rho1", rho1_text, "radius of B_1")->capture_default_str();
  game_run->add_option("--m", m, "rows")->capture_default_str();
  game_run->add_option("--n", n, "columns")->capture_default_str();
  game_run->add_option("--r", r_exp, "R = k^r for White's schedule")->capture_default_str();
  game_run->add_option("--out", out_path, "transcript file (default: transcript on stdout)");

  // certify
  std::string transcript_path = "-";
  long cert_cap = 4;
  long cert_precision = 0;
  std::optional<long> cert_r;
  auto* certify = sub(app.add_subcommand("certify", "certify the limit point of a transcript as badly approximable"));
  certify->add_option("--transcript", transcript_path, "JSONL transcript, - for stdin")->capture_default_str();
  certify->add_option("--cap", cert_cap, "height cap exponent")->capture_default_str();
  certify->add_option("--r", cert_r, "R = k^r (default: transcript header, else 2)");
  certify->add_option("--precision", cert_precision, "limit point digits (default: all decided)");

  // dim
  std::optional<long> j_from, j_to;
  std::string K_text = "0";
  long box_t = 8;
  bool list = false;
  auto* dim = app.add_subcommand("dim", "Hausdorff dimension tools");
  dim->require_subcommand(1);
  auto* dim_bound = sub(dim->add_subcommand("bound", "dimension lower bound for (alpha, beta)-winning sets"));
  dim_bound->add_option("--alpha", alpha_text, "alpha")->capture_default_str();
  dim_bound->add_option("--beta", beta_text, "beta")->capture_default_str();
  dim_bound->add_option("--m", m, "rows")->capture_default_str();
  dim_bound->add_option("--n", n, "columns")->capture_default_str();
  dim_bound->add_option("--j-from", j_from, "table over beta = k^-j from this j");
  dim_bound->add_option("--j-to", j_to, "table over beta = k^-j up to this j");
  auto* dim_pack = sub(dim->add_subcommand("pack", "packing counts N(beta)"));
  dim_pack->add_option("--beta", beta_text, "beta")->capture_default_str();
  dim_pack->add_option("--m", m, "rows")->capture_default_str();
  dim_pack->add_option("--n", n, "columns")->capture_default_str();
  dim_pack->add_flag("--list", list, "list the packing balls");
  auto* dim_box = sub(dim->add_subcommand("boxcount", "survival counts of badly approximable cells"));
  dim_box->add_option("--K", K_text, "threshold: 0 or k^e")->capture_default_str();
  dim_box->add_option("--cap", cap, "height cap exponent")->capture_default_str();
  dim_box->add_option("--t", box_t, "finest resolution")->capture_default_str();
  dim_box->add_option("--m", m, "rows")->capture_default_str();
  dim_box->add_option("--n", n, "columns")->capture_default_str();

  // calibrate
  std::size_t samples = 1000, check_samples = 1000;
  auto* calib = sub(app.add_subcommand("calibrate", "empirical K4, K5, K7 and inequality checks"));
  calib->add_option("--m", m, "rows")->capture_default_str();
  calib->add_option("--n", n, "columns")->capture_default_str();
  calib->add_option("--r", r_exp, "R = k^r")->capture_default_str();
  calib->add_option("--alpha", alpha_text, "alpha")->capture_default_str();
  calib->add_option("--beta", beta_text, "beta")->capture_default_str();
  calib->add_option("--samples", samples, "calibration samples")->capture_default_str();
  calib->add_option("--check", check_samples, "inequality-check samples with the calibrated constants")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  int exit_code = 0;
  try {
    FieldRef f = Field::parse(c.field);
    const unsigned k = f->k();
    json result;
    std::string command = active->get_name();
    if (active->get_parent() != &app) command = active->get_parent()->get_name() + " " + command;

    if (active == series) {
      auto x = parse_series(x_text, f);
      if (precision > 0 && !x.is_zero()) x = x.truncate(-precision);
      result["value"] = format_series(x);
      result["exact"] = x.is_exact();
      result["known_below"] = x.is_exact() ? json(nullptr) : json(x.known_below());
      result["norm_exp"] = mag(x.norm());
      result["lead_exp"] = x.is_zero() ? json(nullptr) : json(x.lead_exp());
      result["polynomial_part"] = x.polynomial_part().str();
      result["frac_norm_exp"] = mag(x.frac_norm());
      if (ndigits > 0 && !x.is_zero()) {
        long hi = x.lead_exp(), lo = hi - ndigits + 1;
        if (!x.is_exact()) lo = std::max(lo, x.known_below());
        json dg = json::array();
        for (auto e : x.digits(hi, lo)) dg.push_back(f->format(e));
        result["digits_from_exp"] = hi;
        result["digits"] = dg;
      }
    } else if (active == cf) {
      auto x = parse_series(x_text, f);
      if (precision > 0 && !x.is_zero()) x = x.truncate(-precision);
      auto e = cf_expand(x, terms);
      json a = json::array();
      for (const auto& p : e.a) a.push_back(p.str());
      result["partial_quotients"] = a;
      result["terminated"] = e.terminated;
      result["exact"] = x.is_exact();
      json conv = json::array();
      for (const auto& cv : cf_convergents(e)) conv.push_back({{"p", cv.p.str()}, {"q", cv.q.str()}});
      result["convergents"] = conv;
      int maxdeg = 0;
      for (std::size_t i = 1; i < e.a.size(); ++i) maxdeg = std::max(maxdeg, e.a[i].degree());
      result["max_partial_quotient_degree"] = maxdeg;
    } else if (active == badness) {
      auto a = read_matrix(entries, m, n, f, precision);
      auto b = badness_constant(a, cap, c.budget, known_below);
      result["constant_exp"] = mag(b.constant);
      result["witness"] = witness_json(b.witness);
      result["enumerated"] = b.enumerated;
    } else if (active == dirichlet) {
      auto a = read_matrix(entries, m, n, f, precision);
      auto w = dirichlet_witness(a, t_exp);
      result["guaranteed_dist_exp"] = -dirichlet_exponent(m, n, t_exp);
      result["witness"] = witness_json(w);
    } else if (active == sucmin || active == measure || active == polar) {
      auto a = read_matrix(entries, d, d, f, 0);
      if (bounds.empty()) bounds.assign(d, 0);
      if (bounds.size() != d) throw UsageError("--bounds needs " + std::to_string(d) + " exponents");
      Parallelepiped p(a, bounds);
      result["measure_exp"] = p.measure_exp();
      if (active == sucmin) {
        auto s = degree_bound >= 0 ? successive_minima(p, degree_bound) : successive_minima(p);
        long sum = p.measure_exp();
        json w = json::array();
        for (std::size_t i = 0; i < s.witnesses.size(); ++i) {
          sum += s.lambda_exps[i];
          w.push_back(polys(s.witnesses[i]));
        }
        result["lambda_exps"] = s.lambda_exps;
        result["witnesses"] = w;
        result["degree_bound"] = s.degree_bound;
        result["product_exp"] = sum;
      } else if (active == polar) {
        auto q = p.polar();
        result["polar_matrix"] = matrix_json(q.matrix());
        result["polar_bounds"] = q.bounds();
        result["polar_measure_exp"] = q.measure_exp();
      }
    } else if (active == duality) {
      auto a = read_matrix(entries, m, n, f, 0);
      auto rep = check_duality(structured_body(a, r_exp, level), m, n, degree_bound);
      result["lambda_exps"] = rep.lambda.lambda_exps;
      result["sigma_exps"] = rep.sigma.lambda_exps;
      result["product_exps"] = rep.products;
      result["holds"] = rep.holds;
    } else if (active == game_run) {
      GameParams params(parse_rational(alpha_text), parse_rational(beta_text), k);
      auto cfg = strategy_config(m, n, r_exp, k);
      auto white = make_strategy(white_name, Player::White, cfg, c.seed);
      auto black = make_strategy(black_name, Player::Black, cfg, c.seed);
      auto t = play(*white, *black, {SeriesMatrix(f, m, n), parse_rational(rho1_text)}, params,
                    StopRule{std::nullopt, rounds});
      json head = {{"command", "game run"}, {"seed", c.seed}, {"config", echo_options(active)},
                   {"white", white_name}, {"black", black_name}, {"r", r_exp}};
      if (!c.no_timestamp) head["timestamp"] = timestamp();
      std::string jsonl = transcript_to_jsonl(t, head.dump());
      if (out_path.empty()) {
        std::cout << jsonl;
        return 0;
      }
      std::ofstream out(out_path);
      if (!out) throw UsageError("cannot write " + out_path);
      out << jsonl;
      result["transcript"] = out_path;
      result["moves"] = t.moves.size();
      result["final_radius"] = to_string(t.last().radius);
      result["final_radius_exp"] = t.last().effective_exp();
      result["forfeit"] = t.forfeit ? json(player_name(t.forfeit->first)) : json(nullptr);
      if (auto* w = dynamic_cast<WhiteStrategy*>(white.get())) result["white_fallbacks"] = w->fallbacks();
    } else if (active == certify) {
      std::ifstream file;
      std::istream* in = &std::cin;
      std::string raw;
      if (transcript_path != "-") {
        file.open(transcript_path);
        if (!file) throw UsageError("cannot read " + transcript_path);
        in = &file;
      }
      std::stringstream buf;
      buf << in->rdbuf();
      raw = buf.str();
      std::istringstream again(raw);
      auto t = transcript_from_jsonl(again);
      long r = 2;
      {
        std::istringstream first(raw);
        std::string line;
        std::getline(first, line);
        auto h = json::parse(line);
        if (h.contains("r")) r = h["r"].get<long>();
      }
      if (cert_r) r = *cert_r;
      std::size_t last = t.moves.size();
      while (last > 0 && !t.moves[last - 1].legal) --last;
      long prec = cert_precision > 0 ? cert_precision : -t.moves[last - 1].ball.effective_exp() - 1;
      auto lp = limit_point(t, prec);
      auto cfg = strategy_config(t.m, t.n, r, t.field->k());
      result["replay_first_illegal"] = replay_check(t);
      result["precision"] = prec;
      result["limit_point"] = matrix_json(lp.center);
      auto cert = certify_bad(lp.center, cfg, cert_cap, lp.known_below());
      result["K_exp"] = cert.K_exp;
      result["cap_exp"] = cert.cap_exp;
      result["min_margin_exp"] = cert.min_margin_exp;
      result["witnesses_checked"] = cert.witnesses_checked;
      result["worst"] = witness_json(cert.worst);
    } else if (active == dim_bound) {
      auto alpha = parse_rational(alpha_text);
      json rows = json::array();
      auto row = [&](const Rational& beta) {
        auto b = dim_lower_bound(alpha, beta, m, n, k);
        auto pc = packing_count(beta, m, n, k);
        json r;
        r["beta"] = to_string(beta);
        long a = 0, e = 0;
        bool powers = is_k_power(alpha, k, &a) && is_k_power(beta, k, &e);
        r["a"] = powers ? json(-a) : json(nullptr);
        r["j"] = powers ? json(-e) : json(nullptr);
        r["log_count_exp"] = pc.max_count_exp;
        r["unreduced"] = powers ? json(std::to_string(pc.max_count_exp) + "/" + std::to_string(-a - e)) : json(nullptr);
        r["exact"] = b.exact ? json(to_string(*b.exact)) : json(nullptr);
        r["value"] = b.value;
        rows.push_back(r);
      };
      if (j_from || j_to) {
        if (!j_from || !j_to || *j_from < 1 || *j_to < *j_from) throw UsageError("--j-from and --j-to need 1 <= from <= to");
        for (long j = *j_from; j <= *j_to; ++j) row(k_power(k, -j));
      } else {
        row(parse_rational(beta_text));
      }
      result["rows"] = rows;
    } else if (active == dim_pack) {
      auto beta = parse_rational(beta_text);
      auto pc = packing_count(beta, m, n, k);
      result["beta"] = to_string(beta);
      result["i"] = pc.i;
      result["coarse_count_exp"] = pc.coarse_count_exp;
      result["coarse_count"] = to_string(pc.coarse_count);
      result["max_count_exp"] = pc.max_count_exp;
      result["max_count"] = pc.max_count.str();
      if (list) {
        json balls = json::array();
        for (const auto& b : packing_centers(beta, m, n, f))
          balls.push_back({{"center", matrix_json(b.center)}, {"radius", to_string(b.radius)}});
        result["balls"] = balls;
      }
    } else if (active == dim_box) {
      auto rows = box_count_bad(parse_magnitude(K_text), cap, box_t, m, n, f, c.threads, c.budget);
      json out = json::array();
      for (const auto& r : rows) {
        json j;
        j["resolution"] = r.resolution;
        j["cells_total"] = r.cells_total.str();
        j["cells_surviving"] = r.cells_surviving.str();
        j["empirical_dim"] = r.empirical_dim;
        out.push_back(j);
      }
      result["rows"] = out;
    } else if (active == calib) {
      GameParams params(parse_rational(alpha_text), parse_rational(beta_text), k);
      auto cfg = strategy_config(m, n, r_exp, k);
      auto cal = calibrate(cfg, f, samples, c.seed);
      cfg.K4 = cal.K4;
      cfg.K5 = cal.K5;
      cfg.K7 = cal.K7;
      result["K4"] = to_string(cal.K4);
      result["K5"] = to_string(cal.K5);
      result["K7"] = to_string(cal.K7);
      result["samples"] = cal.samples;
      result["K4_used"] = cal.k4_used;
      result["K5_used"] = cal.k5_used;
      result["K7_used"] = cal.k7_used;
      result["K7_zero_det"] = cal.k7_zero_det;
      auto lc = [](const InequalityCheck& l) {
        return json{{"checked", l.checked}, {"skipped", l.skipped}, {"violations", l.violations}};
      };
      if (check_samples > 0) {
        result["minor_variation"] = lc(check_minor_variation(cfg, params, f, check_samples, c.seed + 1));
        result["minor_stability"] = lc(check_minor_stability(cfg, params, f, check_samples, c.seed + 2));
        result["phi_homogeneity"] = lc(check_phi_homogeneity(cfg, f, check_samples, c.seed + 3));
        result["gradient_bound"] = lc(check_gradient_bound(cfg, f, check_samples, c.seed + 4));
      }
    }
    json config = echo_options(&app);
    config.erase("--config");
    json own = echo_options(active);
    for (auto it = own.begin(); it != own.end(); ++it) config[it.key()] = it.value();
    emit(c, command, config, result);
  } catch (const CounterexampleFound& e) {
    json d = diagnostic("counterexample", e);
    d["q"] = e.q();
    d["score_exp"] = e.score_exponent();
    std::cerr << d.dump() << "\n";
    exit_code = 4;
  } catch (const PrecisionExhausted& e) {
    json d = diagnostic("precision", e);
    if (e.produced() >= 0) d["produced"] = e.produced();
    std::cerr << d.dump() << "\n";
    exit_code = 3;
  } catch (const SearchBudgetExceeded& e) {
    json d = diagnostic("budget", e);
    d["required"] = e.required();
    std::cerr << d.dump() << "\n";
    exit_code = 3;
  } catch (const InsufficientDepth& e) {
    json d = diagnostic("depth", e);
    d["required_moves"] = e.required_moves();
    std::cerr << d.dump() << "\n";
    exit_code = 3;
  } catch (const SearchIncomplete& e) {
    json d = diagnostic("incomplete", e);
    d["required_bound"] = e.required_bound();
    std::cerr << d.dump() << "\n";
    exit_code = 3;
  } catch (const SyntaxError& e) {
    std::cerr << diagnostic("usage", e).dump() << "\n";
    exit_code = 2;
  } catch (const CoefficientOutOfRange& e) {
    std::cerr << diagnostic("usage", e).dump() << "\n";
    exit_code = 2;
  } catch (const BranchOutOfRange& e) {
    std::cerr << diagnostic("usage", e).dump() << "\n";
    exit_code = 2;
  } catch (const UsageError& e) {
    std::cerr << diagnostic("usage", e).dump() << "\n";
    exit_code = 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << diagnostic("usage", e).dump() << "\n";
    exit_code = 2;
  } catch (const std::exception& e) {
    std::cerr << diagnostic("internal", e).dump() << "\n";
    exit_code = 1;
  }
  return exit_code;
}
