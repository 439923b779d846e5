// hadm: command-line front end.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 cap exceeded.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hadm/hadm.hpp"
#include "hadm/json.hpp"

using namespace hadm;
using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kCap = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double tol = 1e-9;
  std::uint64_t cap = kDefaultCap;
  std::uint64_t seed = 0;
  std::string format = "json";
  unsigned threads = 0;
};

// Matrix given as a file, as --n N (F_N) or as --orders a,b,... (F_G).
struct Input {
  std::string file;
  std::size_t n = 0;
  std::vector<std::size_t> orders;

  void add_to(CLI::App* app) {
    app->add_option("file", file, "matrix file (Butson text or complex CSV)")->check(CLI::ExistingFile);
    app->add_option("--n", n, "use the Fourier matrix F_N");
    app->add_option("--orders", orders, "use F_G for G = Z_a x Z_b x ...")->delimiter(',');
  }

  io::AnyMatrix load() const {
    const int given = int(!file.empty()) + int(n > 0) + int(!orders.empty());
    if (given != 1) throw UsageError("give exactly one of FILE, --n, --orders");
    if (n > 0) return fourier(n);
    if (!orders.empty()) return fourier_group(std::span<const std::size_t>(orders));
    return io::read_matrix_file(file);
  }

  ButsonMatrix load_butson() const {
    auto m = load();
    if (!std::holds_alternative<ButsonMatrix>(m)) throw UsageError("this command needs a Butson matrix");
    return std::get<ButsonMatrix>(std::move(m));
  }
};

// ------------------------------------------------------------------ output

std::string scalar_text(const ordered_json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void emit(const ordered_json& j, const RunConfig& cfg) {
  if (cfg.format == "json") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  const bool csv = cfg.format == "csv";
  if (j.is_object() && j.contains("atoms") && j.size() == 1) {
    if (csv) std::cout << "k,weight\n";
    for (const auto& a : j["atoms"]) std::cout << a[0].dump() << (csv ? "," : " ") << scalar_text(a[1]) << '\n';
    return;
  }
  auto rows = j.is_array() ? j : ordered_json::array({j});
  if (rows.empty()) return;
  if (csv) {
    bool first = true;
    for (const auto& [k, v] : rows[0].items()) std::cout << (first ? "" : ",") << k, first = false;
    std::cout << '\n';
    for (const auto& r : rows) {
      first = true;
      for (const auto& [k, v] : r.items()) {
        std::string cell = scalar_text(v);
        if (cell.find_first_of(",\"") != std::string::npos) {
          std::string q = "\"";
          for (char c : cell) q += c == '"' ? std::string("\"\"") : std::string(1, c);
          cell = q + "\"";
        }
        std::cout << (first ? "" : ",") << cell;
        first = false;
      }
      std::cout << '\n';
    }
  } else {
    for (const auto& r : rows) {
      for (const auto& [k, v] : r.items()) std::cout << k << ": " << scalar_text(v) << '\n';
      if (rows.size() > 1) std::cout << '\n';
    }
  }
}

void write_output(const io::AnyMatrix& m, const std::string& out) {
  if (out.empty() || out == "-") {
    io::write_matrix(std::cout, m);
    return;
  }
  std::ofstream f(out);
  if (!f) throw UsageError("cannot write " + out);
  io::write_matrix(f, m);
}

cplx turn(double t) { return std::polar(1.0, 2.0 * std::numbers::pi * t); }

PhaseGrid grid_from_turns(const std::vector<double>& turns, std::size_t rows, std::size_t cols) {
  if (turns.size() != rows * cols)
    throw UsageError("--q needs " + std::to_string(rows * cols) + " values (row-major, in turns)");
  PhaseGrid g{rows, cols, {}};
  for (double t : turns) g.v.push_back(turn(t));
  return g;
}

PhaseMatrix as_phase(const io::AnyMatrix& m) {
  if (const auto* b = std::get_if<ButsonMatrix>(&m)) return b->to_phase();
  return std::get<PhaseMatrix>(m);
}

// ---------------------------------------------------------------- commands

int cmd_construct(const std::string& kind, std::size_t n, const std::vector<std::size_t>& orders,
                  const std::string& left, const std::string& right, const std::vector<double>& q,
                  const std::string& out) {
  const io::AnyMatrix m = [&]() -> io::AnyMatrix {
    if (kind == "fourier") {
      if (n == 0) throw UsageError("construct fourier needs --n");
      return fourier(n);
    } else if (kind == "fourier-group") {
      if (orders.empty()) throw UsageError("construct fourier-group needs --orders");
      return fourier_group(std::span<const std::size_t>(orders));
    } else if (kind == "f22q") {
      if (q.size() != 1) throw UsageError("construct f22q needs one --q value (in turns)");
      return f22_param(turn(q[0]));
    } else {
      if (left.empty() || right.empty()) throw UsageError("construct " + kind + " needs --left and --right");
      const auto h = io::read_matrix_file(left), k = io::read_matrix_file(right);
      if (kind == "tensor") {
        if (std::holds_alternative<ButsonMatrix>(h) && std::holds_alternative<ButsonMatrix>(k))
          return tensor(std::get<ButsonMatrix>(h), std::get<ButsonMatrix>(k));
        else
          return tensor(as_phase(h), as_phase(k));
      } else if (kind == "dita-left" || kind == "dita-right") {
        const auto hp = as_phase(h), kp = as_phase(k);
        if (kind == "dita-left")
          return dita_left(hp, kp, grid_from_turns(q, kp.size(), hp.size()));
        else
          return dita_right(hp, kp, grid_from_turns(q, hp.size(), kp.size()));
      } else {
        throw UsageError("unknown kind " + kind);
      }
    }
  }();
  write_output(m, out);
  std::visit(
      [&](const auto& x) {
        std::ostringstream s;
        s << "N=" << x.size();
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ButsonMatrix>) s << " s=" << x.order();
        s << " ones=" << count_ones(x) << '\n';
        (out.empty() || out == "-" ? std::cerr : std::cout) << s.str();
      },
      m);
  return kOk;
}

int cmd_defect(const Input& in, const std::string& method, bool no_timing, const RunConfig& cfg) {
  const auto m = in.load();
  std::vector<DefectReport> reps;
  auto closed = [&]() -> std::optional<DefectReport> {
    if (in.n > 0) return defect_closed_form(in.n);
    if (!in.orders.empty()) {
      DefectReport r;
      r.n = std::visit([](const auto& x) { return x.size(); }, m);
      r.method = DefectMethod::closed_form;
      r.dimension = fourier_defect_sum(std::span<const std::size_t>(in.orders));
      return r;
    }
    return std::nullopt;
  };
  auto numeric = [&] { return std::visit([&](const auto& x) { return defect_numeric(x, cfg.tol); }, m); };
  auto rational = [&] {
    if (!std::holds_alternative<ButsonMatrix>(m)) throw UsageError("rational defect needs a Butson matrix");
    return defect_rational(std::get<ButsonMatrix>(m));
  };
  if (method == "numeric") {
    reps.push_back(numeric());
  } else if (method == "rational") {
    reps.push_back(rational());
  } else if (method == "closed-form") {
    auto c = closed();
    if (!c) throw UsageError("closed-form needs --n or --orders");
    reps.push_back(*c);
  } else {
    reps.push_back(numeric());
    if (std::holds_alternative<ButsonMatrix>(m)) reps.push_back(rational());
    if (auto c = closed()) reps.push_back(*c);
  }
  if (no_timing)
    for (auto& r : reps) r.wall_ms = 0;
  bool agree = true;
  for (const auto& r : reps) agree &= r.dimension == reps.front().dimension;
  if (method != "all") {
    emit(json::to_json(reps.front()), cfg);
    return kOk;
  }
  ordered_json out = {{"reports", ordered_json::array()}};
  for (const auto& r : reps) out["reports"].push_back(json::to_json(r));
  out["agree"] = agree;
  if (cfg.format == "json")
    emit(out, cfg);
  else
    emit(out["reports"], cfg);
  return agree ? kOk : kVerifyFailed;
}

int cmd_verify(const std::string& family, std::size_t max_n, const RunConfig& cfg) {
  if (family != "fourier") throw UsageError("only --family fourier is supported");
  if (max_n < 2) throw UsageError("--max-n must be >= 2");
  ordered_json items = ordered_json::array();
  std::vector<std::string> failures;
  for (std::size_t n = 2; n <= max_n; ++n) {
    const auto f = fourier(n);
    ordered_json item = {{"n", n}};
    const auto par = verify_parametrization(n);
    item["parametrization"] = json::to_json(par);
    if (!par.ok()) failures.push_back("F_" + std::to_string(n) + ": parametrization");

    const auto num = defect_numeric(f, cfg.tol).dimension;
    const auto closed = fourier_defect_closed(n);
    std::optional<std::size_t> rat;
    if (n <= 12) rat = defect_rational(f).dimension;
    const bool agree = num == closed && (!rat || *rat == closed);
    item["defect"] = {{"numeric", num}, {"rational", rat ? ordered_json(*rat) : ordered_json(nullptr)},
                      {"closed_form", closed}, {"agree", agree}};
    if (!agree) failures.push_back("F_" + std::to_string(n) + ": defect engines disagree");

    const bool regular = is_regular(f).regular;
    item["regular"] = regular;
    if (!regular) failures.push_back("F_" + std::to_string(n) + ": regularity");

    EnumOptions eo{cfg.cap, cfg.threads};
    const auto rep = conjecture_report(f, eo, cfg.tol);
    item["conjectures"] = json::to_json(rep);
    if (rep.sandwich && !*rep.sandwich) failures.push_back("F_" + std::to_string(n) + ": sandwich");
    if (rep.in_support_hull && !*rep.in_support_hull) failures.push_back("F_" + std::to_string(n) + ": support hull");
    items.push_back(std::move(item));
  }
  ordered_json out = {{"family", family}, {"max_n", max_n}, {"items", items}, {"failures", failures},
                      {"pass", failures.empty()}};
  emit(out, cfg);
  for (const auto& f : failures) std::cerr << "FAILED " << f << '\n';
  return failures.empty() ? kOk : kVerifyFailed;
}

int cmd_mu(const Input& in, std::uint64_t s, std::uint64_t samples, const RunConfig& cfg) {
  const auto h = in.load_butson();
  if (s == 0) s = minimal_butson_order(h);
  const auto mu = samples ? mu_sampled(h, s, samples, cfg.seed, cfg.threads)
                          : mu_exact(h, s, EnumOptions{cfg.cap, cfg.threads});
  emit(json::to_json(mu), cfg);
  return kOk;
}

int cmd_support(const Input& in, std::uint64_t s, const RunConfig& cfg) {
  const auto h = in.load_butson();
  if (s == 0) s = minimal_butson_order(h);
  emit(ordered_json{{"s", s}, {"support", support(h, s, EnumOptions{cfg.cap, cfg.threads})}}, cfg);
  return kOk;
}

int cmd_gb(const Input& in, std::uint64_t s, const std::string& mode, const RunConfig& cfg) {
  const auto h = in.load_butson();
  if (s == 0) s = minimal_butson_order(h);
  GBOptions o;
  o.cap = cfg.cap;
  o.threads = cfg.threads;
  o.seed = cfg.seed;
  const auto r = gale_berlekamp(h, s, mode == "min" ? GBMode::min : GBMode::max, o);
  ordered_json j = json::to_json(r);
  if (!r.exact) j["bound"] = mode == "min" ? "upper bound" : "lower bound";
  emit(j, cfg);
  return kOk;
}

int cmd_regularity(const Input& in, std::uint64_t s, const std::vector<std::int64_t>& multiset,
                   const RunConfig& cfg) {
  if (!multiset.empty()) {
    if (s == 0) throw UsageError("--multiset needs --s");
    const auto m = RootMultiset::from_exponents(s, multiset);
    ordered_json j = {{"s", s}, {"vanishes", m.vanishes()}};
    if (!m.vanishes()) {
      j["verdict"] = "not-vanishing";
      emit(j, cfg);
      return kVerifyFailed;
    }
    const auto c = decompose_cycles(m);
    j["verdict"] = c ? "regular" : "irregular";
    j["certificate"] = c ? json::to_json(*c) : ordered_json(nullptr);
    emit(j, cfg);
    return kOk;
  }
  const auto h = in.load_butson();
  const auto rep = is_regular(h);
  ordered_json j = json::to_json(rep);
  j["verdict"] = rep.regular ? "regular" : "irregular";
  emit(j, cfg);
  return kOk;
}

int cmd_tangent_basis(std::size_t n, const RunConfig& cfg) {
  if (n == 0) throw UsageError("tangent-basis needs --n");
  emit(json::to_json(basis_fourier(n)), cfg);
  return kOk;
}

int cmd_report(const Input& in, const RunConfig& cfg) {
  const auto h = in.load_butson();
  emit(json::to_json(conjecture_report(h, EnumOptions{cfg.cap, cfg.threads}, cfg.tol)), cfg);
  return kOk;
}

// Rank of everything the two gluing formulas can produce at F_N (x) F_M,
// compared with the defect there.
int cmd_glue_span(std::size_t n, std::size_t m, const RunConfig& cfg) {
  if (n == 0 || m == 0) throw UsageError("glue-span needs --n and --m");
  const std::size_t nm = n * m;
  const auto bn = basis_fourier(n).basis, bm = basis_fourier(m).basis;
  std::vector<IntegerTangent> gens;
  auto add = [&](auto&& fill) {
    IntegerTangent a(nm);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t x = 0; x < m; ++x)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t y = 0; y < m; ++y) a(i * m + x, j * m + y) = fill(i, x, j, y);
    gens.push_back(std::move(a));
  };
  for (const auto& b : bn) add([&](auto i, auto, auto j, auto) { return b(i, j); });
  for (const auto& c : bm) add([&](auto, auto x, auto, auto y) { return c(x, y); });
  for (const auto& c : bm)
    for (std::size_t jj = 0; jj < n; ++jj) add([&](auto, auto x, auto j, auto y) { return j == jj ? c(x, y) : 0; });
  for (const auto& b : bn)
    for (std::size_t yy = 0; yy < m; ++yy) add([&](auto i, auto, auto j, auto y) { return y == yy ? b(i, j) : 0; });
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < m; ++q) {
      add([&](auto i, auto x, auto, auto) { return i == p && x == q; });                 // X
      add([&](auto, auto, auto j, auto y) { return j == p && y == q; });                 // Y
      add([&](auto, auto x, auto j, auto) { return x == q && j == p; });                 // F
      add([&](auto i, auto, auto, auto y) { return i == p && y == q; });                 // E
    }
  const auto rank = tangent_rank(gens);
  const auto d = defect_numeric(tensor(fourier(n), fourier(m)), cfg.tol).dimension;
  emit(ordered_json{{"n", n}, {"m", m}, {"glued_rank", rank}, {"defect", d}, {"spans", rank == d}}, cfg);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex Hadamard matrices: defect, Fourier tangent bases, regularity, 1-entry statistics"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--tol", cfg.tol, "numeric tolerance")->check(CLI::PositiveNumber);
  app.add_option("--cap", cfg.cap, "enumeration cap (states)")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--threads", cfg.threads, "worker threads (0: HADM_THREADS or all cores)");

  std::function<int()> run;

  auto* construct = app.add_subcommand("construct", "build a matrix and write it");
  std::string kind, left, right, out;
  std::size_t cn = 0;
  std::vector<std::size_t> corders;
  std::vector<double> q;
  construct->add_option("kind", kind, "fourier|fourier-group|tensor|dita-left|dita-right|f22q")
      ->required()
      ->check(CLI::IsMember({"fourier", "fourier-group", "tensor", "dita-left", "dita-right", "f22q"}));
  construct->add_option("--n", cn, "size of F_N");
  construct->add_option("--orders", corders, "group orders")->delimiter(',');
  construct->add_option("--left", left, "left factor file")->check(CLI::ExistingFile);
  construct->add_option("--right", right, "right factor file")->check(CLI::ExistingFile);
  construct->add_option("--q", q, "phases in turns, q = exp(2 pi i t), row-major")->delimiter(',');
  construct->add_option("--out,-o", out, "output file (default stdout)");
  construct->callback([&] { run = [&] { return cmd_construct(kind, cn, corders, left, right, q, out); }; });

  auto* defect = app.add_subcommand("defect", "defect of a matrix");
  Input din;
  din.add_to(defect);
  std::string method = "numeric";
  bool no_timing = false;
  defect->add_option("--method", method)->check(CLI::IsMember({"numeric", "rational", "closed-form", "all"}));
  defect->add_flag("--no-timing", no_timing, "report wall_ms as 0");
  defect->callback([&] { run = [&] { return cmd_defect(din, method, no_timing, cfg); }; });

  auto* verify = app.add_subcommand("verify", "batch verification over a family");
  std::string family = "fourier";
  std::size_t max_n = 6;
  verify->add_option("--family", family)->check(CLI::IsMember({"fourier"}));
  verify->add_option("--max-n", max_n);
  verify->callback([&] { run = [&] { return cmd_verify(family, max_n, cfg); }; });

  auto* mu = app.add_subcommand("mu", "law of the number of 1 entries");
  Input min;
  min.add_to(mu);
  std::uint64_t s = 0, samples = 0;
  bool exact = false;
  mu->add_option("--s", s, "root order (default: minimal)");
  mu->add_flag("--exact", exact, "exact enumeration (default)");
  mu->add_option("--samples", samples, "Monte Carlo sample count");
  mu->callback([&] {
    if (exact && samples) throw CLI::ValidationError("--exact and --samples are exclusive");
    run = [&] { return cmd_mu(min, s, samples, cfg); };
  });

  auto* sup = app.add_subcommand("support", "support of mu");
  Input sin;
  sin.add_to(sup);
  sup->add_option("--s", s, "root order (default: minimal)");
  sup->callback([&] { run = [&] { return cmd_support(sin, s, cfg); }; });

  auto* gb = app.add_subcommand("gb", "Gale-Berlekamp extremum");
  Input gin;
  gin.add_to(gb);
  std::string mode = "max";
  gb->add_option("--s", s, "root order (default: minimal)");
  gb->add_option("--mode", mode)->check(CLI::IsMember({"max", "min"}));
  gb->callback([&] { run = [&] { return cmd_gb(gin, s, mode, cfg); }; });

  auto* reg = app.add_subcommand("regularity", "cycle decompositions of row products");
  Input rin;
  rin.add_to(reg);
  std::vector<std::int64_t> multiset;
  reg->add_option("--s", s, "root order for --multiset");
  reg->add_option("--multiset", multiset, "exponents of a vanishing sum")->delimiter(',');
  reg->callback([&] { run = [&] { return cmd_regularity(rin, s, multiset, cfg); }; });

  auto* tb = app.add_subcommand("tangent-basis", "explicit basis of the tangent space at F_N");
  std::size_t tn = 0;
  tb->add_option("--n", tn)->required();
  tb->callback([&] { run = [&] { return cmd_tangent_basis(tn, cfg); }; });

  auto* report = app.add_subcommand("report", "defect versus 1-entry statistics");
  Input pin;
  pin.add_to(report);
  report->callback([&] { run = [&] { return cmd_report(pin, cfg); }; });

  auto* glue = app.add_subcommand("glue-span", "rank of glued tangents at F_N (x) F_M");
  std::size_t gn = 0, gm = 0;
  glue->add_option("--n", gn)->required();
  glue->add_option("--m", gm)->required();
  glue->callback([&] { run = [&] { return cmd_glue_span(gn, gm, cfg); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  try {
    return run();
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVerifyFailed;
  }
}
