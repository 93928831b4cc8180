#include "pamber/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pamber/error.hpp"

namespace pamber::cli {

Format format_from_name(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw Error(ErrorCode::InvalidArgument, "unknown format '" + name + "'");
}

std::vector<double> SnrRange::values() const {
  std::vector<double> out;
  if (step <= 0) {
    out.push_back(start);
    return out;
  }
  const int n = static_cast<int>(std::floor((stop - start) / step + 0.5));
  for (int i = 0; i <= n; ++i) {
    const double v = start + i * step;
    if (v <= stop + 0.5 * step) out.push_back(v);
  }
  return out;
}

SnrRange parse_snr_range(const std::string& text) {
  SnrRange r;
  const auto first = text.find(':');
  if (first == std::string::npos) {
    try {
      r.start = r.stop = std::stod(text);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument,
                  "cannot parse SNR value '" + text + "'");
    }
    r.step = 0;
    return r;
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument,
                "SNR range must be start:step:stop, got '" + text + "'");
  }
  try {
    r.start = std::stod(text.substr(0, first));
    r.step = std::stod(text.substr(first + 1, second - first - 1));
    r.stop = std::stod(text.substr(second + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument,
                "cannot parse SNR range '" + text + "'");
  }
  if (r.step <= 0 || r.stop < r.start) {
    throw Error(ErrorCode::InvalidArgument,
                "SNR range needs step > 0 and stop >= start");
  }
  return r;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Output document assembly
// ---------------------------------------------------------------------------

namespace {

struct Cell {
  std::string text;
  bool numeric = false;
};

Cell num(double v) { return {format_double(v), true}; }
Cell num(std::uint64_t v) { return {std::to_string(v), true}; }
Cell num(int v) { return {std::to_string(v), true}; }
Cell str(std::string s) { return {std::move(s), false}; }

struct Table {
  std::string command;  // echo of the invocation, stable
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (i) os << ',';
    os << t.header[i];
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i].text;
    }
    os << '\n';
  }
  return os.str();
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string to_json(const Table& t) {
  std::ostringstream os;
  os << "{\n  \"schema_version\": \"" << kSchemaVersion << "\",\n";
  os << "  \"command\": \"" << json_escape(t.command) << "\",\n";
  os << "  \"rows\": [";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << (r ? ",\n    {" : "\n    {");
    for (std::size_t i = 0; i < t.rows[r].size(); ++i) {
      if (i) os << ", ";
      os << '"' << t.header[i] << "\": ";
      const Cell& cell = t.rows[r][i];
      if (cell.numeric) {
        os << cell.text;
      } else {
        os << '"' << json_escape(cell.text) << '"';
      }
    }
    os << '}';
  }
  os << "\n  ]\n}\n";
  return os.str();
}

std::string render(const Table& t, Format f) {
  return f == Format::Csv ? to_csv(t) : to_json(t);
}

std::string join_ints(const Eigen::VectorXi& v) {
  std::string s;
  for (int i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(v[i]);
  }
  return s;
}

template <typename SeqT>
std::string join_seq(const SeqT& v) {
  std::string s;
  bool first = true;
  for (const auto& x : v) {
    if (!first) s += ';';
    first = false;
    s += std::to_string(x);
  }
  return s;
}

std::string bits_string(const Pattern& p) {
  std::string s;
  for (auto b : p.bits) s += static_cast<char>('0' + b);
  return s;
}

Demodulator demod_from_name(const std::string& name) {
  if (name == "bd") return Demodulator::BD;
  if (name == "abd") return Demodulator::ABD;
  throw Error(ErrorCode::InvalidArgument, "unknown demodulator '" + name + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

std::string classes_command(int order, Format format) {
  Table t;
  t.command = "classes --order " + std::to_string(order);
  t.header = {"q", "representative", "type", "members", "a"};
  for (const PatternClass& pc : enumerate_classes(order)) {
    t.rows.push_back({num(pc.id), str(bits_string(pc.representative)),
                      str(to_string(pc.sym)), str(join_seq(pc.members)),
                      str(join_ints(pc.weights))});
  }
  return render(t, format);
}

namespace {

std::vector<ThresholdSet> threshold_sweep(const Pattern& p,
                                          const std::vector<double>& grid,
                                          const std::string& method,
                                          const Constellation& c) {
  std::vector<ThresholdSet> out;
  if (method == "scan") {
    return bd_thresholds_numeric_sweep(p, grid, c);
  }
  for (double db : grid) {
    const Snr snr = snr_from_db(db, c);
    if (method == "closed") {
      if (p.order == 4) {
        out.push_back(bd_thresholds_4pam(p, snr, c));
      } else if (p.order == 8) {
        out.push_back(bd_thresholds_8pam(p, snr, c));
      } else {
        throw Error(ErrorCode::WrongOrder,
                    "closed-form thresholds exist for orders 4 and 8 only");
      }
    } else if (method == "midpoint") {
      ThresholdSet ts = abd_thresholds(p, c);
      ts.snr = snr;
      out.push_back(std::move(ts));
    } else if (method == "auto") {
      out.push_back(bd_thresholds(p, snr, c));
    } else {
      throw Error(ErrorCode::InvalidArgument,
                  "method must be closed|scan|midpoint|auto");
    }
  }
  return out;
}

}  // namespace

std::string thresholds_command(int order, std::uint64_t pattern,
                               const SnrRange& range,
                               const std::string& method, Format format) {
  const Constellation c = make_constellation(order);
  const Pattern p = pattern_from_index(pattern, order);
  const std::vector<double> grid = range.values();
  const std::vector<ThresholdSet> sets = threshold_sweep(p, grid, method, c);

  Table t;
  {
    std::ostringstream cmd;
    cmd << "thresholds --order " << order << " --pattern " << pattern
        << " --snr-db " << format_double(range.start);
    if (range.step > 0) {
      cmd << ':' << format_double(range.step) << ':'
          << format_double(range.stop);
    }
    cmd << " --method " << method;
    t.command = cmd.str();
  }
  t.header = {"pattern", "snr_db", "k", "beta", "virtual", "partner",
              "method"};
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (const auto& [k, e] : sets[g].entries) {
      t.rows.push_back({num(pattern), num(grid[g]), num(k), num(e.value),
                        num(e.is_virtual ? 1 : 0), num(e.partner),
                        str(to_string(sets[g].method))});
    }
  }
  return render(t, format);
}

std::string pber_command(int order, std::optional<std::uint64_t> pattern,
                         std::optional<int> cls, Demodulator demod,
                         const SnrRange& range, Format format) {
  if (pattern.has_value() == cls.has_value()) {
    throw Error(ErrorCode::InvalidArgument,
                "give exactly one of --pattern and --class");
  }
  const Constellation c = make_constellation(order);
  std::uint64_t w;
  if (cls) {
    const auto classes = enumerate_classes(order);
    if (*cls < 1 || *cls > static_cast<int>(classes.size())) {
      throw Error(ErrorCode::OutOfRange,
                  "class id out of range for order " + std::to_string(order));
    }
    w = classes[*cls - 1].representative.index;
  } else {
    w = *pattern;
  }
  const Pattern p = pattern_from_index(w, order);
  const std::vector<double> grid = range.values();

  Table t;
  {
    std::ostringstream cmd;
    cmd << "pber --order " << order;
    if (cls) {
      cmd << " --class " << *cls;
    } else {
      cmd << " --pattern " << w;
    }
    cmd << " --demod " << to_string(demod) << " --snr-db "
        << format_double(range.start);
    if (range.step > 0) {
      cmd << ':' << format_double(range.step) << ':'
          << format_double(range.stop);
    }
    t.command = cmd.str();
  }
  t.header = {"subject", "demod", "snr_db", "value", "method"};

  const std::string subject = "p" + std::to_string(w);
  if (demod == Demodulator::ABD) {
    for (double db : grid) {
      const Snr snr = snr_from_db(db, c);
      t.rows.push_back({str(subject), str("abd"), num(db),
                        num(pber_abd(p, snr, c)), str("abd")});
    }
    return render(t, format);
  }
  const bool closed =
      order == 4 || (order == 8 && p.sym != SymmetryType::ASY);
  if (closed) {
    for (double db : grid) {
      const Snr snr = snr_from_db(db, c);
      const ThresholdSet ts = bd_thresholds(p, snr, c);
      t.rows.push_back({str(subject), str("bd"), num(db),
                        num(pber_closed_form(p, ts, snr, c)),
                        str(to_string(ts.method))});
    }
  } else {
    const auto sets = bd_thresholds_numeric_sweep(p, grid, c);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const Snr snr = snr_from_db(grid[g], c);
      t.rows.push_back({str(subject), str("bd"), num(grid[g]),
                        num(pber_closed_form(p, sets[g], snr, c)),
                        str("scan")});
    }
  }
  return render(t, format);
}

std::string ber_command(int order, const std::string& labeling,
                        Demodulator demod, const SnrRange& range,
                        Format format) {
  const Constellation c = make_constellation(order);
  const Labeling l = builtin_labeling(builtin_labeling_from_name(labeling), order);
  const std::vector<double> grid = range.values();

  Table t;
  {
    std::ostringstream cmd;
    cmd << "ber --order " << order << " --labeling " << l.name << " --demod "
        << to_string(demod) << " --snr-db " << format_double(range.start);
    if (range.step > 0) {
      cmd << ':' << format_double(range.step) << ':'
          << format_double(range.stop);
    }
    t.command = cmd.str();
  }
  t.header = {"subject", "demod", "snr_db", "value", "method"};
  const bool closed = order == 4 || order == 8;
  const std::string method =
      demod == Demodulator::ABD ? "abd" : (closed ? "closed" : "scan");
  for (double db : grid) {
    const Snr snr = snr_from_db(db, c);
    t.rows.push_back({str(l.name), str(to_string(demod)), num(db),
                      num(ber_labeling(l, demod, snr, c)), str(method)});
  }
  return render(t, format);
}

std::string simulate_command(int order, std::optional<std::uint64_t> pattern,
                             const std::optional<std::string>& labeling,
                             Demodulator demod, double snr_db,
                             std::uint64_t trials, std::uint64_t seed,
                             int shards, Format format) {
  if (pattern.has_value() == labeling.has_value()) {
    throw Error(ErrorCode::InvalidArgument,
                "give exactly one of --pattern and --labeling");
  }
  const Constellation c = make_constellation(order);
  const Snr snr = snr_from_db(snr_db, c);
  SimConfig cfg;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.shards = shards;
  cfg.demod = demod;

  std::string subject;
  SimResult r;
  double analytic = 0;
  if (pattern) {
    const Pattern p = pattern_from_index(*pattern, order);
    subject = "p" + std::to_string(*pattern);
    r = run_pber_sim(cfg, p, snr, c);
    analytic = pber(p, demod, snr, c);
  } else {
    const Labeling l =
        builtin_labeling(builtin_labeling_from_name(*labeling), order);
    subject = l.name;
    r = run_ber_sim(cfg, l, snr, c);
    analytic = ber_labeling(l, demod, snr, c);
  }
  const double sigma =
      std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(r.trials));
  const double delta_over_sigma =
      sigma > 0 ? std::fabs(r.estimate - analytic) / sigma : 0.0;

  Table t;
  {
    std::ostringstream cmd;
    cmd << "simulate --order " << order << " --"
        << (pattern ? "pattern " + std::to_string(*pattern)
                    : "labeling " + subject)
        << " --demod " << to_string(demod) << " --snr-db "
        << format_double(snr_db) << " --trials " << trials << " --seed "
        << seed << " --shards " << shards;
    t.command = cmd.str();
  }
  t.header = {"subject", "demod",    "snr_db",   "trials",
              "errors",  "estimate", "ci95",     "analytic",
              "delta_over_sigma"};
  t.rows.push_back({str(subject), str(to_string(demod)), num(snr_db),
                    num(r.trials), num(r.errors), num(r.estimate),
                    num(r.ci95_halfwidth), num(analytic),
                    num(delta_over_sigma)});
  return render(t, format);
}

std::string labelings_command(int order, bool count_distinct, Format format) {
  Table t;
  if (count_distinct) {
    const LabelingCensus census = count_distinct_labelings(order);
    t.command = "labelings --order " + std::to_string(order) +
                " --count-distinct";
    t.header = {"order", "total_valid", "distinct_q"};
    t.rows.push_back({num(order), num(census.total_valid),
                      num(census.distinct_class_vectors)});
    return render(t, format);
  }
  t.command = "labelings --order " + std::to_string(order);
  t.header = {"name", "w", "q", "alpha"};
  const std::vector<BuiltinLabeling> all = {
      BuiltinLabeling::Brgc, BuiltinLabeling::Fbc, BuiltinLabeling::Nbc,
      BuiltinLabeling::Bsgc, BuiltinLabeling::Agc};
  for (BuiltinLabeling which : all) {
    Labeling l;
    try {
      l = builtin_labeling(which, order);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::UndefinedForOrder) continue;
      throw;
    }
    t.rows.push_back({str(l.name), str(join_seq(l.column_indices)),
                      str(join_seq(l.class_vector)),
                      str(join_ints(l.abd_weights))});
  }
  return render(t, format);
}

// ---------------------------------------------------------------------------
// Command line wiring
// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv) {
  CLI::App app{"Exact and max-log bit-wise PAM demodulator BER analysis"};
  app.require_subcommand(1);

  std::string format_name = "csv";
  app.add_option("--format", format_name, "csv or json")
      ->capture_default_str();

  int order = 8;
  std::string snr_text;
  std::string method = "auto";
  std::string demod_name = "bd";
  std::string labeling_name;
  std::uint64_t pattern_w = 0;
  int class_id = 0;
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 1;
  int shards = 8;
  bool count_distinct = false;

  auto* cmd_classes = app.add_subcommand("classes", "pattern class table");
  cmd_classes->add_option("--order", order, "PAM order")->required();

  auto* cmd_thresholds =
      app.add_subcommand("thresholds", "decision threshold tracks");
  cmd_thresholds->add_option("--order", order, "PAM order")->required();
  cmd_thresholds->add_option("--pattern", pattern_w, "pattern index")
      ->required();
  cmd_thresholds->add_option("--snr-db", snr_text, "value or start:step:stop")
      ->required();
  cmd_thresholds->add_option("--method", method,
                             "closed|scan|midpoint|auto");

  auto* cmd_pber = app.add_subcommand("pber", "pattern bit error rate curve");
  cmd_pber->add_option("--order", order, "PAM order")->required();
  auto* popt = cmd_pber->add_option("--pattern", pattern_w, "pattern index");
  auto* copt = cmd_pber->add_option("--class", class_id, "class id");
  cmd_pber->add_option("--demod", demod_name, "bd or abd")->required();
  cmd_pber->add_option("--snr-db", snr_text, "value or start:step:stop")
      ->required();

  auto* cmd_ber = app.add_subcommand("ber", "labeling bit error rate curve");
  cmd_ber->add_option("--order", order, "PAM order")->required();
  cmd_ber->add_option("--labeling", labeling_name,
                      "brgc|nbc|fbc|bsgc|agc")
      ->required();
  cmd_ber->add_option("--demod", demod_name, "bd or abd")->required();
  cmd_ber->add_option("--snr-db", snr_text, "value or start:step:stop")
      ->required();

  auto* cmd_sim = app.add_subcommand("simulate", "Monte-Carlo cross-check");
  cmd_sim->add_option("--order", order, "PAM order")->required();
  auto* spopt = cmd_sim->add_option("--pattern", pattern_w, "pattern index");
  auto* slopt =
      cmd_sim->add_option("--labeling", labeling_name, "labeling name");
  cmd_sim->add_option("--demod", demod_name, "bd or abd")->required();
  cmd_sim->add_option("--snr-db", snr_text, "single SNR in dB")->required();
  cmd_sim->add_option("--trials", trials, "number of trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_sim->add_option("--seed", seed, "RNG seed")->capture_default_str();
  cmd_sim->add_option("--shards", shards, "parallel shards")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* cmd_labelings =
      app.add_subcommand("labelings", "builtin labeling table / census");
  cmd_labelings->add_option("--order", order, "PAM order")->required();
  cmd_labelings->add_flag("--count-distinct", count_distinct,
                          "census of BER-distinct labelings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const Format format = format_from_name(format_name);
    std::string out;
    if (cmd_classes->parsed()) {
      out = classes_command(order, format);
    } else if (cmd_thresholds->parsed()) {
      out = thresholds_command(order, pattern_w, parse_snr_range(snr_text),
                               method, format);
    } else if (cmd_pber->parsed()) {
      out = pber_command(
          order,
          popt->count() ? std::optional<std::uint64_t>(pattern_w)
                        : std::nullopt,
          copt->count() ? std::optional<int>(class_id) : std::nullopt,
          demod_from_name(demod_name), parse_snr_range(snr_text), format);
    } else if (cmd_ber->parsed()) {
      out = ber_command(order, labeling_name, demod_from_name(demod_name),
                        parse_snr_range(snr_text), format);
    } else if (cmd_sim->parsed()) {
      const SnrRange r = parse_snr_range(snr_text);
      if (r.step > 0) {
        throw Error(ErrorCode::InvalidArgument,
                    "simulate takes a single SNR value");
      }
      out = simulate_command(
          order,
          spopt->count() ? std::optional<std::uint64_t>(pattern_w)
                         : std::nullopt,
          slopt->count() ? std::optional<std::string>(labeling_name)
                         : std::nullopt,
          demod_from_name(demod_name), r.start, trials, seed, shards, format);
    } else if (cmd_labelings->parsed()) {
      out = labelings_command(order, count_distinct, format);
    }
    std::cout << out;
    return 0;
  } catch (const Error& e) {
    std::cerr << "pamber: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "pamber: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace pamber::cli
