#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "polyterm/checker.hpp"
#include "polyterm/format.hpp"

namespace {

using namespace polyterm;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

PolyFile load(const std::string& path) {
  PolyFile file = parse_poly(read_file(path));
  for (const std::string& w : file.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  return file;
}

VerificationMode parse_mode(const std::string& text) {
  if (text == "affine") return AffineExact{};
  if (text.rfind("grid:", 0) == 0) {
    int bound = std::stoi(text.substr(5));
    if (bound < 1) throw std::runtime_error("grid bound must be at least 1");
    return BoundedGrid{static_cast<unsigned>(bound)};
  }
  throw std::runtime_error("mode must be grid:B or affine, got '" + text + "'");
}

std::string occurrence_line(const Signature& sig, const Occurrence& occ) {
  return "p=" + std::to_string(occ.left_wires) +
         " q=" + std::to_string(occ.right_wires) +
         " above=[" + render_term(sig, occ.above) + "]" +
         " below=[" + render_term(sig, occ.below) + "]";
}

int cmd_check(const std::string& path, const std::string& term, bool dot) {
  PolyFile file = load(path);
  std::cout << "ok: " << file.signature.size() << " generators, "
            << file.rules.size() << " rules, interpretation: "
            << (file.has_interpretation() ? "yes" : "no");
  if (file.currents_min) std::cout << " (currents min " << *file.currents_min << ")";
  std::cout << "\n";
  if (!term.empty()) {
    Circuit c = parse_term(file.signature, term);
    std::cout << "term: " << c.inputs << " -> " << c.outputs << ", "
              << c.slices.size() << " slices: "
              << render_term(file.signature, c) << "\n";
    if (dot) std::cout << render_dot(file.signature, c);
  }
  return 0;
}

int cmd_normalize(const std::string& path, const std::string& term,
                  std::size_t budget, bool dot) {
  PolyFile file = load(path);
  Circuit start = parse_term(file.signature, term);
  if (dot) std::cout << render_dot(file.signature, start);
  Polygraph poly = file.polygraph();
  ReductionTrace trace = normalize(poly, start, budget);
  std::cout << "start: " << render_term(file.signature, trace.start) << "\n";
  std::size_t i = 0;
  for (const ReductionStep& step : trace.steps) {
    std::cout << "step " << ++i << ": " << step.rule << " at "
              << occurrence_line(file.signature, step.occurrence) << " -> "
              << render_term(file.signature, step.result) << "\n";
  }
  if (trace.status == ReductionTrace::Status::Normalized) {
    std::cout << "status: normalized in " << trace.steps.size() << " steps\n";
  } else {
    std::cout << "status: budget exhausted after " << trace.steps.size()
              << " steps\n";
  }
  return 0;
}

int cmd_match(const std::string& path, const std::string& term,
              const std::string& rule_name) {
  PolyFile file = load(path);
  Circuit c = parse_term(file.signature, term);
  Polygraph poly = file.polygraph();
  const Rule* rule = poly.find_rule(rule_name);
  if (!rule) throw std::runtime_error("no rule named " + rule_name);
  std::vector<Occurrence> occs = find_matches(file.signature, c, *rule);
  std::size_t i = 0;
  for (const Occurrence& occ : occs) {
    std::cout << "occurrence " << ++i << ": "
              << occurrence_line(file.signature, occ) << "\n";
  }
  std::cout << occs.size() << " occurrence" << (occs.size() == 1 ? "" : "s")
            << "\n";
  return 0;
}

int cmd_verify(const std::string& path, const std::string& mode_text,
               const std::string& format, unsigned jobs) {
  PolyFile file = load(path);
  if (!file.has_interpretation()) {
    throw std::runtime_error("file has no interpretation section");
  }
  VerificationMode mode = parse_mode(mode_text);
  Polygraph poly = file.polygraph();
  VerificationReport report =
      check_polygraph(poly, file.interpretation, mode, jobs);
  if (format == "records") {
    std::cout << render_report_records(report);
  } else {
    std::cout << render_report(report);
  }
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circuit rewriting and termination certificates for "
               "one-sorted generator signatures"};
  app.require_subcommand(1);

  std::string file, term, rule_name, mode = "grid:3", format = "text";
  std::size_t budget = 1000;
  unsigned jobs = 1;
  bool dot = false;

  CLI::App* check = app.add_subcommand("check", "parse a .poly file and report");
  check->add_option("file", file)->required();
  check->add_option("--term", term, "also parse and print this circuit term");
  check->add_flag("--emit-dot", dot, "dump the term as graphviz");

  CLI::App* norm = app.add_subcommand("normalize", "reduce a term to normal form");
  norm->add_option("file", file)->required();
  norm->add_option("--term", term)->required();
  norm->add_option("--budget", budget, "maximum number of rewrite steps");
  norm->add_flag("--emit-dot", dot, "dump the starting term as graphviz");

  CLI::App* match = app.add_subcommand("match", "list occurrences of a rule");
  match->add_option("file", file)->required();
  match->add_option("--term", term)->required();
  match->add_option("--rule", rule_name)->required();

  CLI::App* verify = app.add_subcommand("verify", "check the rule inequalities");
  verify->add_option("file", file)->required();
  verify->add_option("--mode", mode, "grid:B or affine");
  verify->add_option("--format", format, "text or records");
  verify->add_option("--jobs", jobs, "grid worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(check)) return cmd_check(file, term, dot);
    if (app.got_subcommand(norm)) return cmd_normalize(file, term, budget, dot);
    if (app.got_subcommand(match)) return cmd_match(file, term, rule_name);
    if (app.got_subcommand(verify)) return cmd_verify(file, mode, format, jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
