#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mpc/families.hpp"
#include "mpc/harness.hpp"
#include "mpc/matchdb.hpp"
#include "mpc/planner.hpp"

namespace {

// Accepts a file path or a compact family name such as L_16, C3, B_4_2, SP3.
mpc::Query load_query(const std::string& arg) {
  if (auto family = mpc::family_query(arg)) return *family;
  std::ifstream in(arg);
  if (!in) {
    throw std::runtime_error("cannot open query file (and '" + arg +
                             "' is not a known family name)");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return mpc::parse_query(buffer.str());
}

void write_output(const std::string& content, const std::string& path) {
  if (path.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

// "5" -> 1..5, "3,7,9" -> the list, "10..20" -> the range
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  auto range = text.find("..");
  if (range != std::string::npos) {
    std::uint64_t lo = std::stoull(text.substr(0, range));
    std::uint64_t hi = std::stoull(text.substr(range + 2));
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  if (text.find(',') == std::string::npos) {
    std::uint64_t count = std::stoull(text);
    for (std::uint64_t s = 1; s <= count; ++s) seeds.push_back(s);
    return seeds;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) seeds.push_back(std::stoull(item));
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulator and analysis toolkit for one-round and multi-round "
               "parallel evaluation of conjunctive queries"};
  app.require_subcommand(1);

  std::string query_spec, out_path, format = "text", eps_text = "0", seeds_text = "20",
              mode_text = "one-round", dump_dir;
  std::size_t n = 64;
  std::uint64_t p = 4;
  double c = 4.0;
  bool enforce = false, timing = false, serial = false, show_plan = false;

  auto* analyze_cmd = app.add_subcommand("analyze", "structural and LP analysis of a query");
  analyze_cmd->add_option("query", query_spec, "query file or family name")->required();
  analyze_cmd->add_option("--out", out_path, "write the report to a file");
  analyze_cmd->add_option("--format", format, "text or json");
  analyze_cmd->add_flag("--show-plan", show_plan, "print the multi-round plans as well");

  auto* run_cmd = app.add_subcommand("run", "execute simulated rounds over seeds");
  run_cmd->add_option("query", query_spec, "query file or family name")->required();
  run_cmd->add_option("--n", n, "domain size")->required();
  run_cmd->add_option("--p", p, "number of servers")->required();
  run_cmd->add_option("--eps", eps_text, "space exponent, e.g. 1/3");
  run_cmd->add_option("--c", c, "budget constant");
  run_cmd->add_option("--seeds", seeds_text, "count, comma list, or lo..hi range");
  run_cmd->add_option("--mode", mode_text, "one-round, partial, or plan");
  run_cmd->add_flag("--enforce", enforce, "truncate deliveries at the budget");
  run_cmd->add_flag("--timing", timing, "include wall-clock columns");
  run_cmd->add_flag("--serial", serial, "disable the parallel workers");
  run_cmd->add_option("--out", out_path, "write the report to a file");
  run_cmd->add_option("--format", format, "csv or json");
  run_cmd->add_option("--dump-db", dump_dir, "dump the first seed's database as CSVs");

  auto* table1_cmd = app.add_subcommand("table1", "one-round reference table for the "
                                                  "standard families");
  table1_cmd->add_option("--out", out_path, "write the table to a file");
  auto* table2_cmd = app.add_subcommand("table2", "round/space tradeoff table for the "
                                                  "standard families");
  table2_cmd->add_option("--out", out_path, "write the table to a file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze_cmd->parsed()) {
      mpc::Query q = load_query(query_spec);
      mpc::AnalyzeReport report = mpc::analyze(q);
      std::string body =
          format == "json" ? mpc::analyze_json(report) : mpc::analyze_text(report);
      if (show_plan && report.connected) {
        for (const mpc::Rat& eps : {mpc::Rat(0), mpc::Rat(1, 2), mpc::Rat(2, 3)}) {
          body += "\n" + mpc::to_string(mpc::build_plan(q, eps));
        }
      }
      write_output(body, out_path);
      return 0;
    }
    if (run_cmd->parsed()) {
      mpc::RunConfig cfg;
      cfg.query = load_query(query_spec);
      cfg.n = n;
      cfg.p = p;
      cfg.epsilon = mpc::Rat::from_string(eps_text);
      cfg.c = c;
      cfg.enforce = enforce;
      cfg.seeds = parse_seeds(seeds_text);
      cfg.exec = serial ? mpc::ExecMode::serial : mpc::ExecMode::parallel;
      if (mode_text == "one-round") {
        cfg.mode = mpc::RunMode::one_round;
      } else if (mode_text == "partial") {
        cfg.mode = mpc::RunMode::partial;
      } else if (mode_text == "plan") {
        cfg.mode = mpc::RunMode::plan;
      } else {
        throw std::runtime_error("unknown mode: " + mode_text);
      }
      if (!dump_dir.empty() && !cfg.seeds.empty()) {
        mpc::dump_csv(mpc::generate(cfg.query, cfg.n, mpc::db_seed(cfg.seeds.front())),
                      dump_dir);
      }
      mpc::ExperimentReport report = mpc::run_experiment(cfg);
      std::string body = format == "json" ? mpc::report_json(report, timing)
                                          : mpc::report_csv(report, timing);
      write_output(body, out_path);
      return 0;
    }
    if (table1_cmd->parsed() || table2_cmd->parsed()) {
      mpc::TableResult result = table1_cmd->parsed() ? mpc::make_table1() : mpc::make_table2();
      std::string body = result.text;
      for (const auto& diff : result.diffs) body += "DIFF " + diff + "\n";
      write_output(body, out_path);
      return result.diffs.empty() ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
