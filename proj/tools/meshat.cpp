#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "meshat/error.hpp"
#include "meshat/policy.hpp"
#include "meshat/service/config.hpp"
#include "meshat/service/seed.hpp"
#include "meshat/service/server.hpp"
#include "meshat/service/simulator.hpp"
#include "meshat/service/storage.hpp"

using namespace meshat;
using namespace meshat::service;

namespace {

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

indicators::Questionnaire load_questionnaire(const Config& c) {
  if (!c.questionnaire) return indicators::Questionnaire::defaults();
  std::ifstream in(*c.questionnaire);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + c.questionnaire->string());
  std::ostringstream text;
  text << in.rdbuf();
  return indicators::Questionnaire::from_json_text(text.str());
}

// Platform holding the durable log, with further appends persisted.
struct Opened {
  FileStore store;
  Platform platform;

  explicit Opened(const Config& c) : store(c.storage) {
    load_events(platform, store.recovered());
    platform.set_sink(&store);
    if (store.truncated_bytes() > 0)
      std::cerr << "recovered " << store.recovered().size() << " events, dropped "
                << store.truncated_bytes() << " bytes of an interrupted append\n";
  }
};

void print_summary(const State& s) {
  std::map<Role, int> roles;
  for (const auto& [id, a] : s.actors) ++roles[a.role];
  std::cout << "course " << s.course->id << " (" << to_string(s.course->status) << "), "
            << s.course->calendar.size() << " phases, " << s.groups.size() << " groups\n";
  for (const auto& [role, n] : roles) std::cout << "  " << to_string(role) << ": " << n << "\n";
  std::cout << "last seq " << s.last_seq << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MEShaT monitoring and experience-sharing service"};
  app.require_subcommand(1);
  std::string config_file;
  app.add_option("-c,--config", config_file, "JSON config file")->check(CLI::ExistingFile);

  auto* serve = app.add_subcommand("serve", "Serve the HTTP JSON API");
  auto* seed = app.add_subcommand("seed-paper-course", "Create the 12-group course in an empty store");

  auto* simulate = app.add_subcommand("simulate", "Append a simulated history to a seeded store");
  SimulationConfig sim;
  bool close = false;
  simulate->add_option("--seed", sim.seed, "Random seed")->required();
  simulate->add_option("--weeks", sim.weeks, "Number of weeks")->required();
  simulate->add_option("--hours", sim.hours_per_student_week, "Mean hours per student and week");
  simulate->add_flag("--close", close, "Grade the groups and close the course at the end");

  auto* exp = app.add_subcommand("export", "Write the event log as JSONL");
  std::string out_file;
  exp->add_option("--out", out_file, "Output file")->required();

  auto* imp = app.add_subcommand("import", "Load a JSONL event log into an empty store");
  std::string in_file;
  imp->add_option("--in", in_file, "Input file")->required()->check(CLI::ExistingFile);

  auto* table = app.add_subcommand("decision-table", "Write the policy decision table as CSV");
  std::string table_file;
  table->add_option("--out", table_file, "Output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const Config config =
        load_config(config_file.empty() ? std::nullopt
                                        : std::optional<std::filesystem::path>(config_file));

    if (*serve) {
      Opened o(config);
      Api api(o.platform, load_questionnaire(config),
              std::chrono::seconds(config.session_ttl_seconds));
      Service service(api);
      HttpServer server(service);
      const int port = server.bind(config.host, config.port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on " << config.host << ":" << port << " (seq "
                << o.platform.last_seq() << ")" << std::endl;
      server.listen();
      g_server = nullptr;
    } else if (*seed) {
      Opened o(config);
      o.platform.set_clock(stepping_clock(setup_epoch()));
      seed_paper_course(o.platform);
      print_summary(o.platform.state());
    } else if (*simulate) {
      Opened o(config);
      const State& s = o.platform.state();
      if (s.groups.empty()) throw Error(ErrorCode::NoCourse, "seed the course first");
      sim.groups = s.groups.size();
      sim.members_per_group = s.groups.begin()->second.member_ids.size();
      sim.close_course = close;
      const auto r = service::simulate(o.platform, sim, load_questionnaire(config));
      std::cout << "appended seq " << r.first_seq << ".." << r.last_seq << " covering "
                << r.first_week.str() << ".." << r.last_week.str() << "\n";
    } else if (*exp) {
      Opened o(config);
      write_log_file(out_file, o.platform.log());
      std::cout << "exported " << o.platform.log().size() << " events to " << out_file << "\n";
    } else if (*imp) {
      const auto events = read_log_file(in_file);
      Opened o(config);
      load_events(o.platform, events);
      std::cout << "imported " << events.size() << " events\n";
    } else if (*table) {
      Opened o(config);
      const auto rows = policy::decision_table(o.platform.state());
      std::ofstream out(table_file, std::ios::binary | std::ios::trunc);
      out << policy::decision_table_csv(rows);
      if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + table_file);
      std::cout << "wrote " << rows.size() << " decisions to " << table_file << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
