// Copyright (c) 2026 The leedw Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <regex>

#include "leedw/common/error.hpp"
#include "leedw/common/util.hpp"
#include "leedw/service/api.hpp"
#include "leedw/service/server.hpp"

namespace leedw::cli {

namespace {

using service::RunManager;

struct Globals {
  std::string config;
  std::string root;
  bool json = false;
};

std::shared_ptr<RunManager> open_manager(const Globals& g) {
  std::optional<std::filesystem::path> explicit_path;
  if (!g.config.empty()) explicit_path = g.config;
  const auto path = service::resolve_config_path(explicit_path);
  service::Config cfg = path ? service::load_config(*path) : service::default_config();
  if (!g.root.empty()) cfg.projects_root = g.root;
  cfg.validate();
  return std::make_shared<RunManager>(std::make_shared<service::Workspace>(cfg.projects_root), cfg);
}

/// "PATH=VALUE" where VALUE is JSON, "<number> <unit>", or text.
service::ScenarioChange parse_assignment(const std::string& text) {
  const size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::usage, "expected PATH=VALUE, got '" + text + "'");
  service::ScenarioChange c{trim(text.substr(0, eq)), {}};
  const std::string v = trim(text.substr(eq + 1));
  static const std::regex number_unit(R"(^([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s+(\S+)$)");
  std::smatch m;
  if (std::regex_match(v, m, number_unit) && units::known(m[2].str())) {
    c.value = store::quantity(std::stod(m[1].str()), m[2].str());
    return c;
  }
  try {
    c.value = Json::parse(v);
  } catch (const Json::parse_error&) {
    c.value = v;
  }
  return c;
}

std::string fmt_quantity(const Json& q) {
  if (!store::is_quantity(q)) return q.dump();
  const std::string unit = q["unit"].get<std::string>();
  return format_number(q["value"].get<double>()) + (unit == "1" ? "" : unit == "%" ? "%" : " " + unit);
}

void print_scorecard(std::ostream& out, const Json& payload) {
  const Json& sc = payload["scorecard"];
  out << "Scorecard for " << payload["project_id"].get<std::string>();
  if (payload["scenario_id"].is_string()) out << " (scenario " << payload["scenario_id"].get<std::string>() << ")";
  out << "\n";
  const Json credits = sc.value("credits", Json::object());
  for (const auto& [id, r] : credits.items()) {
    out << "  " << id << "  " << r.value("status", std::string("?")) << "  " << fmt_quantity(r["awarded_points"]) << " pt\n";
  }
  out << "Total: " << fmt_quantity(sc["total_points"]) << " of " << fmt_quantity(sc["max_points"]) << " points; coverage "
      << fmt_quantity(sc["coverage_percent"]) << " (" << fmt_quantity(sc["automated"]) << " of "
      << fmt_quantity(sc["targeted"]) << " credits automated)\n";
  if (payload.contains("delta")) out << "Change against base: " << fmt_quantity(payload["delta"]["total_points"]) << " points\n";
  const auto& gaps = payload.value("gaps", Json::array());
  if (!gaps.empty()) out << gaps.size() << " gap(s); use --json for details\n";
}

std::string describe_event(const Json& e) {
  const std::string kind = e.value("event", "");
  if (kind == "transition") {
    std::string s = e["task"].get<std::string>() + ": " + e["from"].get<std::string>() + " -> " + e["to"].get<std::string>();
    if (e.contains("error")) s += " (" + e["error"].get<std::string>() + ")";
    return s;
  }
  if (kind == "terminal") return "run " + e.value("state", std::string("?"));
  return kind + ": " + e.dump();
}

int exit_for(service::JobState s) {
  return s == service::JobState::done ? kOk : s == service::JobState::degraded ? kDegraded : kFailure;
}

int report_error(std::ostream& err, const Error& e, bool json) {
  if (json) {
    err << service::error_body(e).dump(2) << "\n";
  } else {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    for (const auto& d : e.details()) err << "  " << d << "\n";
  }
  return e.code() == ErrorCode::usage ? kUsage : kFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Offline LEED certification review: projects, pipeline runs, scenarios and reports.", "leedw"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Configuration file (default: $LEEDW_CONFIG, then ./leedw.json)");
  app.add_option("--root", g.root, "Projects directory (overrides the configuration)");
  app.add_flag("--json", g.json, "Machine-readable output");

  std::string descriptor;
  auto* init = app.add_subcommand("init", "Create a project from a descriptor file");
  init->add_option("descriptor", descriptor, "Project descriptor JSON")->required();

  std::string project, scope = "full", scenario;
  auto* run_cmd = app.add_subcommand("run", "Run the review pipeline and print the scorecard");
  run_cmd->add_option("project", project, "Project id")->required();
  run_cmd->add_option("--scope", scope, "full or stale")->check(CLI::IsMember({"full", "stale"}));
  run_cmd->add_option("--scenario", scenario, "Run a scenario overlay instead of the base project");

  std::string run_id;
  auto* status = app.add_subcommand("status", "Show a run's state and task progress");
  status->add_option("run_id", run_id, "Run id")->required();
  bool show_events = false;
  status->add_flag("--events", show_events, "Print the run log");

  auto* scorecard = app.add_subcommand("scorecard", "Show the credit scorecard");
  scorecard->add_option("project", project, "Project id")->required();
  scorecard->add_option("--scenario", scenario, "Scenario id; adds the change against the base project");

  std::string section, set_text, author = "cli";
  bool markdown = false;
  auto* report = app.add_subcommand("report", "Show or edit the draft report");
  report->add_option("project", project, "Project id")->required();
  report->add_option("--section", section, "Credit id of one section");
  report->add_option("--set-text", set_text, "Replace the section text (needs --section)");
  report->add_option("--author", author, "Author recorded with an edit");
  report->add_flag("--markdown", markdown, "Print the Markdown export");

  std::string name = "scenario";
  std::vector<std::string> assignments;
  auto* scen = app.add_subcommand("scenario", "Create a what-if scenario over project inputs");
  scen->add_option("project", project, "Project id")->required();
  scen->add_option("--name", name, "Scenario name");
  scen->add_option("--set", assignments, "PATH=VALUE, e.g. '$.inputs.building.envelope[2].u_value=1.2 W/(m2.K)'");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return kUsage;
  }

  try {
    auto rm = open_manager(g);
    const auto emit = [&](const Json& j) { out << j.dump(2) << "\n"; };

    if (*init) {
      const std::filesystem::path file = descriptor;
      Json d;
      try {
        d = Json::parse(read_file(file));
      } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::parse, file.string() + ": " + e.what());
      }
      const Json r = service::create_project(*rm, d, std::filesystem::absolute(file).parent_path());
      if (g.json) emit(r);
      else out << "created project " << r["project_id"].get<std::string>() << "\n";
      return kOk;
    }

    if (*run_cmd) {
      std::optional<std::string> sid;
      if (!scenario.empty()) sid = scenario;
      const auto started = rm->start({project, service::parse_scope(scope), sid}, true);
      size_t offset = 0;
      for (bool terminal = false; !terminal;) {
        const auto lines = rm->events(started.run_id, offset, terminal);
        offset += lines.size();
        if (!g.json) {
          for (const auto& l : lines) out << describe_event(Json::parse(l)) << "\n";
        }
        if (!terminal) rm->wait_for_events(started.run_id, offset, std::chrono::milliseconds(200));
      }
      const auto job = rm->wait(started.run_id);
      Json card;
      try {
        card = service::get_scorecard(*rm, project, sid);
      } catch (const Error&) {
        card = nullptr;
      }
      if (g.json) {
        emit({{"run", job.to_json()}, {"scorecard", card}});
      } else {
        out << "run " << job.run_id << ": " << service::to_string(job.state) << "\n";
        if (job.error) out << "error: " << *job.error << "\n";
        if (!card.is_null()) print_scorecard(out, card);
      }
      return exit_for(job.state);
    }

    if (*status) {
      const auto job = rm->get(run_id);
      if (g.json) {
        Json j = job.to_json();
        if (show_events) {
          bool terminal = false;
          Json ev = Json::array();
          for (const auto& l : rm->events(run_id, 0, terminal)) ev.push_back(Json::parse(l));
          j["events"] = ev;
        }
        emit(j);
      } else {
        out << job.run_id << " (" << job.project_id << ", " << service::to_string(job.scope) << "): "
            << service::to_string(job.state) << "\n";
        for (const auto& [id, st] : job.progress) {
          out << "  " << id << "  " << orchestrator::to_string(st.status) << "  attempts " << st.attempts;
          if (st.last_error) out << "  " << *st.last_error;
          out << "\n";
        }
        if (show_events) {
          bool terminal = false;
          for (const auto& l : rm->events(run_id, 0, terminal)) out << l << "\n";
        }
      }
      return kOk;
    }

    if (*scorecard) {
      std::optional<std::string> sid;
      if (!scenario.empty()) sid = scenario;
      const Json card = service::get_scorecard(*rm, project, sid);
      if (g.json) emit(card);
      else print_scorecard(out, card);
      return kOk;
    }

    if (*report) {
      if (!set_text.empty()) {
        if (section.empty()) throw Error(ErrorCode::usage, "--set-text needs --section");
        const Json s = service::patch_report_section(*rm, project, section, {{"text", set_text}, {"author", author}});
        if (g.json) emit(s);
        else out << "section " << section << " revised (" << s["revision_count"].get<size_t>() << " revision(s))\n";
        return kOk;
      }
      if (!section.empty()) {
        const Json s = service::get_report_section(*rm, project, section);
        if (g.json) {
          emit(s);
        } else {
          out << "## " << section << " " << s.value("title", std::string()) << "\n\n" << s["text"].get<std::string>() << "\n";
          for (const auto& f : s["verification"]) {
            out << "  [" << f["verdict"].get<std::string>() << "] " << f["claim_text"].get<std::string>();
            if (!f["store_path"].get<std::string>().empty()) out << " -> " << f["store_path"].get<std::string>();
            out << "\n";
          }
        }
        return kOk;
      }
      const Json r = service::get_report(*rm, project);
      if (g.json && !markdown) emit(r);
      else out << r["markdown"].get<std::string>();
      return kOk;
    }

    if (*scen) {
      Json changes = Json::array();
      for (const auto& a : assignments) {
        const auto c = parse_assignment(a);
        changes.push_back({{"path", c.path}, {"value", c.value}});
      }
      const Json r = service::apply_scenario(*rm, project, {{"name", name}, {"changes", changes}});
      if (g.json) {
        emit(r);
      } else {
        out << "created scenario " << r["scenario_id"].get<std::string>() << "\nstale tasks:";
        for (const auto& t : r["stale"]) out << " " << t.get<std::string>();
        out << "\n";
      }
      return kOk;
    }

    if (*serve) {
      service::Service svc(rm);
      out << "serving on http://" << host << ":" << port << "\n" << std::flush;
      svc.listen(host, port);
      return kOk;
    }
  } catch (const Error& e) {
    return report_error(err, e, g.json);
  } catch (const std::exception& e) {
    return report_error(err, Error(ErrorCode::permanent, e.what()), g.json);
  }
  return kUsage;
}

}  // namespace leedw::cli
