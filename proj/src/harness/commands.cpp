#include "lanetrace/harness/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "lanetrace/errors.hpp"

namespace lanetrace {

using ordered_json = nlohmann::ordered_json;

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::vector<std::size_t> scene_order(std::span<const SceneFile> scenes) {
  std::vector<std::size_t> order(scenes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scenes[a].scene_id < scenes[b].scene_id;
  });
  return order;
}

std::vector<const Trajectory*> selected_agents(const SceneFile& scene, bool all_agents) {
  std::vector<const Trajectory*> out;
  if (all_agents) {
    for (const auto& a : scene.agents) out.push_back(&a);
  } else {
    for (const auto& id : scene.targets) {
      if (const Trajectory* a = scene.find_agent(id)) out.push_back(a);
    }
  }
  return out;
}

namespace {

std::string csv_field(std::string_view v) {
  if (v.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(v);
  std::string out = "\"";
  for (const char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

std::string number_or_empty(double v) { return std::isfinite(v) ? format_number(v) : std::string(); }

}  // namespace

// --- extract ---

std::vector<ExtractRow> run_extract(std::span<const SceneFile> scenes, const Config& cfg) {
  cfg.validate();
  std::vector<std::vector<ExtractRow>> per_scene(scenes.size());
  parallel_for(scenes.size(), cfg.workers, [&](std::size_t i) {
    const SceneFile& scene = scenes[i];
    for (const Trajectory* agent : selected_agents(scene, cfg.all_agents)) {
      const Extraction ex = extract_maneuver(*agent, scene.graph, cfg);
      ExtractRow row{scene.scene_id, agent->agent_id, ex.status, ex.label, {}};
      if (ex.sequence) row.lane_sequence = ex.sequence->segment_ids();
      per_scene[i].push_back(std::move(row));
    }
  });
  std::vector<ExtractRow> rows;
  for (const std::size_t i : scene_order(scenes)) {
    for (auto& r : per_scene[i]) rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_extract(std::span<const ExtractRow> rows, OutputFormat format) {
  if (format == OutputFormat::Json) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json j;
      j["scene_id"] = r.scene_id;
      j["agent_id"] = r.agent_id;
      j["status"] = std::string(to_string(r.status));
      if (r.label) {
        j["turn"] = std::string(to_string(r.label->turn));
        j["lane_change"] = std::string(to_string(r.label->lane_change));
        j["confidence"] = r.label->source_sequence_confidence;
      } else {
        j["turn"] = nullptr;
        j["lane_change"] = nullptr;
        j["confidence"] = nullptr;
      }
      j["lane_sequence"] = r.lane_sequence;
      arr.push_back(std::move(j));
    }
    return ordered_json{{"rows", std::move(arr)}}.dump(1) + "\n";
  }

  std::string out = "scene_id,agent_id,status,turn,lane_change,confidence,lane_sequence\n";
  for (const auto& r : rows) {
    out += csv_field(r.scene_id) + "," + csv_field(r.agent_id) + "," + std::string(to_string(r.status)) + ",";
    if (r.label) {
      out += std::string(to_string(r.label->turn)) + "," + std::string(to_string(r.label->lane_change)) +
             "," + format_number(r.label->source_sequence_confidence);
    } else {
      out += ",,";
    }
    out += "," + csv_field(join(r.lane_sequence, ";")) + "\n";
  }
  return out;
}

// --- analyze ---

namespace {

struct AgentAnalysis {
  std::string split;
  DynamicsSummary dynamics;
  std::optional<ManeuverLabel> label;
};

}  // namespace

AnalysisReport run_analyze(std::span<const SceneFile> scenes, const Config& cfg) {
  cfg.validate();
  std::vector<std::vector<AgentAnalysis>> per_scene(scenes.size());
  parallel_for(scenes.size(), cfg.workers, [&](std::size_t i) {
    const SceneFile& scene = scenes[i];
    for (const Trajectory* agent : selected_agents(scene, cfg.all_agents)) {
      const Extraction ex = extract_maneuver(*agent, scene.graph, cfg);
      per_scene[i].push_back({scene.split, summarize_dynamics(*agent, scene.graph, ex), ex.label});
    }
  });

  std::map<std::string, std::vector<const AgentAnalysis*>> by_split;
  for (const std::size_t i : scene_order(scenes)) {
    for (const auto& a : per_scene[i]) by_split[a.split].push_back(&a);
  }

  AnalysisReport report;
  for (const auto& [split, agents] : by_split) {
    SplitAnalysis s;
    s.split = split;
    s.agents = agents.size();
    std::vector<double> vel, acc, curv;
    for (const AgentAnalysis* a : agents) {
      vel.push_back(a->dynamics.avg_velocity);
      acc.push_back(a->dynamics.avg_acceleration);
      if (a->dynamics.max_driven_curvature) curv.push_back(*a->dynamics.max_driven_curvature);
      if (a->label) {
        ++s.turn[static_cast<std::size_t>(a->label->turn)];
        ++s.lane_change[static_cast<std::size_t>(a->label->lane_change)];
      } else {
        ++s.no_sequence;
      }
    }
    s.velocity = build_histogram(vel, cfg.bins.velocity);
    s.acceleration = build_histogram(acc, cfg.bins.acceleration);
    s.curvature = build_histogram(curv, cfg.bins.curvature);
    report.splits.push_back(std::move(s));
  }
  return report;
}

namespace {

struct CountRow {
  std::string group;
  std::size_t count;
};

std::vector<CountRow> histogram_rows(const Histogram& h, double scale) {
  std::vector<CountRow> rows;
  const auto labels = bin_labels(BinEdges(h.edges), scale);
  for (std::size_t i = 0; i < labels.size(); ++i) rows.push_back({labels[i], h.counts[i]});
  rows.push_back({"underflow", h.underflow});
  rows.push_back({"overflow", h.overflow});
  return rows;
}

// Quantity name -> rows, in report order.
std::vector<std::pair<std::string, std::vector<CountRow>>> split_tables(const SplitAnalysis& s) {
  std::vector<std::pair<std::string, std::vector<CountRow>>> out;
  out.emplace_back("velocity", histogram_rows(s.velocity, 1.0));
  out.emplace_back("acceleration", histogram_rows(s.acceleration, 1.0));
  auto curv = histogram_rows(s.curvature, display_scale(Dimension::Curvature));
  curv.push_back({std::string(kNoSequenceGroup), s.no_sequence});
  out.emplace_back("curvature", std::move(curv));

  std::vector<CountRow> turn, lc;
  for (std::size_t i = 0; i < 4; ++i) {
    turn.push_back({std::string(display_name(static_cast<TurnManeuver>(i))), s.turn[i]});
    lc.push_back({std::string(display_name(static_cast<LaneChangeManeuver>(i))), s.lane_change[i]});
  }
  turn.push_back({std::string(kNoSequenceGroup), s.no_sequence});
  lc.push_back({std::string(kNoSequenceGroup), s.no_sequence});
  out.emplace_back("turn", std::move(turn));
  out.emplace_back("lane_change", std::move(lc));
  return out;
}

double ratio(std::size_t count, std::size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
}

}  // namespace

std::string format_analysis(const AnalysisReport& report, OutputFormat format) {
  if (format == OutputFormat::Json) {
    ordered_json splits = ordered_json::array();
    for (const auto& s : report.splits) {
      ordered_json js;
      js["split"] = s.split;
      js["agents"] = s.agents;
      for (const auto& [quantity, rows] : split_tables(s)) {
        ordered_json groups = ordered_json::array();
        for (const auto& r : rows) {
          groups.push_back({{"group", r.group}, {"count", r.count}, {"ratio", ratio(r.count, s.agents)}});
        }
        js[quantity] = std::move(groups);
      }
      splits.push_back(std::move(js));
    }
    return ordered_json{{"splits", std::move(splits)}}.dump(1) + "\n";
  }

  std::string out = "split,quantity,group,count,ratio\n";
  for (const auto& s : report.splits) {
    for (const auto& [quantity, rows] : split_tables(s)) {
      for (const auto& r : rows) {
        out += csv_field(s.split) + "," + quantity + "," + csv_field(r.group) + "," +
               std::to_string(r.count) + "," + format_number(ratio(r.count, s.agents)) + "\n";
      }
    }
  }
  return out;
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string safe_file_stem(std::string_view s) {
  std::string out;
  for (const char c : s) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  }
  return out;
}

}  // namespace

std::string render_bar_chart_svg(const std::string& title, const std::vector<std::string>& labels,
                                 const std::vector<std::size_t>& counts) {
  constexpr int kWidth = 720, kHeight = 400, kLeft = 50, kRight = 20, kTop = 40, kBottom = 90;
  const int plot_w = kWidth - kLeft - kRight;
  const int plot_h = kHeight - kTop - kBottom;
  const std::size_t n = std::max<std::size_t>(1, counts.size());
  const std::size_t max_count = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  const double slot = static_cast<double>(plot_w) / static_cast<double>(n);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << xml_escape(title) << "</text>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
      << kTop + plot_h << "\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double h = max_count == 0 ? 0.0 : plot_h * static_cast<double>(counts[i]) / static_cast<double>(max_count);
    const double x = kLeft + slot * static_cast<double>(i) + slot * 0.1;
    const double y = kTop + plot_h - h;
    svg << "<rect x=\"" << format_number(x) << "\" y=\"" << format_number(y) << "\" width=\""
        << format_number(slot * 0.8) << "\" height=\"" << format_number(h) << "\" fill=\"#4a7ebb\"/>\n";
    const double cx = x + slot * 0.4;
    svg << "<text x=\"" << format_number(cx) << "\" y=\"" << format_number(y - 4)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << counts[i] << "</text>\n";
    const std::string label = i < labels.size() ? labels[i] : std::string();
    svg << "<text x=\"" << format_number(cx) << "\" y=\"" << kTop + plot_h + 14
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" transform=\"rotate(-35 "
        << format_number(cx) << " " << kTop + plot_h + 14 << ")\">" << xml_escape(label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::map<std::string, std::string> render_analysis_svgs(const AnalysisReport& report) {
  std::map<std::string, std::string> files;
  for (const auto& s : report.splits) {
    for (const auto& [quantity, rows] : split_tables(s)) {
      std::vector<std::string> labels;
      std::vector<std::size_t> counts;
      for (const auto& r : rows) {
        labels.push_back(r.group);
        counts.push_back(r.count);
      }
      files[safe_file_stem(s.split) + "_" + quantity + ".svg"] =
          render_bar_chart_svg(s.split + ": " + quantity, labels, counts);
    }
  }
  return files;
}

// --- evaluate ---

EvaluationResult run_evaluate(std::span<const SceneFile> scenes, const PredictionFile& predictions,
                              const Config& cfg) {
  cfg.validate();
  std::map<std::string, std::size_t> scene_index;
  for (std::size_t i = 0; i < scenes.size(); ++i) scene_index.emplace(scenes[i].scene_id, i);

  struct Job {
    const PredictionSet* pred;
    const SceneFile* scene;
    const Trajectory* agent;
  };
  std::vector<Job> jobs;
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < predictions.predictions.size(); ++i) {
    const auto& p = predictions.predictions[i];
    const std::string where = "/predictions/" + std::to_string(i);
    const auto it = scene_index.find(p.scene_id);
    const SceneFile* scene = it == scene_index.end() ? nullptr : &scenes[it->second];
    const Trajectory* agent = nullptr;
    if (scene != nullptr) {
      const bool is_target = std::find(scene->targets.begin(), scene->targets.end(), p.agent_id) != scene->targets.end();
      if (is_target || cfg.all_agents) agent = scene->find_agent(p.agent_id);
    }
    if (agent == nullptr) {
      problems.push_back(where + ": missing key (" + p.scene_id + ", " + p.agent_id + ")");
      continue;
    }
    if (p.modes.size() < cfg.modes) {
      problems.push_back(where + ": " + std::to_string(p.modes.size()) + " modes, expected " +
                         std::to_string(cfg.modes));
      continue;
    }
    if (p.horizon() != static_cast<std::size_t>(cfg.pred_steps)) {
      problems.push_back(where + ": horizon " + std::to_string(p.horizon()) + ", expected " +
                         std::to_string(cfg.pred_steps));
      continue;
    }
    const long long begin = cfg.obs_steps - agent->first_timestep;
    if (begin < 0 || begin + cfg.pred_steps > static_cast<long long>(agent->positions.size())) {
      problems.push_back(where + ": agent '" + agent->agent_id + "' has no ground truth for timesteps [" +
                         std::to_string(cfg.obs_steps) + ", " + std::to_string(cfg.obs_steps + cfg.pred_steps) + ")");
      continue;
    }
    jobs.push_back({&p, scene, agent});
  }
  if (!problems.empty()) throw InputError(InputError::Kind::Validation, "predictions", problems);

  // Fixed record order keeps the floating-point sums independent of scheduling.
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    return std::tie(a.pred->scene_id, a.pred->agent_id) < std::tie(b.pred->scene_id, b.pred->agent_id);
  });

  EvaluationResult result;
  result.records.resize(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    PredictionSet used{job.pred->scene_id, job.pred->agent_id,
                       {job.pred->modes.begin(), job.pred->modes.begin() + static_cast<std::ptrdiff_t>(cfg.modes)}};
    const auto begin = job.agent->positions.begin() + (cfg.obs_steps - job.agent->first_timestep);
    const std::vector<Point2> gt(begin, begin + cfg.pred_steps);

    const Extraction ex = extract_maneuver(*job.agent, job.scene->graph, cfg);
    const DynamicsSummary dyn = summarize_dynamics(*job.agent, job.scene->graph, ex);

    MetricRecord& r = result.records[i];
    r.scene_id = used.scene_id;
    r.agent_id = used.agent_id;
    r.min_ade = min_ade(used, gt);
    r.min_fde = min_fde(used, gt);
    r.avg_velocity = dyn.avg_velocity;
    r.avg_acceleration = dyn.avg_acceleration;
    r.max_curvature = dyn.max_driven_curvature;
    if (ex.label) {
      r.turn = ex.label->turn;
      r.lane_change = ex.label->lane_change;
    }
  });

  for (const Dimension d : kAllDimensions) result.reports.push_back(grouped_evaluate(result.records, d, cfg.bins));
  return result;
}

std::string format_evaluation(const EvaluationResult& result, OutputFormat format, int std_ddof) {
  if (format == OutputFormat::Json) {
    ordered_json tables = ordered_json::array();
    for (const auto& rep : result.reports) {
      ordered_json t;
      t["dimension"] = std::string(to_string(rep.dimension));
      t["title"] = std::string(dimension_title(rep.dimension));
      ordered_json groups = ordered_json::array();
      for (const auto& row : rep.rows) {
        ordered_json g;
        g["group"] = row.label;
        g["n"] = row.ade.n;
        g["min_ade"] = {{"mean", number_or_null(row.ade.mean())}, {"std", number_or_null(row.ade.stddev(std_ddof))}};
        g["min_fde"] = {{"mean", number_or_null(row.fde.mean())}, {"std", number_or_null(row.fde.stddev(std_ddof))}};
        groups.push_back(std::move(g));
      }
      t["groups"] = std::move(groups);
      tables.push_back(std::move(t));
    }
    return ordered_json{{"samples", result.records.size()}, {"tables", std::move(tables)}}.dump(1) + "\n";
  }

  std::string out = "dimension,group,n,min_ade_mean,min_ade_std,min_fde_mean,min_fde_std\n";
  for (const auto& rep : result.reports) {
    for (const auto& row : rep.rows) {
      out += std::string(to_string(rep.dimension)) + "," + csv_field(row.label) + "," + std::to_string(row.ade.n) +
             "," + number_or_empty(row.ade.mean()) + "," + number_or_empty(row.ade.stddev(std_ddof)) + "," +
             number_or_empty(row.fde.mean()) + "," + number_or_empty(row.fde.stddev(std_ddof)) + "\n";
    }
  }
  return out;
}

}  // namespace lanetrace
