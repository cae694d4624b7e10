// Command-line front end for the bezmap library: synthetic corpus
// generation, Bezier ground-truth conversion, restoration, instance-level
// evaluation, GT reliability verification, statistics, rendering, and a
// loss/matching demo over document pairs.
//
// Exit codes: 0 success, 1 validation or processing error, 2 usage error.

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bezmap/bezmap.hpp"

namespace {

using bezmap::Json;

std::vector<double> parse_threshold_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw bezmap::ConfigError("invalid threshold value: '" + item + "'");
    }
  }
  if (out.empty()) throw bezmap::ConfigError("no thresholds given");
  return out;
}

// "name=k,n" entries separated by ';', e.g.
// "lane-divider=3,2;ped-crossing=1,1;road-boundary=7,3".
void apply_class_overrides(std::vector<bezmap::MapClass>& taxonomy, const std::string& text) {
  std::stringstream ss(text);
  std::string entry;
  while (std::getline(ss, entry, ';')) {
    if (entry.empty()) continue;
    const auto eq = entry.find('=');
    const auto comma = entry.find(',', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || comma == std::string::npos) {
      throw bezmap::ConfigError("invalid class override '" + entry + "', expected name=k,n");
    }
    const std::string name = entry.substr(0, eq);
    int k = 0;
    int n = 0;
    try {
      k = std::stoi(entry.substr(eq + 1, comma - eq - 1));
      n = std::stoi(entry.substr(comma + 1));
    } catch (const std::exception&) {
      throw bezmap::ConfigError("invalid class override '" + entry + "', expected name=k,n");
    }
    bool found = false;
    for (bezmap::MapClass& cls : taxonomy) {
      if (cls.name == name) {
        cls.bezier_config.max_pieces = k;
        cls.bezier_config.degree = n;
        found = true;
      }
    }
    if (!found) throw bezmap::ConfigError("class override names unknown class '" + name + "'");
  }
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    bezmap::write_file(out_path, content);
  }
}

struct CommonGenOptions {
  double epsilon{0.0};  // 0 = keep per-class defaults
  int samples{0};       // 0 = keep per-class defaults
  std::string classes;
};

void apply_gen_overrides(std::vector<bezmap::MapClass>& taxonomy, const CommonGenOptions& opt) {
  if (!opt.classes.empty()) apply_class_overrides(taxonomy, opt.classes);
  for (bezmap::MapClass& cls : taxonomy) {
    if (opt.epsilon > 0.0) cls.bezier_config.tolerance = opt.epsilon;
    if (opt.samples > 0) cls.bezier_config.samples = opt.samples;
  }
}

// Optional corpus parameter file, schema "bezmap-synth/1"; any field may be
// omitted to keep the built-in default. configs/synth-default.json mirrors
// the defaults.
bezmap::CorpusSpec load_corpus_config(const std::string& path, bezmap::CorpusSpec base) {
  Json doc;
  try {
    doc = Json::parse(bezmap::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw bezmap::ParseError("synth config: invalid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object() || !doc.contains("schema") || doc["schema"] != "bezmap-synth/1") {
    throw bezmap::ParseError("synth config: expected schema 'bezmap-synth/1'");
  }
  auto num = [&](const char* key, double& slot) {
    if (doc.contains(key)) {
      if (!doc[key].is_number()) throw bezmap::ParseError(std::string("synth config: ") + key);
      slot = doc[key].get<double>();
    }
  };
  if (doc.contains("per_class")) base.per_class = doc["per_class"].get<int>();
  num("noise", base.noise);
  num("divider_length_min", base.divider_length_min);
  num("divider_length_max", base.divider_length_max);
  num("divider_amplitude_min", base.divider_amplitude_min);
  num("divider_amplitude_max", base.divider_amplitude_max);
  num("crossing_length_min", base.crossing_length_min);
  num("crossing_length_max", base.crossing_length_max);
  num("boundary_length_min", base.boundary_length_min);
  num("boundary_length_max", base.boundary_length_max);
  num("boundary_primary_amplitude_min", base.boundary_primary_amplitude_min);
  num("boundary_primary_amplitude_max", base.boundary_primary_amplitude_max);
  num("boundary_secondary_amplitude_min", base.boundary_secondary_amplitude_min);
  num("boundary_secondary_amplitude_max", base.boundary_secondary_amplitude_max);
  return base;
}

// Matching demo cost: lambda_p * l_point for pairs of the same class and
// shape, a large constant otherwise.
constexpr double kUnmatchableCost = 1e9;


void run_losses(const std::string& pred_path, const std::string& gt_path, int omega, int samples,
                bool grad_check, const std::string& out_path) {
  const bezmap::VectorMap pred = bezmap::parse_map(bezmap::read_file(pred_path));
  const bezmap::VectorMap gt = bezmap::parse_map(bezmap::read_file(gt_path));
  bezmap::require_same_taxonomy(pred, gt);
  for (const bezmap::MapInstance& ins : pred.instances) {
    if (!ins.is_bezier()) {
      throw bezmap::ConfigError("losses: all prediction instances must be in Bezier form");
    }
  }
  for (const bezmap::MapInstance& ins : gt.instances) {
    if (!ins.is_bezier()) {
      throw bezmap::ConfigError("losses: all ground-truth instances must be in Bezier form");
    }
  }
  const bezmap::LossWeights weights{};
  const bezmap::DilationSpec dilation{omega};

  std::vector<std::vector<double>> cost(pred.instances.size(),
                                        std::vector<double>(gt.instances.size(), 0.0));
  for (std::size_t i = 0; i < pred.instances.size(); ++i) {
    for (std::size_t j = 0; j < gt.instances.size(); ++j) {
      const auto& a = pred.instances[i];
      const auto& b = gt.instances[j];
      if (a.class_id != b.class_id || a.bezier().degree() != b.bezier().degree() ||
          a.bezier().piece_count() != b.bezier().piece_count()) {
        cost[i][j] = kUnmatchableCost;
      } else {
        cost[i][j] = weights.point * bezmap::l_point(a.bezier(), b.bezier());
      }
    }
  }

  const std::vector<bezmap::RasterMask> pred_masks =
      bezmap::rasterize(pred, gt.grid, dilation);
  const std::vector<bezmap::RasterMask> gt_masks = bezmap::rasterize(gt, gt.grid, dilation);

  Json report;
  Json pairs = Json::array();
  double total_pcr = 0.0;
  std::vector<std::pair<int, int>> matched;
  for (const auto& [pi, gi] : bezmap::hungarian_match(cost)) {
    if (cost[static_cast<std::size_t>(pi)][static_cast<std::size_t>(gi)] >= kUnmatchableCost) {
      continue;
    }
    matched.emplace_back(pi, gi);
    const bezmap::PiecewiseBezier& pb = pred.instances[static_cast<std::size_t>(pi)].bezier();
    const bezmap::PiecewiseBezier& gb = gt.instances[static_cast<std::size_t>(gi)].bezier();
    const int class_id = gt.instances[static_cast<std::size_t>(gi)].class_id;
    const double point = bezmap::l_point(pb, gb);
    const double curve = bezmap::l_curve(pb, gb, samples);
    const double region =
        bezmap::l_region(pred_masks[static_cast<std::size_t>(class_id)],
                         gt_masks[static_cast<std::size_t>(class_id)],
                         bezmap::restore_points(pb, 100), dilation, gt.grid);
    const double pcr = bezmap::pcr_loss(point, curve, region, weights);
    total_pcr += pcr;
    Json p;
    p["pred_index"] = pi;
    p["gt_index"] = gi;
    p["class_id"] = class_id;
    p["l_point"] = point;
    p["l_curve"] = curve;
    p["l_region"] = region;
    p["pcr"] = pcr;
    pairs.push_back(std::move(p));
  }
  report["pairs"] = std::move(pairs);
  report["matched"] = matched.size();
  report["unmatched_pred"] = pred.instances.size() - matched.size();
  report["unmatched_gt"] = gt.instances.size() - matched.size();
  report["total_pcr"] = total_pcr;

  // Auxiliary supervision per class: semantic masks are the full class
  // rasters, instance masks cover only the matched instances of the class.
  Json aux = Json::array();
  for (const bezmap::MapClass& cls : gt.taxonomy) {
    bezmap::VectorMap pred_ins_map;
    pred_ins_map.taxonomy = gt.taxonomy;
    pred_ins_map.grid = gt.grid;
    bezmap::VectorMap gt_ins_map = pred_ins_map;
    for (const auto& [pi, gi] : matched) {
      if (gt.instances[static_cast<std::size_t>(gi)].class_id != cls.id) continue;
      pred_ins_map.instances.push_back(pred.instances[static_cast<std::size_t>(pi)]);
      gt_ins_map.instances.push_back(gt.instances[static_cast<std::size_t>(gi)]);
    }
    const auto pred_ins_masks = bezmap::rasterize(pred_ins_map, gt.grid, dilation);
    const auto gt_ins_masks = bezmap::rasterize(gt_ins_map, gt.grid, dilation);
    const double value = bezmap::aux_loss(
        pred_masks[static_cast<std::size_t>(cls.id)], gt_masks[static_cast<std::size_t>(cls.id)],
        pred_ins_masks[static_cast<std::size_t>(cls.id)],
        gt_ins_masks[static_cast<std::size_t>(cls.id)], weights);
    Json a;
    a["class_id"] = cls.id;
    a["name"] = cls.name;
    a["aux"] = value;
    aux.push_back(std::move(a));
  }
  report["aux"] = std::move(aux);

  if (grad_check) {
    double max_rel = 0.0;
    int checked = 0;
    for (const auto& [pi, gi] : matched) {
      if (checked >= 5) break;
      ++checked;
      const bezmap::PiecewiseBezier& pb = pred.instances[static_cast<std::size_t>(pi)].bezier();
      const bezmap::PiecewiseBezier& gb = gt.instances[static_cast<std::size_t>(gi)].bezier();
      const double h = 1e-6;
      const auto grad_p = bezmap::grad_l_point(pb.controls(), gb.controls());
      const auto grad_c = bezmap::grad_l_curve(pb, gb, samples);
      auto check = [&](bool curve_loss, const std::vector<bezmap::Vec2>& grad) {
        std::vector<bezmap::Vec2> controls = pb.controls();
        for (std::size_t c = 0; c < controls.size(); ++c) {
          for (int axis = 0; axis < 2; ++axis) {
            double& slot = axis == 0 ? controls[c].x : controls[c].y;
            const double keep = slot;
            auto eval = [&](double v) {
              slot = v;
              const bezmap::PiecewiseBezier moved(pb.degree(), controls, pb.class_id());
              return curve_loss ? bezmap::l_curve(moved, gb, samples)
                                : bezmap::l_point(moved.controls(), gb.controls());
            };
            const double fd = (eval(keep + h) - eval(keep - h)) / (2.0 * h);
            slot = keep;
            const double an = axis == 0 ? grad[c].x : grad[c].y;
            // Normalized against unit loss scale so that difference noise on
            // an exactly-zero gradient does not register as a deviation.
            const double denom = std::max({1.0, std::abs(fd), std::abs(an)});
            max_rel = std::max(max_rel, std::abs(fd - an) / denom);
          }
        }
      };
      check(false, grad_p);
      check(true, grad_c);
    }
    Json g;
    g["pairs_checked"] = checked;
    g["max_relative_deviation"] = max_rel;
    g["ok"] = max_rel <= 1e-4;
    report["grad_check"] = std::move(g);
  }

  emit(report.dump(2) + "\n", out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bezmap: piecewise Bezier vector-map toolkit"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a deterministic synthetic annotation corpus");
  bezmap::CorpusSpec corpus;
  std::string synth_out;
  std::string synth_config;
  synth->add_option("--seed", corpus.seed, "RNG seed");
  synth->add_option("--per-class", corpus.per_class, "Instances per class");
  synth->add_option("--noise", corpus.noise, "Annotation jitter amplitude in meters");
  synth->add_option("--config", synth_config, "Corpus parameter JSON (bezmap-synth/1)");
  synth->add_option("--out", synth_out, "Output file (default stdout)");

  // gengt
  auto* gengt = app.add_subcommand("gengt", "Convert annotations to piecewise Bezier ground truth");
  std::string gengt_in, gengt_out;
  CommonGenOptions gengt_opt;
  gengt->add_option("input", gengt_in, "Annotation document")->required();
  gengt->add_option("--epsilon", gengt_opt.epsilon, "Fitting tolerance override (meters)");
  gengt->add_option("--samples", gengt_opt.samples, "Resample length override");
  gengt->add_option("--classes", gengt_opt.classes, "Per-class <k,n> overrides: name=k,n;...");
  gengt->add_option("--out", gengt_out, "Output file (default stdout)");

  // restore
  auto* restore = app.add_subcommand("restore", "Restore Bezier instances to polylines");
  std::string restore_in, restore_out;
  int restore_samples = 100;
  restore->add_option("input", restore_in, "Ground-truth document")->required();
  restore->add_option("--samples", restore_samples, "Points per restored instance");
  restore->add_option("--out", restore_out, "Output file (default stdout)");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate predictions against ground truth");
  std::string eval_pred, eval_gt, eval_out;
  std::string eval_thresholds = "0.2,0.5,1.0";
  eval->add_option("pred", eval_pred, "Prediction document")->required();
  eval->add_option("gt", eval_gt, "Ground-truth document")->required();
  eval->add_option("--thresholds", eval_thresholds, "Chamfer thresholds in meters");
  eval->add_option("--out", eval_out, "Output file (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "GT reliability: generate, restore, and evaluate");
  std::string verify_in, verify_out;
  std::string verify_thresholds = "0.2,0.5,1.0";
  CommonGenOptions verify_opt;
  verify->add_option("input", verify_in, "Annotation document")->required();
  verify->add_option("--thresholds,--threshold", verify_thresholds,
                     "Chamfer thresholds in meters");
  verify->add_option("--epsilon", verify_opt.epsilon, "Fitting tolerance override (meters)");
  verify->add_option("--samples", verify_opt.samples, "Resample length override");
  verify->add_option("--classes", verify_opt.classes, "Per-class <k,n> overrides: name=k,n;...");
  verify->add_option("--out", verify_out, "Output file (default stdout)");

  // stats
  auto* stats = app.add_subcommand("stats", "Compactness and piece statistics for a doc pair");
  std::string stats_ann, stats_gt, stats_out;
  stats->add_option("annotations", stats_ann, "Annotation document")->required();
  stats->add_option("gt", stats_gt, "Ground-truth document")->required();
  stats->add_option("--out", stats_out, "Output file (default stdout)");

  // render
  auto* render = app.add_subcommand("render", "Render a document as SVG (optionally PGM masks)");
  std::string render_in, render_gt, render_out, render_pgm;
  bool render_cp = false;
  int render_omega = 5;
  render->add_option("input", render_in, "Map document")->required();
  render->add_option("--gt", render_gt, "Overlay document drawn dashed");
  render->add_flag("--control-points", render_cp, "Draw control points as circles");
  render->add_option("--omega", render_omega, "Dilation width for PGM masks");
  render->add_option("--pgm-out", render_pgm, "Prefix for per-class PGM masks");
  render->add_option("--out", render_out, "SVG output file (default stdout)");

  // losses
  auto* losses = app.add_subcommand("losses", "Match instances and report PCR/aux losses");
  std::string losses_pred, losses_gt, losses_out;
  int losses_omega = 5;
  int losses_samples = 100;
  bool losses_grad = false;
  losses->add_option("pred", losses_pred, "Prediction document (Bezier form)")->required();
  losses->add_option("gt", losses_gt, "Ground-truth document (Bezier form)")->required();
  losses->add_option("--omega", losses_omega, "Dilation width for the region loss");
  losses->add_option("--samples", losses_samples, "Samples per segment for the curve loss");
  losses->add_flag("--grad-check", losses_grad, "Check analytic gradients against differences");
  losses->add_option("--out", losses_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(synth)) {
      if (!synth_config.empty()) {
        corpus = load_corpus_config(synth_config, corpus);
      }
      emit(bezmap::write_map(bezmap::synth_corpus(corpus)), synth_out);
    } else if (app.got_subcommand(gengt)) {
      bezmap::VectorMap map = bezmap::parse_map(bezmap::read_file(gengt_in));
      apply_gen_overrides(map.taxonomy, gengt_opt);
      bezmap::VectorMap out;
      out.taxonomy = map.taxonomy;
      out.grid = map.grid;
      int failures = 0;
      for (const bezmap::MapInstance& ins : map.instances) {
        if (ins.is_bezier()) {
          out.instances.push_back(ins);
          continue;
        }
        const bezmap::GenGtConfig& cfg =
            map.taxonomy[static_cast<std::size_t>(ins.class_id)].bezier_config;
        try {
          out.instances.push_back(bezmap::MapInstance{
              ins.class_id, bezmap::gen_gt(ins.polyline(), cfg, ins.class_id), ins.score});
        } catch (const bezmap::Error& e) {
          ++failures;
          out.instances.push_back(ins);  // kept in annotation form
          std::cerr << "warning: instance kept as polyline: " << e.what() << "\n";
        }
      }
      if (failures > 0) std::cerr << "warning: " << failures << " instance(s) not converted\n";
      emit(bezmap::write_map(out), gengt_out);
    } else if (app.got_subcommand(restore)) {
      bezmap::VectorMap map = bezmap::parse_map(bezmap::read_file(restore_in));
      bezmap::VectorMap out;
      out.taxonomy = map.taxonomy;
      out.grid = map.grid;
      for (const bezmap::MapInstance& ins : map.instances) {
        if (!ins.is_bezier()) {
          out.instances.push_back(ins);
          continue;
        }
        out.instances.push_back(bezmap::MapInstance{
            ins.class_id,
            bezmap::Polyline(bezmap::restore_points(ins.bezier(), restore_samples)), ins.score});
      }
      emit(bezmap::write_map(out), restore_out);
    } else if (app.got_subcommand(eval)) {
      const bezmap::VectorMap pred = bezmap::parse_map(bezmap::read_file(eval_pred));
      const bezmap::VectorMap gt = bezmap::parse_map(bezmap::read_file(eval_gt));
      const bezmap::EvalReport report =
          bezmap::evaluate_map(pred, gt, parse_threshold_list(eval_thresholds));
      emit(bezmap::write_report(report), eval_out);
    } else if (app.got_subcommand(verify)) {
      bezmap::VectorMap map = bezmap::parse_map(bezmap::read_file(verify_in));
      apply_gen_overrides(map.taxonomy, verify_opt);
      int failed = 0;
      const bezmap::EvalReport report =
          bezmap::verify_corpus(map, parse_threshold_list(verify_thresholds), &failed);
      if (failed > 0) std::cerr << "warning: " << failed << " instance(s) failed conversion\n";
      emit(bezmap::write_report(report), verify_out);
    } else if (app.got_subcommand(stats)) {
      const bezmap::VectorMap ann = bezmap::parse_map(bezmap::read_file(stats_ann));
      const bezmap::VectorMap gt = bezmap::parse_map(bezmap::read_file(stats_gt));
      emit(bezmap::write_stats(bezmap::compute_stats(ann, gt)), stats_out);
    } else if (app.got_subcommand(render)) {
      const bezmap::VectorMap map = bezmap::parse_map(bezmap::read_file(render_in));
      std::optional<bezmap::VectorMap> overlay;
      if (!render_gt.empty()) overlay = bezmap::parse_map(bezmap::read_file(render_gt));
      bezmap::SvgOptions opt;
      opt.control_points = render_cp;
      emit(bezmap::render_svg(map, map.grid, opt, overlay ? &*overlay : nullptr), render_out);
      if (!render_pgm.empty()) {
        const std::vector<bezmap::RasterMask> masks =
            bezmap::rasterize(map, map.grid, bezmap::DilationSpec{render_omega});
        for (std::size_t i = 0; i < masks.size(); ++i) {
          bezmap::write_file(render_pgm + "-" + map.taxonomy[i].name + ".pgm",
                             bezmap::write_pgm(masks[i]));
        }
      }
    } else if (app.got_subcommand(losses)) {
      run_losses(losses_pred, losses_gt, losses_omega, losses_samples, losses_grad, losses_out);
    }
  } catch (const bezmap::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
