// Command-line front end. Loads a JSON model document, dispatches to the
// library, and emits a JSON report or a CSV curve. Exit codes: 0 success,
// 1 validation/usage failure, 2 solver non-convergence, 3 I/O failure.
// Nothing is written to --output unless the run succeeds.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seminfo/seminfo.hpp"

namespace {

using namespace seminfo;

// Raised by command runners when a solver reports converged = false.
struct SolverStalled : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  SolverConfig cfg;
  double lambda_min = 0.01;
  double lambda_max = 64.0;
  std::size_t lambda_steps = 64;
  std::string output;  // empty means stdout
};

void add_global_flags(CLI::App* cmd, GlobalFlags& g) {
  cmd->add_option("--tol", g.cfg.tol, "solver convergence tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iter", g.cfg.max_iter, "iteration cap per solve")
      ->capture_default_str();
  cmd->add_option("--starts", g.cfg.starts, "ascent restarts for semantic capacity")
      ->capture_default_str();
  cmd->add_option("--seed", g.cfg.seed, "64-bit decimal seed for randomized work")
      ->capture_default_str();
  cmd->add_option("--lambda-min", g.lambda_min, "smallest trade-off multiplier in sweeps")
      ->capture_default_str();
  cmd->add_option("--lambda-max", g.lambda_max, "largest trade-off multiplier in sweeps")
      ->capture_default_str();
  cmd->add_option("--lambda-steps", g.lambda_steps, "points per rate-distortion sweep")
      ->capture_default_str();
  cmd->add_option("--grid-step", g.cfg.grid_step,
                  "resolution of the exhaustive comparison sweep (--oracle)")
      ->capture_default_str();
  cmd->add_option("-o,--output", g.output, "write the result here instead of stdout");
}

SweepSpec make_sweep(const GlobalFlags& g) {
  SweepSpec sweep;
  sweep.lambda_min = g.lambda_min;
  sweep.lambda_max = g.lambda_max;
  sweep.steps = g.lambda_steps;
  return sweep;
}

MiVariant parse_variant(const std::string& v) {
  return v == "up" ? MiVariant::Up : MiVariant::Eq5;
}

const char* method_name(CapacityMethod m) {
  switch (m) {
    case CapacityMethod::BlahutArimoto: return "alternating";
    case CapacityMethod::RepresentativeEnum: return "enumerate";
    case CapacityMethod::MultiStart: return "ascent";
    case CapacityMethod::GridOracle: return "grid";
  }
  return "unknown";
}

JointSynonymousMapping joint_mapping_of(const ModelDocument& doc,
                                        const SynonymousMapping& fx,
                                        const SynonymousMapping& fy) {
  if (doc.joint_mapping) {
    std::vector<std::size_t> cells;
    for (const auto& row : *doc.joint_mapping)
      for (std::size_t c : row) cells.push_back(c);
    return JointSynonymousMapping(std::move(cells), fx.domain_size(), fy.domain_size());
  }
  return JointSynonymousMapping::product(fx, fy);
}

// Class-level distortion for the semantic solvers: the model's matrix when it
// provides one, otherwise 0/1 class mismatch.
DistortionMatrix class_distortion_of(const ModelDocument& doc, std::size_t num_classes) {
  if (doc.distortion || doc.distortion_file) return doc.make_distortion();
  return class_mismatch_distortion(num_classes);
}

std::string report_json(const GlobalFlags& g, const std::string& command,
                        const std::function<void(JsonWriter&)>& fill) {
  JsonWriter w;
  w.begin_object();
  w.key("tool").value("seminfo");
  w.key("version").value(kToolVersion);
  w.key("command").value(command);
  w.key("config").begin_object();
  w.key("tol").value(g.cfg.tol);
  w.key("max_iter").value(static_cast<std::uint64_t>(g.cfg.max_iter));
  w.key("starts").value(static_cast<std::uint64_t>(g.cfg.starts));
  w.key("seed").value(static_cast<std::uint64_t>(g.cfg.seed));
  w.key("lambda_min").value(g.lambda_min);
  w.key("lambda_max").value(g.lambda_max);
  w.key("lambda_steps").value(static_cast<std::uint64_t>(g.lambda_steps));
  w.key("grid_step").value(g.cfg.grid_step);
  w.end_object();
  w.key("results").begin_object();
  fill(w);
  w.end_object();
  w.end_object();
  return w.str() + "\n";
}

void put_distribution(JsonWriter& w, const char* key, const Distribution& p) {
  w.key(key).begin_array();
  for (std::size_t i = 0; i < p.size(); ++i) w.value(p[i]);
  w.end_array();
}

// Two-column sample file: prior state then symbol, integers, '#' comments.
SampleSet load_samples(const std::string& path, std::size_t n_k, std::size_t n_x) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sample file: " + path);
  SampleSet s;
  std::size_t max_k = 0, max_x = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto pos = line.find('#');
    if (pos != std::string::npos) line.erase(pos);
    const auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (fields.size() != 2)
      throw ValidationError(where + ": expected two integers per sample, got " +
                            std::to_string(fields.size()) + " fields");
    const double kd = detail::parse_number(fields[0], where);
    const double xd = detail::parse_number(fields[1], where);
    if (kd < 0 || xd < 0 || kd != static_cast<double>(static_cast<std::size_t>(kd)) ||
        xd != static_cast<double>(static_cast<std::size_t>(xd)))
      throw ValidationError(where + ": samples must be nonnegative integers");
    const auto k = static_cast<std::size_t>(kd);
    const auto x = static_cast<std::size_t>(xd);
    max_k = std::max(max_k, k);
    max_x = std::max(max_x, x);
    s.pairs.emplace_back(k, x);
  }
  if (in.bad()) throw IoError("cannot read sample file: " + path);
  s.n_k = n_k > 0 ? n_k : max_k + 1;
  s.n_x = n_x > 0 ? n_x : max_x + 1;
  return s;
}

void require_converged(bool converged, const std::string& what) {
  if (!converged)
    throw SolverStalled(what + " did not converge within --max-iter; raise the cap "
                               "or loosen --tol");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seminfo: information measures, capacities and rate-distortion "
               "trade-offs for sources whose symbols share meanings"};
  app.require_subcommand(1);

  GlobalFlags g;
  std::string model_path;
  std::string variant_name;
  std::string path_name = "auto";
  std::string representative = "lowest";
  std::string method = "cosine";
  std::string samples_path;
  std::size_t trials = 100000;
  std::size_t arg_nk = 0, arg_nx = 0, arg_classes = 0;
  double smoothing = 1.0;
  std::vector<std::size_t> sizes;
  bool with_oracle = false;

  std::string out_text;  // produced by the selected command, written at the end

  auto model_arg = [&](CLI::App* cmd) {
    cmd->add_option("model", model_path, "path of the JSON model document")->required();
  };

  // ---- entropy ------------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand("entropy", "entropy of the model's source, bits");
    model_arg(cmd);
    add_global_flags(cmd, g);
    cmd->callback([&] {
      const ModelDocument doc = parse_model(model_path);
      const Distribution p = doc.make_source();
      out_text = report_json(g, "entropy", [&](JsonWriter& w) {
        w.key("entropy_bits").value(entropy(p));
      });
    });
  }

  // ---- semantic-entropy ---------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand(
        "semantic-entropy", "entropy of the source after merging synonymous symbols");
    model_arg(cmd);
    add_global_flags(cmd, g);
    cmd->callback([&] {
      const ModelDocument doc = parse_model(model_path);
      const Distribution p = doc.make_source();
      const SynonymousMapping f = doc.make_mapping();
      out_text = report_json(g, "semantic-entropy", [&](JsonWriter& w) {
        w.key("entropy_bits").value(entropy(p));
        w.key("semantic_entropy_bits").value(semantic_entropy(p, f));
        w.key("num_classes").value(static_cast<std::uint64_t>(f.num_classes()));
      });
    });
  }

  // ---- mi -----------------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand(
        "mi", "mutual information between channel input and output, bits");
    model_arg(cmd);
    add_global_flags(cmd, g);
    cmd->callback([&] {
      const ModelDocument doc = parse_model(model_path);
      const JointDistribution j = joint_from(doc.make_source(), doc.make_channel());
      out_text = report_json(g, "mi", [&](JsonWriter& w) {
        w.key("mutual_information_bits").value(mutual_information(j));
        w.key("entropy_x_bits").value(entropy(j.marginal_x()));
        w.key("entropy_y_bits").value(entropy(j.marginal_y()));
        w.key("joint_entropy_bits").value(joint_entropy(j));
      });
    });
  }

  // ---- semantic-mi ----------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand(
        "semantic-mi", "semantic mutual information; --variant picks the reading");
    model_arg(cmd);
    cmd->add_option("--variant", variant_name,
                    "eq5: all terms class-level (never above I); up: syntactic "
                    "marginals, class-level joint (never below I)")
        ->required()
        ->check(CLI::IsMember({"eq5", "up"}));
    add_global_flags(cmd, g);
    cmd->callback([&] {
      const ModelDocument doc = parse_model(model_path);
      const Distribution p = doc.make_source();
      const Channel w = doc.make_channel();
      const SynonymousMapping fx = doc.make_mapping_or_identity(w.n_in());
      const SynonymousMapping fy = doc.make_output_mapping_or_identity(w.n_out());
      const JointSynonymousMapping jm = joint_mapping_of(doc, fx, fy);
      const JointDistribution j = joint_from(p, w);
      const MiVariant variant = parse_variant(variant_name);
      out_text = report_json(g, "semantic-mi", [&](JsonWriter& w2) {
        w2.key("variant").value(variant_name);
        w2.key("semantic_mutual_information_bits")
            .value(semantic_mutual_information(j, fx, fy, jm, variant));
        w2.key("mutual_information_bits").value(mutual_information(j));
      });
    });
  }

  // ---- capacity -------------------------------------------------------------
  {
    CLI::App* cmd =
        app.add_subcommand("capacity", "channel capacity by alternating maximization");
    model_arg(cmd);
    cmd->add_flag("--oracle", with_oracle,
                  "also run the exhaustive input sweep (inputs <= 4) at --grid-step");
    add_global_flags(cmd, g);
    cmd->callback([&] {
      const ModelDocument doc = parse_model(model_path);
      const Channel w = doc.make_channel();
      const CapacityResult r = blahut_arimoto_capacity(w, g.cfg);
      require_converged(r.converged, "capacity solve");
      double oracle = 0.0;
      if (with_oracle) {
        const SynonymousMapping id_x = SynonymousMapping::identity(w.n_in());
        const SynonymousMapping id_y = SynonymousMapping::identity(w.n_out());
        oracle = grid_oracle_capacity(w, id_x, id_y,
                                      JointSynonymousMapping::product(id_x, id_y),
                                      MiVariant::Eq5, g.cfg.grid_step);
      }
      out_text = report_json(g, "capacity", [&](JsonWriter& w2) {
        w2.key("capacity_bits").value(r.value);
        w2.key("iterations").value(static_cast<std::uint64_t>(r.iterations));
        w2.key("converged").value(r.converged);
        put_distribution(w2, "argmax_input", r.argmax_input);
        if (with_oracle) w2.key("grid_oracle_bits").value(oracle);
      });
    });
  }

  // ---- semantic-capacity ----------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand(
        "semantic-capacity",
        "largest semantic mutual information over input laws; --variant as in semantic-mi");
    model_arg(cmd);
    cmd->add_option("--variant", variant_name, "objective reading: eq5 or up")
        ->required()
        ->check(CLI::IsMember({"eq5", "up"}));
    cmd->add_option("--path", path_name,
                    "enumerate: exact representative sweep (eq5, product classes); "
                    "ascent: multi-start gradient; auto picks")
        ->check(CLI::IsMember({"auto", "enumerate", "ascent"}))
        ->capture_default_str();
    cmd->add_flag("--oracle", with_oracle,
                  "also run the exhaustive input sweep (inputs <= 4) at --grid-step");
    add_global_flags(cmd, g);
    cmd->callback([&] {
      const ModelDocument doc = parse_model(model_path);
      const Channel w = doc.make_channel();
      const SynonymousMapping fx = doc.make_mapping_or_identity(w.n_in());
      const SynonymousMapping fy = doc.make_output_mapping_or_identity(w.n_out());
      const JointSynonymousMapping jm = joint_mapping_of(doc, fx, fy);
      const MiVariant variant = parse_variant(variant_name);
      const CapacityPath path = path_name == "enumerate" ? CapacityPath::Enumerate
                                : path_name == "ascent"  ? CapacityPath::Ascent
                                                         : CapacityPath::Auto;
      const CapacityResult classical = blahut_arimoto_capacity(w, g.cfg);
      const CapacityResult r = semantic_capacity(w, fx, fy, jm, variant, g.cfg, path);
      require_converged(classical.converged && r.converged, "semantic capacity solve");
      double oracle = 0.0;
      if (with_oracle)
        oracle = grid_oracle_capacity(w, fx, fy, jm, variant, g.cfg.grid_step);
      out_text = report_json(g, "semantic-capacity", [&](JsonWriter& w2) {
        w2.key("variant").value(variant_name);
        w2.key("semantic_capacity_bits").value(r.value);
        w2.key("classical_capacity_bits").value(classical.value);
        w2.key("gap_bits").value(r.value - classical.value);
        w2.key("method").value(method_name(r.method));
        w2.key("iterations").value(static_cast<std::uint64_t>(r.iterations));
        w2.key("converged").value(r.converged);
        w2.key("fallback_notice").value(r.fallback_notice);
        put_distribution(w2, "argmax_input", r.argmax_input);
        if (with_oracle) w2.key("grid_oracle_bits").value(oracle);
      });
    });
  }

  // ---- rd-curve ---------------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand(
        "rd-curve", "rate-distortion sweep of the source under the model's distortion");
    model_arg(cmd);
    add_global_flags(cmd, g);
    cmd->callback([&] {
      const ModelDocument doc = parse_model(model_path);
      const Distribution p = doc.make_source();
      const DistortionMatrix d = doc.make_distortion();
      const RDCurve curve = rd_curve(p, d, make_sweep(g), g.cfg);
      require_converged(curve.all_converged(), "rate-distortion sweep");
      out_text = curve_csv(curve);
    });
  }

  // ---- semantic-rd-curve -------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand(
        "semantic-rd-curve",
        "rate-distortion sweep at the class level; distortion defaults to 0/1 mismatch");
    model_arg(cmd);
    add_global_flags(cmd, g);
    cmd->callback([&] {
      const ModelDocument doc = parse_model(model_path);
      const Distribution p = doc.make_source();
      const SynonymousMapping f = doc.make_mapping();
      const DistortionMatrix ds = class_distortion_of(doc, f.num_classes());
      const RDCurve curve = semantic_rd_curve(p, f, ds, make_sweep(g), g.cfg);
      require_converged(curve.all_converged(), "semantic rate-distortion sweep");
      out_text = curve_csv(curve);
    });
  }

  // ---- conditional-rd ------------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand(
        "conditional-rd",
        "class-level rate-distortion sweep given the model's side information");
    model_arg(cmd);
    add_global_flags(cmd, g);
    cmd->callback([&] {
      const ModelDocument doc = parse_model(model_path);
      const SideInfoModel m = doc.make_side_info();
      const DistortionMatrix ds =
          class_distortion_of(doc, m.semantic_map().num_classes());
      const RDCurve curve = conditional_rd_curve(m, ds, make_sweep(g), g.cfg);
      require_converged(curve.all_converged(), "conditional rate-distortion sweep");
      out_text = curve_csv(curve);
    });
  }

  // ---- estimate-hxk ----------------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand(
        "estimate-hxk",
        "conditional entropy of the source given the prior state: exact from a model "
        "with side_info, or estimated from a sample file");
    cmd->add_option("model", model_path, "model document with a side_info block");
    cmd->add_option("--samples", samples_path,
                    "two-column text file of (state, symbol) integer samples");
    cmd->add_option("--n-k", arg_nk, "prior-state alphabet size (default: infer)");
    cmd->add_option("--n-x", arg_nx, "symbol alphabet size (default: infer)");
    cmd->add_option("--smoothing", smoothing, "additive smoothing for estimates")
        ->capture_default_str();
    cmd->add_option("--sizes", sizes,
                    "sample sizes for a seeded estimator-consistency sweep "
                    "(model mode only)")
        ->delimiter(',');
    add_global_flags(cmd, g);
    cmd->callback([&] {
      const bool have_model = !model_path.empty();
      const bool have_samples = !samples_path.empty();
      if (have_model == have_samples)
        throw ValidationError(
            "estimate-hxk: give either a model document or --samples, not both");
      if (have_samples) {
        const SampleSet s = load_samples(samples_path, arg_nk, arg_nx);
        const double est = estimate_conditional_entropy(s, smoothing);
        out_text = report_json(g, "estimate-hxk", [&](JsonWriter& w) {
          w.key("estimate_bits").value(est);
          w.key("samples").value(static_cast<std::uint64_t>(s.pairs.size()));
          w.key("n_k").value(static_cast<std::uint64_t>(s.n_k));
          w.key("n_x").value(static_cast<std::uint64_t>(s.n_x));
          w.key("smoothing").value(smoothing);
        });
        return;
      }
      const ModelDocument doc = parse_model(model_path);
      const SideInfoModel m = doc.make_side_info();
      const double hxk = conditional_entropy_given_prior(m);
      const double gain = prior_gain(m);
      ScalingTrendReport trend;
      if (!sizes.empty()) trend = scaling_trend_report(m, sizes, g.cfg.seed, smoothing);
      out_text = report_json(g, "estimate-hxk", [&](JsonWriter& w) {
        w.key("conditional_entropy_bits").value(hxk);
        w.key("entropy_x_bits").value(entropy(m.marginal_x()));
        w.key("prior_gain_bits").value(gain);
        w.key("smoothing").value(smoothing);
        if (!sizes.empty()) {
          w.key("series").begin_array();
          for (const auto& pt : trend.series) {
            w.begin_object();
            w.key("size").value(static_cast<std::uint64_t>(pt.sample_size));
            w.key("estimate_bits").value(pt.estimate);
            w.end_object();
          }
          w.end_array();
        }
      });
    });
  }

  // ---- simulate -----------------------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand(
        "simulate", "seeded channel run scoring symbol errors against meaning errors");
    model_arg(cmd);
    cmd->add_option("-n,--trials", trials, "symbols to push through the channel")
        ->capture_default_str();
    add_global_flags(cmd, g);
    cmd->callback([&] {
      const ModelDocument doc = parse_model(model_path);
      const Distribution p = doc.make_source();
      const Channel w = doc.make_channel();
      const SynonymousMapping fx = doc.make_mapping_or_identity(w.n_in());
      const SynonymousMapping fy = doc.make_output_mapping_or_identity(w.n_out());
      std::optional<DistortionMatrix> ds;
      if (doc.distortion || doc.distortion_file) ds = doc.make_distortion();
      const SimReport r = run_channel_sim(p, w, fx, fy, trials, g.cfg.seed,
                                          ds ? &*ds : nullptr);
      out_text = report_json(g, "simulate", [&](JsonWriter& w2) {
        w2.key("n").value(static_cast<std::uint64_t>(r.n));
        w2.key("seed").value(r.seed);
        w2.key("syntactic_error_rate").value(r.syntactic_error_rate);
        w2.key("semantic_error_rate").value(r.semantic_error_rate);
        w2.key("measured_bits_per_symbol").value(r.measured_bits_per_symbol);
        w2.key("mean_semantic_distortion").value(r.mean_semantic_distortion);
      });
    });
  }

  // ---- codec-demo -----------------------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand(
        "codec-demo",
        "encode a seeded sample stream twice, full-alphabet and class-level, and "
        "score the reconstruction");
    model_arg(cmd);
    cmd->add_option("-n,--trials", trials, "symbols to draw and encode")
        ->capture_default_str();
    cmd->add_option("--representative", representative,
                    "reconstruction symbol per class: lowest index or modal symbol")
        ->check(CLI::IsMember({"lowest", "modal"}))
        ->capture_default_str();
    add_global_flags(cmd, g);
    cmd->callback([&] {
      const ModelDocument doc = parse_model(model_path);
      const Distribution p = doc.make_source();
      const SynonymousMapping f = doc.make_mapping();
      const GenerativeDecoder dec = representative == "modal"
                                        ? GenerativeDecoder::most_probable(f, p)
                                        : GenerativeDecoder::lowest_index(f);
      const CodecDemoReport r = run_codec_demo(p, f, dec, trials, g.cfg.seed);
      out_text = report_json(g, "codec-demo", [&](JsonWriter& w) {
        w.key("n").value(static_cast<std::uint64_t>(r.n));
        w.key("seed").value(r.seed);
        w.key("source_entropy_bits").value(r.source_entropy_bits);
        w.key("semantic_entropy_bits").value(r.semantic_entropy_bits);
        w.key("syntactic_bits_per_symbol").value(r.syntactic_bits_per_symbol);
        w.key("semantic_bits_per_symbol").value(r.semantic_bits_per_symbol);
        w.key("symbol_mismatch_rate").value(r.symbol_mismatch_rate);
        w.key("mean_semantic_distortion").value(r.mean_semantic_distortion);
        w.key("class_stream_exact").value(r.class_stream_exact);
      });
    });
  }

  // ---- make-distortion ---------------------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand(
        "make-distortion",
        "build a distortion matrix and write it as a delimited grid");
    cmd->add_option("model", model_path,
                    "model document supplying features (cosine) or a mapping "
                    "(class-mismatch)");
    cmd->add_option("--method", method,
                    "cosine: half one-minus-cosine of feature vectors; "
                    "class-mismatch: 0/1 over classes")
        ->check(CLI::IsMember({"cosine", "class-mismatch"}))
        ->capture_default_str();
    cmd->add_option("--classes", arg_classes,
                    "class count for class-mismatch when no model is given");
    add_global_flags(cmd, g);
    cmd->callback([&] {
      DistortionMatrix d = [&] {
        if (method == "cosine") {
          if (model_path.empty())
            throw ValidationError("make-distortion: cosine needs a model with features");
          return cosine_distortion(parse_model(model_path).make_features());
        }
        if (arg_classes > 0) return class_mismatch_distortion(arg_classes);
        if (model_path.empty())
          throw ValidationError(
              "make-distortion: class-mismatch needs --classes or a model with a mapping");
        return class_mismatch_distortion(
            parse_model(model_path).make_mapping().num_classes());
      }();
      std::ostringstream out;
      save_distortion(d, out);
      out_text = out.str();
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage diagnostic
    return code == 0 ? 0 : 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const CodecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const SolverStalled& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  if (g.output.empty()) {
    std::cout << out_text;
    return 0;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file: " << g.output << "\n";
    return 3;
  }
  out << out_text;
  out.flush();
  if (!out) {
    std::cerr << "error: cannot write output file: " << g.output << "\n";
    return 3;
  }
  return 0;
}
