#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mil/decode.hpp"
#include "mil/errors.hpp"
#include "mil/exec.hpp"
#include "mil/harness/evaluate.hpp"
#include "mil/harness/io.hpp"
#include "mil/harness/train.hpp"
#include "mil/likelihood.hpp"
#include "mil/tensor_io.hpp"
#include "mil/verify.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Exit-code contract, so shell pipelines can branch on the outcome class.
constexpr int kExitOk = 0;
constexpr int kExitInput = 1;            // malformed input or failed check
constexpr int kExitZeroProbability = 2;  // legitimate -inf log-likelihood
constexpr int kExitGuard = 3;            // subset-order / enumeration guard
constexpr int kExitDiverged = 4;         // training objective blew up

// A tensor document holds either pre-softmax scores ("logit") or ready
// probabilities ("prob"); both arrive here as a validated ProbTensor.
mil::ProbTensor prob_from_doc(const json& doc) {
  if (doc.is_object() && doc.value("kind", "") == "logit")
    return mil::softmax_locations(mil::logit_tensor_from_json(doc));
  mil::ProbTensor p = mil::prob_tensor_from_json(doc);
  mil::validate_prob_tensor(p);
  return p;
}

mil::Exec exec_from_name(const std::string& name) {
  return name == "parallel" ? mil::Exec::parallel : mil::Exec::serial;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mil::Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw mil::Error("short write to " + path);
}

// --- likelihood --------------------------------------------------------------

struct LikelihoodArgs {
  std::string tensor_path;
  std::string labels_path;
  std::string method = "exact";
  int k = -1;
  int max_order = mil::kDefaultMaxSubsetOrder;
  std::string out = "human";
};

int cmd_likelihood(const LikelihoodArgs& a) {
  mil::ProbTensor p = prob_from_doc(mil::read_json_file(a.tensor_path));
  mil::LabelSet set = mil::label_set_from_json(mil::read_json_file(a.labels_path));
  if (set.max_label() > p.num_classes())
    throw mil::LabelOutOfRangeError(set.max_label(), p.num_classes());

  mil::LikelihoodResult r;
  if (a.method == "exact") {
    r = mil::likelihood_exact(set, p, a.max_order);
  } else if (a.method == "beta") {
    r = mil::likelihood_beta(set, p, a.max_order);
  } else if (a.method == "brute") {
    r = mil::brute_force_likelihood(set, p);
  } else {  // bound
    if (a.k < 0) throw mil::Error("--method bound requires --k");
    r = mil::likelihood_upper_bound(set, p, a.k, a.max_order);
  }

  if (a.out == "json") {
    ordered_json doc{{"logprob", r.is_zero() ? json("-inf") : json(r.logprob)},
                     {"method", mil::method_name(r.method)},
                     {"terms_evaluated", r.terms_evaluated}};
    if (r.truncation_order >= 0) doc["truncation_order"] = r.truncation_order;
    std::cout << doc.dump() << "\n";
  } else {
    if (r.is_zero())
      std::printf("logprob: -inf\n");
    else
      std::printf("logprob: %.17g\n", r.logprob);
    std::printf("method: %s\n", mil::method_name(r.method));
    std::printf("terms_evaluated: %" PRIu64 "\n", r.terms_evaluated);
    if (r.truncation_order >= 0) std::printf("truncation_order: %d\n", r.truncation_order);
  }
  return r.is_zero() ? kExitZeroProbability : kExitOk;
}

// --- verify -------------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  std::uint64_t seed = 1;
  int trials = 0;  // 0 = the suite's documented default
  std::string exec = "serial";
  std::string out = "human";
};

int suite_default_trials(const std::string& suite) {
  if (suite == "oracle") return 200;
  if (suite == "partition") return 50;
  if (suite == "gradcheck") return 50;
  return 100;  // bounds
}

int cmd_verify(const VerifyArgs& a) {
  int trials = a.trials > 0 ? a.trials : suite_default_trials(a.suite);
  mil::SuiteReport r = mil::run_suite(a.suite, a.seed, trials, exec_from_name(a.exec));
  if (a.out == "json") {
    ordered_json doc{{"suite", r.suite},       {"seed", r.seed},
                     {"trials", r.trials},     {"checks", r.checks},
                     {"failures", r.failures}, {"worst_error", r.worst_error},
                     {"worst_case", r.worst_case}, {"passed", r.passed()}};
    std::cout << doc.dump() << "\n";
  } else {
    std::cout << mil::suite_report_text(r);
  }
  return r.passed() ? kExitOk : kExitInput;
}

// --- train ---------------------------------------------------------------------

struct TrainArgs {
  mil::harness::TrainConfig cfg;
  std::string loss = "exact";
  std::string exec = "serial";
  std::string checkpoint = "checkpoint.json";
  std::string metrics = "metrics.jsonl";
  std::string out = "human";
};

int cmd_train(const TrainArgs& a) {
  mil::harness::TrainConfig cfg = a.cfg;
  cfg.loss = a.loss == "mil" ? mil::harness::Loss::traditional_mil
                             : mil::harness::Loss::exact_nll;
  cfg.exec = exec_from_name(a.exec);

  mil::harness::TrainResult r = mil::harness::train(cfg);

  // The metrics artifact carries only seed-determined fields so reruns are
  // byte-identical; measured wall time goes to the live report below.
  write_text_file(a.metrics, mil::harness::metrics_canonical(r.epochs));
  mil::write_json_file(a.checkpoint, mil::harness::checkpoint_to_json(r));

  double total_ms = 0.0;
  for (const auto& e : r.epochs) total_ms += e.wall_ms;
  if (a.out == "json") {
    ordered_json doc{{"epochs", r.epochs.size()},
                     {"first_mean_nll", r.epochs.front().mean_nll},
                     {"final_mean_nll", r.epochs.back().mean_nll},
                     {"wall_ms", total_ms},
                     {"checkpoint", a.checkpoint},
                     {"metrics", a.metrics}};
    std::cout << doc.dump() << "\n";
  } else {
    for (const auto& e : r.epochs)
      std::printf("epoch %d: mean_nll=%.17g lr=%g wall_ms=%.0f\n", e.epoch, e.mean_nll, e.lr,
                  e.wall_ms);
    std::printf("wrote %s and %s\n", a.checkpoint.c_str(), a.metrics.c_str());
  }
  return kExitOk;
}

// --- eval ----------------------------------------------------------------------

struct EvalArgs {
  std::string checkpoint;
  int singletons = 1000;
  int bags = 200;
  std::string exec = "serial";
  std::string out = "json";
};

int cmd_eval(const EvalArgs& a) {
  mil::harness::Checkpoint ck =
      mil::harness::checkpoint_from_json(mil::read_json_file(a.checkpoint));
  mil::harness::EvalMetrics m =
      mil::harness::evaluate(ck.params, ck.config, a.singletons, a.bags, exec_from_name(a.exec));
  if (a.out == "json") {
    std::cout << mil::harness::eval_metrics_to_json(m).dump() << "\n";
  } else {
    std::printf("singletons: %d\n", m.singleton_count);
    std::printf("error_alpha: %.17g\n", m.error_alpha);
    std::printf("error_meanpool: %.17g\n", m.error_meanpool);
    std::printf("error_maxlogit: %.17g\n", m.error_maxlogit);
    std::printf("agreement_alpha_meanpool: %.17g\n", m.agreement_alpha_meanpool);
    std::printf("bags: %d\n", m.bag_count);
    std::printf("bag_mean_nll: %.17g\n", m.bag_mean_nll);
  }
  return kExitOk;
}

// --- transcribe ------------------------------------------------------------------

struct TranscribeArgs {
  std::string path;
  int classes = 0;
  std::string out = "human";
};

int cmd_transcribe(const TranscribeArgs& a) {
  json doc = mil::read_json_file(a.path);
  mil::EmissionMap map;
  if (doc.is_object() && doc.contains("kind")) {
    map = mil::emission_map(prob_from_doc(doc));
  } else {
    if (a.classes <= 0)
      throw mil::Error("an emission-map file needs --classes to recover the background label");
    map = mil::emission_map_from_json(doc, a.classes);
  }
  mil::Transcription t = mil::collapse_transcribe(mil::column_sequence(map), map.phi_label());
  if (a.out == "json") {
    ordered_json out{{"labels", t}, {"string", mil::transcription_string(t)}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << mil::transcription_string(t) << "\n";
  }
  return kExitOk;
}

void add_out_flag(CLI::App* cmd, std::string& out) {
  cmd->add_option("--out", out, "output mode")->check(CLI::IsMember({"human", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact multiple-instance likelihood toolkit"};
  app.require_subcommand(1);

  LikelihoodArgs lik;
  CLI::App* c_lik = app.add_subcommand(
      "likelihood", "log Prb(labels | tensor) for a tensor file and a label-set file");
  c_lik->add_option("tensor", lik.tensor_path, "prob or logit tensor JSON ('-' = stdin)")
      ->required();
  c_lik->add_option("labels", lik.labels_path, "label-set JSON ('-' = stdin)")->required();
  c_lik->add_option("--method", lik.method, "evaluation route")
      ->check(CLI::IsMember({"exact", "beta", "brute", "bound"}));
  c_lik->add_option("--k", lik.k, "truncation order for --method bound");
  c_lik->add_option("--max-order", lik.max_order, "subset-order guard");
  add_out_flag(c_lik, lik.out);

  VerifyArgs ver;
  CLI::App* c_ver = app.add_subcommand("verify", "run a randomized property suite");
  c_ver->add_option("--suite", ver.suite, "suite name")
      ->required()
      ->check(CLI::IsMember({"oracle", "partition", "gradcheck", "bounds"}));
  c_ver->add_option("--seed", ver.seed, "suite seed");
  c_ver->add_option("--trials", ver.trials, "trial count (0 = suite default)");
  c_ver->add_option("--exec", ver.exec, "execution policy")
      ->check(CLI::IsMember({"serial", "parallel"}));
  add_out_flag(c_ver, ver.out);

  TrainArgs tr;
  CLI::App* c_tr = app.add_subcommand(
      "train", "train the toy detector on synthetic scenes; writes checkpoint + metrics");
  c_tr->add_option("--epochs", tr.cfg.epochs, "epoch count");
  c_tr->add_option("--seed", tr.cfg.seed, "experiment seed");
  c_tr->add_option("--train-size", tr.cfg.train_size, "scene count");
  c_tr->add_option("--num-classes", tr.cfg.num_classes, "glyph classes");
  c_tr->add_option("--canvas", tr.cfg.canvas, "square canvas side");
  c_tr->add_option("--glyph-size", tr.cfg.glyph_size, "glyph stencil side");
  c_tr->add_option("--glyphs", tr.cfg.glyphs_per_scene, "glyphs per training scene");
  c_tr->add_option("--batch-size", tr.cfg.batch_size, "SGD batch size");
  c_tr->add_option("--lr-first", tr.cfg.lr_first, "learning rate for the first half");
  c_tr->add_option("--lr-second", tr.cfg.lr_second, "learning rate for the second half");
  c_tr->add_option("--loss", tr.loss, "training objective")
      ->check(CLI::IsMember({"exact", "mil"}));
  c_tr->add_option("--exec", tr.exec, "execution policy")
      ->check(CLI::IsMember({"serial", "parallel"}));
  c_tr->add_option("--checkpoint", tr.checkpoint, "checkpoint output path");
  c_tr->add_option("--metrics", tr.metrics, "metrics JSONL output path");
  add_out_flag(c_tr, tr.out);

  EvalArgs ev;
  CLI::App* c_ev = app.add_subcommand("eval", "evaluate a checkpoint on held-out scenes");
  c_ev->add_option("--checkpoint", ev.checkpoint, "checkpoint path")->required();
  c_ev->add_option("--singletons", ev.singletons, "single-glyph test scenes");
  c_ev->add_option("--bags", ev.bags, "multi-glyph test scenes");
  c_ev->add_option("--exec", ev.exec, "execution policy")
      ->check(CLI::IsMember({"serial", "parallel"}));
  add_out_flag(c_ev, ev.out);

  TranscribeArgs ts;
  CLI::App* c_ts = app.add_subcommand(
      "transcribe", "collapse a tensor or emission-map file into a label string");
  c_ts->add_option("file", ts.path, "tensor JSON or emission-map JSON ('-' = stdin)")->required();
  c_ts->add_option("--classes", ts.classes, "class count (emission-map input only)");
  add_out_flag(c_ts, ts.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (c_lik->parsed()) return cmd_likelihood(lik);
    if (c_ver->parsed()) return cmd_verify(ver);
    if (c_tr->parsed()) return cmd_train(tr);
    if (c_ev->parsed()) return cmd_eval(ev);
    return cmd_transcribe(ts);
  } catch (const mil::SubsetOrderExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const mil::EnumerationTooLargeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const mil::DivergedObjectiveError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const mil::ZeroProbabilitySampleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitZeroProbability;
  } catch (const mil::ZeroProbabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitZeroProbability;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
