// Command-line driver: trains gradient descent and the position-wise optimizer
// from one shared initialization and writes losses.csv, report.json and
// losses.svg to --out.

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "poswise/errors.hpp"
#include "poswise/experiment.hpp"
#include "poswise/report.hpp"

namespace {

using poswise::ExitCode;

int code(ExitCode c) { return static_cast<int>(c); }

std::vector<std::size_t> parse_widths(const std::string& csv) {
  std::vector<std::size_t> widths;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || item.empty() || v <= 0) {
      throw poswise::UsageError("--hidden expects comma-separated positive integers, got '" + csv + "'");
    }
    widths.push_back(static_cast<std::size_t>(v));
  }
  if (widths.empty()) throw poswise::UsageError("--hidden must list at least one width");
  return widths;
}

std::string summary_line(const poswise::RunOutcome& run, double threshold) {
  const auto& r = run.record;
  std::ostringstream s;
  s << (run.kind == poswise::OptimizerKind::kGradientDescent ? "gd      " : "poswise ")
    << " epochs=" << r.loss_history.size() << " final_loss=" << r.final_loss()
    << " wall_seconds=" << r.wall_seconds << " threshold(" << threshold << ")=";
  if (r.epochs_to_threshold) {
    s << "reached@" << *r.epochs_to_threshold;
  } else {
    s << (r.diverged ? "diverged" : "not-reached");
  }
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compare batch gradient descent with the position-wise optimizer"};
  poswise::ExperimentConfig cfg;

  std::string hidden = "20,7,5";
  std::string out_dir = "out";
  double lr = 0.0, threshold = 0.0;

  const std::map<std::string, poswise::DatasetKind> datasets{
      {"mnist", poswise::DatasetKind::kMnist},
      {"cifar10", poswise::DatasetKind::kCifar10},
      {"synthetic", poswise::DatasetKind::kSynthetic}};
  const std::map<std::string, poswise::LossChoice> losses{{"auto", poswise::LossChoice::kAuto},
                                                          {"bce", poswise::LossChoice::kBce},
                                                          {"amsoftmax", poswise::LossChoice::kAMSoftmax}};
  const std::map<std::string, poswise::RefreshMode> refresh{
      {"suffix", poswise::RefreshMode::kSuffix}, {"literal", poswise::RefreshMode::kLiteral}};
  const std::map<std::string, poswise::OptimizerChoice> optimizers{
      {"gd", poswise::OptimizerChoice::kGd},
      {"poswise", poswise::OptimizerChoice::kPoswise},
      {"both", poswise::OptimizerChoice::kBoth}};

  std::string dataset = "synthetic", loss = "auto", refresh_mode = "suffix", optimizer = "both";
  app.add_option("--dataset", dataset, "Training set")
      ->check(CLI::IsMember(datasets, CLI::ignore_case))
      ->default_str(dataset);
  app.add_option("--data-dir", cfg.data_dir, "Directory with the IDX or CIFAR-10 binary files");
  app.add_option("--subsample", cfg.subsample, "Stratified subset size (0 keeps everything)");
  app.add_option("--hidden", hidden, "Hidden layer widths")->default_str(hidden);
  auto* lr_opt = app.add_option("--lr", lr, "Learning rate (default 0.1 binary, 0.03 multi-class)");
  auto* threshold_opt =
      app.add_option("--threshold", threshold, "Stop once the epoch loss is below this value");
  app.add_option("--max-epochs", cfg.max_epochs, "Epoch budget per optimizer")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for initialization, sampling and synthetic data")
      ->capture_default_str();
  app.add_option("--loss", loss, "auto picks bce for binary and amsoftmax for multi-class data")
      ->check(CLI::IsMember(losses, CLI::ignore_case))
      ->default_str(loss);
  app.add_option("--margin", cfg.margin, "AM-softmax additive margin")->capture_default_str();
  app.add_option("--scale", cfg.scale, "AM-softmax logit scale")->capture_default_str();
  app.add_option("--refresh-mode", refresh_mode, "Position-wise cache refresh after each phase")
      ->check(CLI::IsMember(refresh, CLI::ignore_case))
      ->default_str(refresh_mode);
  app.add_option("--train-bias", cfg.train_bias, "Update biases alongside weights")
      ->default_str("true");
  app.add_option("--optimizer", optimizer, "Which optimizers to train")
      ->check(CLI::IsMember(optimizers, CLI::ignore_case))
      ->default_str(optimizer);
  app.add_option("--out", out_dir, "Output directory")->default_str(out_dir);
  app.add_option("--synthetic-per-class", cfg.synthetic_per_class, "Synthetic samples per class")
      ->capture_default_str();
  app.add_option("--synthetic-features", cfg.synthetic_features, "Synthetic feature count")
      ->capture_default_str();
  app.add_option("--synthetic-separation", cfg.synthetic_separation,
                 "Distance between the synthetic class centres")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return code(ExitCode::kUsage);
  }

  try {
    cfg.hidden = parse_widths(hidden);
    cfg.dataset = datasets.at(CLI::detail::to_lower(dataset));
    cfg.loss = losses.at(CLI::detail::to_lower(loss));
    cfg.refresh_mode = refresh.at(CLI::detail::to_lower(refresh_mode));
    cfg.optimizer = optimizers.at(CLI::detail::to_lower(optimizer));
    if (*lr_opt) cfg.lr = lr;
    if (*threshold_opt) cfg.threshold = threshold;
    if ((cfg.dataset != poswise::DatasetKind::kSynthetic) && cfg.data_dir.empty()) {
      throw poswise::UsageError("--data-dir is required for --dataset " + poswise::to_string(cfg.dataset));
    }

    const poswise::ExperimentReport report = poswise::run_experiment(cfg);
    const auto files = poswise::report::write_all(report, out_dir);
    for (const auto& run : report.runs) {
      std::cout << summary_line(run, report.threshold) << '\n';
      if (run.record.diverged) std::cerr << "diverged: " << run.record.divergence_message << '\n';
    }
    std::cout << "wrote " << files.csv.string() << ", " << files.json.string() << ", "
              << files.svg.string() << '\n';
    return code(poswise::exit_code_for(report));
  } catch (const poswise::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return code(ExitCode::kUsage);
  } catch (const poswise::DataFormatError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return code(ExitCode::kData);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return code(ExitCode::kUsage);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(ExitCode::kData);
  }
}
