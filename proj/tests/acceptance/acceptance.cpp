// Acceptance gate: one PASS/FAIL line per criterion.
//
//   poswise_acceptance            run every criterion
//   poswise_acceptance 3 5        run only criteria 3 and 5

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "poswise/datasets.hpp"
#include "poswise/errors.hpp"
#include "poswise/optimizers.hpp"
#include "poswise/oracle.hpp"
#include "test_support.hpp"

using namespace poswise;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kExe = POSWISE_BENCH_EXE;
const fs::path kMnistDir = POSWISE_MNIST_DIR;
const fs::path kTmp = POSWISE_ACCEPTANCE_TMP;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail.str("");
    pass = false;
    detail << why << "; ";
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs kept for the loss-sanity criterion: (label, report).
std::vector<std::pair<std::string, json>> g_accepted_runs;

// ---------------------------------------------------------------------------

void gradient_correctness(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::vector<std::size_t>> shapes{{5, 3, 2}, {6, 4, 4, 2}};
  double worst = 0.0;
  std::size_t checked = 0;
  SeededRng data_rng(20240);
  for (const auto& shape : shapes) {
    for (const auto& pairing : testing::supported_pairings()) {
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Network net = testing::random_network(shape, pairing.output, 1000 + seed);
        const Dataset data =
            testing::random_dataset(data_rng, shape.front(), shape.back(), 4, pairing.loss.kind);
        const double err = testing::gradient_check_error(net, data, pairing.loss);
        worst = std::max(worst, err);
        ++checked;
        if (!(err <= 1e-6)) {
          o.fail("relative error " + std::to_string(err) + " for " +
                 std::string(to_string(pairing.loss.kind)) + " seed " + std::to_string(seed));
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 5.0) o.fail("took " + std::to_string(secs) + " s");
  if (o.pass) o.detail << checked << " networks, worst relative error " << worst;
}

void oracle_equivalence(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  SeededRng rng(2);
  const std::size_t n = 32;
  Dataset data;
  data.inputs = testing::random_matrix(rng, 1, n, -1.0, 1.0);
  data.targets = Matrix(1, n);
  Matrix xs(n, 2);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    ys[i] = -0.8 * data.inputs(0, i) + 0.3 + 0.1 * rng.standard_normal();
    data.targets(0, i) = ys[i];
    xs(i, 0) = data.inputs(0, i);
    xs(i, 1) = 1.0;
  }
  const double w0 = rng.uniform() - 0.5, b0 = rng.uniform() - 0.5;
  Network net({Layer{Matrix{{w0}}, Matrix{{b0}}, ActivationKind::kLinear}});
  oracle::LinearModel model{{w0, b0}};
  TrainConfig cfg;
  cfg.eta = 0.3;
  cfg.loss = LossSpec{LossKind::kMSE};
  double worst = 0.0;
  for (int step = 0; step < 100; ++step) {
    (void)gd_epoch(net, data, cfg);
    model = oracle::linreg_step(model, xs, ys, cfg.eta);
    worst = std::max({worst, std::abs(net.layer(0).weights(0, 0) - model.theta[0]),
                      std::abs(net.layer(0).bias(0, 0) - model.theta[1])});
  }
  if (!(worst <= 1e-12)) o.fail("max parameter gap " + std::to_string(worst));
  const double secs = seconds_since(t0);
  if (secs >= 1.0) o.fail("took " + std::to_string(secs) + " s");
  if (o.pass) o.detail << "100 steps, max parameter gap " << worst;
}

void schedule_counts(Outcome& o, RefreshMode mode) {
  for (std::size_t depth : {1u, 2u, 3u, 4u, 6u}) {
    std::vector<std::size_t> widths{5};
    for (std::size_t l = 0; l < depth; ++l) widths.push_back(l + 1 == depth ? 2 : 4);
    const Network start = testing::random_network(widths, ActivationKind::kSigmoid, depth);
    SeededRng rng(depth);
    const Dataset data = testing::random_dataset(rng, 5, 2, 6, LossKind::kBinaryCrossEntropy);
    TrainConfig cfg;
    cfg.refresh_mode = mode;
    auto [gd, pw] = duplicate_network(start);
    const EpochResult g = gd_epoch(gd, data, cfg);
    const EpochResult p = poswise_epoch(pw, data, cfg);
    std::vector<std::size_t> expected(depth);
    std::iota(expected.begin(), expected.end(), std::size_t{1});
    if (p.update_counts != expected) o.fail("poswise counts wrong at L=" + std::to_string(depth));
    if (g.update_counts != std::vector<std::size_t>(depth, 1)) {
      o.fail("gd counts wrong at L=" + std::to_string(depth));
    }
    if (depth == 1 && !bitwise_equal(gd, pw)) o.fail("L=1 weights differ");
  }
}

void schedule_invariant(Outcome& o) {
  schedule_counts(o, RefreshMode::kSuffix);
  if (o.pass) o.detail << "L in {1,2,3,4,6}: poswise [1..L], gd [1]xL, L=1 bitwise equal";
}

void determinism(Outcome& o) {
  const std::vector<std::string> invocations{
      "--dataset synthetic --seed 7 --lr 0.5 --threshold 0.1",
      "--dataset synthetic --seed 3 --refresh-mode literal --max-epochs 60",
      "--dataset mnist --data-dir '" + kMnistDir.string() + "' --subsample 300 --seed 2 --max-epochs 15",
  };
  int i = 0;
  for (const auto& args : invocations) {
    const auto a = testing::run_cli(kExe, args, kTmp / ("det" + std::to_string(i) + "a"));
    const auto b = testing::run_cli(kExe, args, kTmp / ("det" + std::to_string(i) + "b"));
    ++i;
    if (a.exit_code == 1 || a.exit_code == 2) {
      o.fail("invocation failed: " + args);
      continue;
    }
    if (a.exit_code != b.exit_code) o.fail("exit codes differ: " + args);
    if (a.csv() != b.csv()) o.fail("CSV differs: " + args);
    if (testing::without_timings(a.json()) != testing::without_timings(b.json())) {
      o.fail("JSON differs: " + args);
    }
  }
  if (o.pass) o.detail << invocations.size() << " invocations repeated, CSV byte-identical";
}

struct TrendResult {
  std::size_t wins = 0;
  std::string summary;
};

void trend(Outcome& o, const std::string& label, const std::string& base_args, double max_secs) {
  TrendResult r;
  for (int seed = 1; seed <= 5; ++seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto run = testing::run_cli(kExe, base_args + " --seed " + std::to_string(seed),
                                      kTmp / (label + "_seed" + std::to_string(seed)));
    const double secs = seconds_since(t0);
    if (run.exit_code == 2 || run.exit_code == 1) {
      o.fail("seed " + std::to_string(seed) + " could not run (exit " +
             std::to_string(run.exit_code) + ")");
      continue;
    }
    const json j = run.json();
    g_accepted_runs.emplace_back(label + " seed " + std::to_string(seed), j);
    const auto& gd = j["optimizers"]["gd"]["epochs_to_threshold"];
    const auto& pw = j["optimizers"]["poswise"]["epochs_to_threshold"];
    const std::string g = gd.is_null() ? "-" : gd.dump();
    const std::string p = pw.is_null() ? "-" : pw.dump();
    r.summary += " s" + std::to_string(seed) + "=" + g + "/" + p;
    if (!gd.is_null() && !pw.is_null() && pw.get<int>() < gd.get<int>()) ++r.wins;
    if (secs >= max_secs) {
      o.fail("seed " + std::to_string(seed) + " took " + std::to_string(secs) + " s");
    }
  }
  if (r.wins < 4) o.fail("poswise faster on only " + std::to_string(r.wins) + " of 5 seeds");
  o.detail << "gd/poswise epochs:" << r.summary;
}

void trend_mnist(Outcome& o) {
  if (!fs::exists(kMnistDir / "train-images-idx3-ubyte")) {
    o.fail("no MNIST files in " + kMnistDir.string());
    return;
  }
  trend(o, "mnist", "--dataset mnist --data-dir '" + kMnistDir.string() + "' --subsample 2000",
        120.0);
}

void trend_binary(Outcome& o) {
  trend(o, "binary", "--dataset synthetic", 30.0);
  // GD must need at least 200 epochs for the comparison to mean anything.
  for (const auto& [label, j] : g_accepted_runs) {
    if (label.rfind("binary", 0) != 0) continue;
    const auto& gd = j["optimizers"]["gd"]["epochs_to_threshold"];
    if (!gd.is_null() && gd.get<int>() < 200) o.fail(label + ": gd reached the threshold in " + gd.dump());
  }
}

void loss_sanity(Outcome& o) {
  if (g_accepted_runs.empty()) {
    o.fail("no trend runs to inspect (run criteria 5 and 6 first)");
    return;
  }
  for (const auto& [label, j] : g_accepted_runs) {
    for (const auto& [name, opt] : j["optimizers"].items()) {
      const auto& h = opt["loss_history"];
      bool finite = !h.empty() && !opt["diverged"].get<bool>();
      for (const auto& v : h) finite = finite && v.is_number() && std::isfinite(v.get<double>());
      if (!finite) {
        o.fail(label + " " + name + ": non-finite loss");
        continue;
      }
      if (!(opt["final_loss"].get<double>() < opt["initial_loss"].get<double>())) {
        o.fail(label + " " + name + ": final loss not below initial");
      }
    }
  }
  if (o.pass) o.detail << g_accepted_runs.size() << " runs, all finite and decreasing";
}

// --- data-format fixtures --------------------------------------------------

using Bytes = std::vector<std::uint8_t>;

void put(const fs::path& p, const Bytes& b) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

void be32(Bytes& b, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) b.push_back(static_cast<std::uint8_t>(v >> s));
}

Bytes idx(std::uint32_t magic, std::vector<std::uint32_t> dims, std::size_t payload, std::uint8_t fill) {
  Bytes b;
  be32(b, magic);
  for (auto d : dims) be32(b, d);
  b.insert(b.end(), payload, fill);
  return b;
}

template <typename F>
bool rejects_at(F&& f, std::size_t offset) {
  try {
    f();
  } catch (const DataFormatError& e) {
    return e.offset() == offset;
  }
  return false;
}

void data_format(Outcome& o) {
  const fs::path dir = kTmp / "fixtures";
  fs::create_directories(dir);
  const auto img = dir / "img", lab = dir / "lab", cif = dir / "cifar";
  const auto load = [&] { (void)load_mnist_idx(img, lab); };

  put(img, idx(2051, {1, 28, 28}, 784, 255));
  put(lab, idx(2049, {1}, 1, 3));
  const Dataset one = load_mnist_idx(img, lab);
  if (!(one.inputs == Matrix(784, 1, 1.0)) || one.labels != std::vector<int>{3}) {
    o.fail("white IDX image did not load as ones");
  }

  Bytes zero_magic = idx(2051, {1, 28, 28}, 784, 0);
  std::fill(zero_magic.begin(), zero_magic.begin() + 4, 0);
  put(img, zero_magic);
  if (!rejects_at(load, 0)) o.fail("zeroed magic not rejected at 0");

  put(img, idx(2051, {2, 2, 2}, 7, 0));
  put(lab, idx(2049, {2}, 2, 0));
  if (!rejects_at(load, 16)) o.fail("truncated pixels not rejected at 16");

  put(img, idx(2051, {2, 2, 2}, 8, 0));
  put(lab, idx(2049, {3}, 3, 0));
  if (!rejects_at(load, 4)) o.fail("count mismatch not rejected at 4");

  put(lab, idx(2049, {2}, 1, 0));
  if (!rejects_at(load, 8)) o.fail("truncated labels not rejected at 8");

  Bytes rec(3073, 0);
  rec[0] = 7;
  put(cif, rec);
  const std::vector<fs::path> paths{cif};
  const Dataset c = load_cifar10_bin(paths);
  if (c.labels != std::vector<int>{7} || !(c.inputs == Matrix(3072, 1))) {
    o.fail("CIFAR fixture label 7 / black image mismatch");
  }
  put(cif, Bytes(3072, 0));
  if (!rejects_at([&] { (void)load_cifar10_bin(paths); }, 0)) o.fail("3072-byte CIFAR file accepted");

  SeededRng rng(8);
  Dataset d;
  d.inputs = Matrix(16, 12);
  for (double& v : d.inputs.values()) v = static_cast<double>(rng.uniform_index(256)) / 255.0;
  for (int i = 0; i < 12; ++i) d.labels.push_back((i * 7) % 10);
  d.targets = one_hot(d.labels, 10);
  d.class_count = 10;
  write_mnist_idx(d, img, lab);
  const Dataset back = load_mnist_idx(img, lab);
  if (!bitwise_equal(back.inputs, d.inputs) || back.labels != d.labels) o.fail("IDX round trip");

  if (o.pass) o.detail << "IDX and CIFAR fixtures parse/reject at the expected offsets, round trip bitwise";
}

void literal_mode(Outcome& o) {
  schedule_counts(o, RefreshMode::kLiteral);
  const auto run = testing::run_cli(
      kExe, "--dataset synthetic --hidden 4,4,4,4,4 --refresh-mode literal --max-epochs 3",
      kTmp / "literal");
  if (run.exit_code == 1 || run.exit_code == 2) {
    o.fail("CLI literal run failed (exit " + std::to_string(run.exit_code) + ")");
    return;
  }
  const json j = run.json();
  if (j["config"]["refresh_mode"] != "literal") o.fail("refresh mode not echoed");
  if (j["optimizers"]["poswise"]["updates_per_epoch"] != json::array({1, 2, 3, 4, 5, 6})) {
    o.fail("CLI literal run update counts " + j["optimizers"]["poswise"]["updates_per_epoch"].dump());
  }
  if (o.pass) o.detail << "literal refresh: library and CLI schedule counts match [1..L]";
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "gradient correctness", gradient_correctness},
      {2, "oracle equivalence", oracle_equivalence},
      {3, "schedule invariant", schedule_invariant},
      {4, "determinism", determinism},
      {5, "trend reproduction, MNIST", trend_mnist},
      {6, "trend reproduction, binary", trend_binary},
      {7, "loss sanity", loss_sanity},
      {8, "data-format fidelity", data_format},
      {9, "literal-mode availability", literal_mode},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));
  if (selected.count(7)) selected.insert({5, 6});
  fs::create_directories(kTmp);

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name
              << ", " << std::fixed << std::setprecision(2) << secs << " s): " << o.detail.str()
              << std::defaultfloat << std::endl;
  }
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed")
            << std::endl;
  return failures ? 1 : 0;
}
