#include "poswise/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"

namespace poswise::report {
namespace {

using nlohmann::json;

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fixed(double v, int precision) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

const std::vector<double>* history(const ExperimentReport& report, OptimizerKind kind) {
  const RunOutcome* run = report.find(kind);
  return run ? &run->record.loss_history : nullptr;
}

std::optional<double> parse_cell(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw std::invalid_argument("unparseable CSV cell '" + cell + "'");
  }
  return v;
}

json run_json(const TrainRecord& r) {
  json j;
  j["epochs_to_threshold"] =
      r.epochs_to_threshold ? json(*r.epochs_to_threshold) : json(nullptr);
  j["wall_seconds"] = r.wall_seconds;
  j["initial_loss"] = r.initial_loss;
  j["final_loss"] = r.final_loss();
  j["epochs_run"] = r.loss_history.size();
  j["diverged"] = r.diverged;
  j["divergence_message"] = r.divergence_message;
  j["loss_history"] = r.loss_history;
  std::vector<std::size_t> totals;
  for (const auto& epoch : r.update_counts) {
    totals.resize(epoch.size(), 0);
    for (std::size_t l = 0; l < epoch.size(); ++l) totals[l] += epoch[l];
  }
  j["updates_per_epoch"] = r.update_counts.empty() ? std::vector<std::size_t>{} : r.update_counts.front();
  j["total_updates"] = totals;
  return j;
}

struct ChartFrame {
  double left = 80, right = 30, top = 40, bottom = 60;
  double width = 800, height = 480;
  double x_min = 1, x_max = 1, y_min = 0, y_max = 1;

  double px(double epoch) const {
    const double span = x_max > x_min ? x_max - x_min : 1.0;
    const double t = x_max > x_min ? (epoch - x_min) / span : 0.5;
    return left + t * (width - left - right);
  }
  double py(double loss) const {
    const double t = y_max > y_min ? (loss - y_min) / (y_max - y_min) : 0.5;
    return height - bottom - t * (height - top - bottom);
  }
};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

}  // namespace

std::string format_csv(const ExperimentReport& report) {
  const auto* gd = history(report, OptimizerKind::kGradientDescent);
  const auto* pw = history(report, OptimizerKind::kPositionWise);
  const std::size_t rows = std::max(gd ? gd->size() : 0, pw ? pw->size() : 0);
  std::string out = "epoch,loss_gd,loss_pw\n";
  for (std::size_t i = 0; i < rows; ++i) {
    out += std::to_string(i + 1);
    out += ',';
    if (gd && i < gd->size()) out += shortest((*gd)[i]);
    out += ',';
    if (pw && i < pw->size()) out += shortest((*pw)[i]);
    out += '\n';
  }
  return out;
}

CsvColumns parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "epoch,loss_gd,loss_pw") {
    throw std::invalid_argument("CSV header must be 'epoch,loss_gd,loss_pw'");
  }
  CsvColumns cols;
  std::size_t expected_epoch = 1;
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("CSV row needs three fields: " + line);
    if (line.substr(0, c1) != std::to_string(expected_epoch++)) {
      throw std::invalid_argument("CSV epochs must count up from 1");
    }
    cols.gd.push_back(parse_cell(line.substr(c1 + 1, c2 - c1 - 1)));
    cols.pw.push_back(parse_cell(line.substr(c2 + 1)));
  }
  return cols;
}

std::string format_json(const ExperimentReport& report) {
  json j;
  j["schema_version"] = ExperimentReport::kSchemaVersion;
  j["dataset"] = report.dataset;
  j["samples"] = report.samples;
  j["seed"] = report.seed;
  j["eta"] = report.eta;
  j["threshold"] = report.threshold;
  j["config"] = {
      {"widths", report.widths},
      {"loss", std::string(to_string(report.loss.kind))},
      {"margin", report.loss.margin},
      {"scale", report.loss.scale},
      {"refresh_mode", std::string(to_string(report.refresh_mode))},
      {"train_bias", report.train_bias},
      {"max_epochs", report.max_epochs},
      {"kernel_backend", report.kernel_backend},
  };
  j["optimizers"] = json::object();
  for (const auto& run : report.runs) {
    j["optimizers"][std::string(to_string(run.kind))] = run_json(run.record);
  }
  return j.dump(2) + "\n";
}

std::string format_svg(const ExperimentReport& report) {
  ChartFrame f;
  std::size_t longest = 1;
  double lo = report.threshold, hi = report.threshold;
  for (const auto& run : report.runs) {
    longest = std::max(longest, run.record.loss_history.size());
    for (double v : run.record.loss_history) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) lo = hi = 0.0;
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  f.x_max = static_cast<double>(longest);
  f.y_min = lo;
  f.y_max = hi;

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << f.width
    << "\" height=\"" << f.height << "\" viewBox=\"0 0 " << f.width << ' ' << f.height << "\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << f.width << "\" height=\"" << f.height
    << "\" fill=\"white\"/>\n"
    << "<text x=\"" << f.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"15\">" << xml_escape(report.dataset) << ": loss per epoch</text>\n";

  const double x0 = f.left, x1 = f.width - f.right;
  const double y0 = f.height - f.bottom, y1 = f.top;
  s << "<g stroke=\"black\" stroke-width=\"1\">\n"
    << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0 << "\"/>\n"
    << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1 << "\"/>\n"
    << "</g>\n";

  s << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double epoch = f.x_min + (f.x_max - f.x_min) * t / 4.0;
    const double loss = f.y_min + (f.y_max - f.y_min) * t / 4.0;
    s << "<text x=\"" << fixed(f.px(epoch), 1) << "\" y=\"" << y0 + 16
      << "\" text-anchor=\"middle\">" << fixed(epoch, 0) << "</text>\n"
      << "<text x=\"" << x0 - 6 << "\" y=\"" << fixed(f.py(loss) + 4, 1)
      << "\" text-anchor=\"end\">" << fixed(loss, 3) << "</text>\n";
  }
  s << "</g>\n"
    << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << f.height - 18
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">epoch</text>\n"
    << "<text x=\"18\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"13\" transform=\"rotate(-90 18 " << (y0 + y1) / 2 << ")\">loss</text>\n";

  const double ty = f.py(report.threshold);
  s << "<line class=\"threshold\" x1=\"" << x0 << "\" y1=\"" << fixed(ty, 2) << "\" x2=\"" << x1
    << "\" y2=\"" << fixed(ty, 2)
    << "\" stroke=\"gray\" stroke-dasharray=\"6 4\" stroke-width=\"1\"/>\n";

  double legend_y = f.top + 10;
  for (const auto& run : report.runs) {
    const bool is_gd = run.kind == OptimizerKind::kGradientDescent;
    const char* color = is_gd ? "#1f77b4" : "#d62728";
    const char* label = is_gd ? "gradient descent" : "position-wise";
    const auto& h = run.record.loss_history;
    s << "<polyline class=\"series\" data-optimizer=\"" << to_string(run.kind)
      << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (!std::isfinite(h[i])) break;
      if (i) s << ' ';
      s << fixed(f.px(static_cast<double>(i + 1)), 2) << ',' << fixed(f.py(h[i]), 2);
    }
    s << "\"/>\n";
    if (h.size() == 1 && std::isfinite(h[0])) {
      s << "<circle cx=\"" << fixed(f.px(1.0), 2) << "\" cy=\"" << fixed(f.py(h[0]), 2)
        << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    s << "<text x=\"" << x1 - 150 << "\" y=\"" << legend_y << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\" fill=\"" << color << "\">" << label << "</text>\n";
    legend_y += 16;
  }
  s << "</svg>\n";
  return s.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

OutputFiles write_all(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  OutputFiles files{dir / "losses.csv", dir / "report.json", dir / "losses.svg"};
  write_text(files.csv, format_csv(report));
  write_text(files.json, format_json(report));
  write_text(files.svg, format_svg(report));
  return files;
}

}  // namespace poswise::report
