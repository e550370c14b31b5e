#include "riskdyn/charts.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include "riskdyn/csv.hpp"
#include "riskdyn/error.hpp"

namespace riskdyn {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

constexpr const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) { return csv::format_fixed(v, 2); }

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Scale {
  double lo;
  double hi;
  double px_lo;
  double px_hi;

  double operator()(double v) const {
    if (hi == lo) return (px_lo + px_hi) / 2.0;
    return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
  }
};

// Degenerate ranges are widened so axes always have extent.
std::pair<double, double> padded(double lo, double hi) {
  if (hi > lo) {
    const double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
  }
  return {lo - 1.0, hi + 1.0};
}

void open_svg(std::ostringstream& out, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
      << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n"
      << "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
      << "\" fill=\"white\"/>\n"
      << "<text class=\"title\" x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << xml_escape(title) << "</text>\n";
}

void axes(std::ostringstream& out, const Scale& xs, const Scale& ys, const std::string& xlabel,
          const std::string& ylabel, const std::vector<double>& xticks, bool integer_x) {
  const double x0 = kLeft;
  const double y0 = kHeight - kBottom;
  out << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
      << "<line class=\"x-axis\" x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(kWidth - kRight)
      << "\" y2=\"" << num(y0) << "\"/>\n"
      << "<line class=\"y-axis\" x1=\"" << num(x0) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x0) << "\" y2=\""
      << num(y0) << "\"/>\n"
      << "</g>\n<g class=\"ticks\" font-size=\"10\">\n";
  for (double t : xticks) {
    out << "<text x=\"" << num(xs(t)) << "\" y=\"" << num(y0 + 16) << "\" text-anchor=\"middle\">"
        << (integer_x ? std::to_string(static_cast<long>(t)) : csv::format_fixed(t, 2)) << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = ys.lo + (ys.hi - ys.lo) * i / 4.0;
    out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(ys(v) + 3) << "\" text-anchor=\"end\">"
        << csv::format_fixed(v, 2) << "</text>\n";
  }
  out << "</g>\n"
      << "<text class=\"x-label\" x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << num(kHeight - 12)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << xml_escape(xlabel) << "</text>\n"
      << "<text class=\"y-label\" x=\"16\" y=\"" << num((kTop + kHeight - kBottom) / 2)
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << num((kTop + kHeight - kBottom) / 2) << ")\">" << xml_escape(ylabel) << "</text>\n";
}

}  // namespace

std::vector<YearSummary> yearly_summary(const Dataset& dataset, Indicator variable) {
  struct Acc {
    double sum = 0.0;
    long n = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
  };
  std::map<int, Acc> by_year;
  for (const auto& r : dataset.records()) {
    auto& a = by_year[r.year];
    const double v = r.indicator(variable);
    a.sum += v;
    ++a.n;
    a.lo = std::min(a.lo, v);
    a.hi = std::max(a.hi, v);
  }
  std::vector<YearSummary> out;
  for (const auto& [year, a] : by_year) out.push_back({year, a.sum / static_cast<double>(a.n), a.lo, a.hi});
  return out;
}

std::string emit_temporal_chart(const Dataset& dataset, Indicator variable) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "temporal chart");
  const auto summary = yearly_summary(dataset, variable);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : summary) {
    lo = std::min(lo, s.min);
    hi = std::max(hi, s.max);
  }
  const auto [ylo, yhi] = padded(lo, hi);
  const Scale xs{static_cast<double>(summary.front().year), static_cast<double>(summary.back().year), kLeft + 10,
                 kWidth - kRight - 10};
  const Scale ys{ylo, yhi, kHeight - kBottom, kTop};

  const std::string name(indicator_name(variable));
  std::ostringstream out;
  open_svg(out, name + " by year (mean, min-max band)");
  std::vector<double> ticks;
  for (const auto& s : summary) ticks.push_back(s.year);
  axes(out, xs, ys, "Year", name, ticks, true);

  out << "<polygon class=\"band\" fill=\"#1f77b4\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
  for (const auto& s : summary) out << num(xs(s.year)) << ',' << num(ys(s.max)) << ' ';
  for (auto it = summary.rbegin(); it != summary.rend(); ++it) out << num(xs(it->year)) << ',' << num(ys(it->min)) << ' ';
  out << "\"/>\n";
  out << "<polyline class=\"mean\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < summary.size(); ++i) {
    if (i) out << ' ';
    out << num(xs(summary[i].year)) << ',' << num(ys(summary[i].mean));
  }
  out << "\"/>\n";
  for (const auto& s : summary) {
    out << "<circle class=\"mean-point\" cx=\"" << num(xs(s.year)) << "\" cy=\"" << num(ys(s.mean))
        << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string emit_cluster_scatter(const FeatureMatrix& projection, const std::vector<int>& labels) {
  if (projection.n_cols() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "scatter needs a 2-column projection, got " +
                                                  std::to_string(projection.n_cols()));
  }
  if (static_cast<std::size_t>(projection.n_rows()) != labels.size()) {
    throw Error(ErrorCode::DimensionMismatch, "projection rows vs labels");
  }
  if (labels.empty()) throw Error(ErrorCode::EmptyDataset, "scatter");
  const auto& v = projection.values;
  const auto [xlo, xhi] = padded(v.col(0).minCoeff(), v.col(0).maxCoeff());
  const auto [ylo, yhi] = padded(v.col(1).minCoeff(), v.col(1).maxCoeff());
  const Scale xs{xlo, xhi, kLeft, kWidth - kRight};
  const Scale ys{ylo, yhi, kHeight - kBottom, kTop};

  std::ostringstream out;
  open_svg(out, "Transduction labels on the first two principal components");
  std::vector<double> ticks;
  for (int i = 0; i <= 4; ++i) ticks.push_back(xlo + (xhi - xlo) * i / 4.0);
  const std::string xname = projection.columns.size() > 0 ? projection.columns[0] : "PC1";
  const std::string yname = projection.columns.size() > 1 ? projection.columns[1] : "PC2";
  axes(out, xs, ys, xname, yname, ticks, false);

  auto color = [](int label) {
    const auto n = static_cast<int>(std::size(kPalette));
    return kPalette[((label % n) + n) % n];
  };
  std::map<int, std::pair<Eigen::Vector2d, long>> centers;
  out << "<g class=\"points\">\n";
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    const int label = labels[static_cast<std::size_t>(i)];
    auto& c = centers.try_emplace(label, Eigen::Vector2d::Zero(), 0).first->second;
    c.first += v.row(i).transpose();
    ++c.second;
    out << "<circle class=\"point cluster-" << label << "\" cx=\"" << num(xs(v(i, 0))) << "\" cy=\"" << num(ys(v(i, 1)))
        << "\" r=\"2.5\" fill=\"" << color(label) << "\" fill-opacity=\"0.6\"/>\n";
  }
  out << "</g>\n<g class=\"centers\">\n";
  for (const auto& [label, c] : centers) {
    const Eigen::Vector2d m = c.first / static_cast<double>(c.second);
    const double cx = xs(m(0));
    const double cy = ys(m(1));
    out << "<path class=\"center cluster-" << label << "\" d=\"M" << num(cx - 7) << ' ' << num(cy - 7) << " L"
        << num(cx + 7) << ' ' << num(cy + 7) << " M" << num(cx - 7) << ' ' << num(cy + 7) << " L" << num(cx + 7) << ' '
        << num(cy - 7) << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
  }
  out << "</g>\n<g class=\"legend\" font-size=\"11\">\n";
  int row = 0;
  for (const auto& [label, c] : centers) {
    const double y = kTop + 10 + 16 * row++;
    out << "<rect x=\"" << num(kWidth - kRight - 90) << "\" y=\"" << num(y - 8) << "\" width=\"10\" height=\"10\" fill=\""
        << color(label) << "\"/>\n"
        << "<text x=\"" << num(kWidth - kRight - 74) << "\" y=\"" << num(y) << "\">cluster " << label << " (" << c.second
        << ")</text>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace riskdyn
