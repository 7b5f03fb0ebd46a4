#include "pathglm/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pathglm {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + s.size();
}

bool is_unsigned_int(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

void check_response_domain(Family family, double y, std::size_t line_no) {
  if (family == Family::Logistic) {
    if (y != 0.0 && y != 1.0)
      throw DomainError("logistic response must be 0 or 1 (line " +
                        std::to_string(line_no) + ")");
  } else if (y < 0.0 || std::floor(y) != y) {
    throw DomainError("Poisson response must be a non-negative integer (line " +
                      std::to_string(line_no) + ")");
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Dataset load_csv(const std::string& path, const std::string& response_column,
                 Family family) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path + ": empty file (header row required)");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_csv(line);
  if (header.size() < 2)
    throw ParseError(path + ": need a response column and at least one predictor");

  int resp = -1;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == response_column) {
      resp = static_cast<int>(c);
      break;
    }
  if (resp < 0 && is_unsigned_int(response_column)) {
    int idx = std::atoi(response_column.c_str());
    if (idx >= 0 && idx < static_cast<int>(header.size())) resp = idx;
  }
  if (resp < 0)
    throw ParseError(path + ": response column '" + response_column + "' not found");

  std::vector<double> ys;
  std::vector<double> xs;  // row-major staging
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv(line);
    if (fields.size() != header.size())
      throw ParseError(path + ": line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v;
      if (!parse_number(fields[c], v))
        throw ParseError(path + ": line " + std::to_string(line_no) + ", column " +
                         std::to_string(c + 1) + ": non-numeric cell '" +
                         fields[c] + "'");
      if (static_cast<int>(c) == resp) {
        check_response_domain(family, v, line_no);
        ys.push_back(v);
      } else {
        xs.push_back(v);
      }
    }
  }
  if (ys.empty()) throw ParseError(path + ": no data rows");

  Dataset data;
  data.family = family;
  const Eigen::Index n = static_cast<Eigen::Index>(ys.size());
  const Eigen::Index p = static_cast<Eigen::Index>(header.size()) - 1;
  data.X.resize(n, p);
  data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    data.y[i] = ys[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < p; ++j)
      data.X(i, j) = xs[static_cast<std::size_t>(i * p + j)];
  }
  data.validate();
  return data;
}

void write_dataset(const std::string& path, const Dataset& data) {
  std::ofstream out = open_out(path);
  out << "y";
  for (Eigen::Index j = 1; j <= data.p(); ++j) out << ",x" << j;
  out << "\n";
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    out << format_double(data.y[i]);
    for (Eigen::Index j = 0; j < data.p(); ++j)
      out << "," << format_double(data.X(i, j));
    out << "\n";
  }
}

void write_path_csv(const std::string& path, const PathSolution& solution,
                    const std::vector<Coefficients>* beta_override) {
  if (beta_override &&
      beta_override->size() != solution.points.size())
    throw std::invalid_argument("write_path_csv: override length mismatch");
  std::ofstream out = open_out(path);
  const Eigen::Index pc =
      solution.points.empty() ? 0 : solution.points.front().beta.size();
  out << "k,lambda,active_size,corrector,kkt_residual";
  for (Eigen::Index j = 0; j < pc; ++j) out << ",beta_" << j;
  out << "\n";
  for (std::size_t k = 0; k < solution.points.size(); ++k) {
    const PathPoint& pt = solution.points[k];
    const Coefficients& beta = beta_override ? (*beta_override)[k] : pt.beta;
    out << (k + 1) << "," << format_double(pt.lambda) << ","
        << pt.active_set.size() << "," << to_string(pt.corrector) << ","
        << format_double(pt.kkt_residual);
    for (Eigen::Index j = 0; j < beta.size(); ++j)
      out << "," << format_double(beta[j]);
    out << "\n";
  }
}

void write_cv_csv(const std::string& path, const SelectionReport& report) {
  std::ofstream out = open_out(path);
  out << "lambda,mean_deviance,sd_deviance\n";
  for (std::size_t k = 0; k < report.lambdas.size(); ++k) {
    double sd = k < report.score_sd.size() ? report.score_sd[k] : 0.0;
    out << format_double(report.lambdas[k]) << ","
        << format_double(report.scores[k]) << "," << format_double(sd) << "\n";
  }
}

void write_summary_json(const std::string& path, const Dataset& data,
                        const PathSolution& solution,
                        const SelectionReport& report,
                        const Coefficients& chosen_beta_out) {
  nlohmann::json j;
  j["family"] = to_string(data.family);
  j["n"] = data.n();
  j["p"] = data.p();
  j["penalty"] = {{"kind", to_string(solution.penalty.kind)},
                  {"gamma", solution.penalty.gamma}};
  j["stop_reason"] = to_string(solution.stop_reason);
  j["grid_size"] = solution.grid.size();
  j["points_emitted"] = solution.points.size();

  int nonzero = 0;
  for (Eigen::Index t = 1; t < chosen_beta_out.size(); ++t)
    if (chosen_beta_out[t] != 0.0) ++nonzero;
  nlohmann::json sel;
  sel["criterion"] = report.criterion;
  sel["chosen_index"] = report.chosen_index;
  sel["chosen_lambda"] = report.lambdas.empty()
                             ? 0.0
                             : report.lambdas[static_cast<std::size_t>(report.chosen_index)];
  sel["chosen_score"] = report.scores.empty()
                            ? 0.0
                            : report.scores[static_cast<std::size_t>(report.chosen_index)];
  sel["nonzero"] = nonzero;
  std::vector<double> beta(chosen_beta_out.data(),
                           chosen_beta_out.data() + chosen_beta_out.size());
  sel["beta"] = beta;
  j["selection"] = sel;

  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

void write_path_svg(const std::string& path, const PathSolution& solution) {
  const double W = 820, H = 560, ml = 70, mr = 20, mt = 20, mb = 50;
  std::ofstream out = open_out(path);
  const auto& pts = solution.points;
  std::vector<int> ever;  // penalized coordinates active anywhere on the path
  if (!pts.empty()) {
    for (Eigen::Index j = 1; j < pts.front().beta.size(); ++j)
      for (const PathPoint& pt : pts)
        if (pt.beta[j] != 0.0) {
          ever.push_back(static_cast<int>(j));
          break;
        }
  }
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!pts.empty()) {
    xmin = std::log(pts.back().lambda);
    xmax = std::log(pts.front().lambda);
    for (const PathPoint& pt : pts)
      for (int j : ever) {
        ymin = std::min(ymin, pt.beta[j]);
        ymax = std::max(ymax, pt.beta[j]);
      }
  }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  // x runs from lambda_max (left) to lambda_min (right).
  auto X = [&](double loglam) {
    return ml + (xmax - loglam) / (xmax - xmin) * (W - ml - mr);
  };
  auto Y = [&](double b) { return H - mb - (b - ymin) / (ymax - ymin) * (H - mt - mb); };
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << Y(0.0) << "\" x2=\"" << W - mr
      << "\" y2=\"" << Y(0.0) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
      << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  for (std::size_t t = 0; t < ever.size(); ++t) {
    int j = ever[t];
    out << "<polyline fill=\"none\" stroke=\"" << palette[t % 10]
        << "\" stroke-width=\"1.5\" points=\"";
    for (const PathPoint& pt : pts)
      out << X(std::log(pt.lambda)) << "," << Y(pt.beta[j]) << " ";
    out << "\"/>\n";
    if (!pts.empty())
      out << "<text x=\"" << W - mr + 2 << "\" y=\""
          << Y(pts.back().beta[j]) + 4 << "\" font-size=\"10\">" << j
          << "</text>\n";
  }
  out << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">log(lambda)</text>\n";
  out << "<text x=\"18\" y=\"" << (mt + H - mb) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (mt + H - mb) / 2 << ")\">coefficient</text>\n";
  out << "</svg>\n";
}

Standardizer Standardizer::fit(const Matrix& X) {
  Standardizer s;
  s.center = X.colwise().mean();
  s.scale.resize(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    double v = (X.col(j).array() - s.center[j]).square().mean();
    s.scale[j] = std::sqrt(v);
    if (!(s.scale[j] > 0.0) || !std::isfinite(s.scale[j]))
      throw DomainError("standardize: column " + std::to_string(j + 1) +
                        " is constant");
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& X) const {
  Matrix out = X;
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    out.col(j) = (X.col(j).array() - center[j]) / scale[j];
  return out;
}

Coefficients Standardizer::unstandardize(const Coefficients& beta_std) const {
  Coefficients out = beta_std;
  for (Eigen::Index j = 1; j < beta_std.size(); ++j) {
    out[j] = beta_std[j] / scale[j - 1];
    out[0] -= beta_std[j] * center[j - 1] / scale[j - 1];
  }
  return out;
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::GridExhausted: return "grid_exhausted";
    case StopReason::Saturated: return "saturated";
    case StopReason::MaxActiveReached: return "max_active_reached";
  }
  return "unknown";
}

const char* to_string(CorrectorKind kind) {
  return kind == CorrectorKind::NewtonRaphson ? "newton" : "cd";
}

const char* to_string(Family family) {
  return family == Family::Logistic ? "logistic" : "poisson";
}

const char* to_string(PenaltyKind kind) {
  return kind == PenaltyKind::Lasso ? "lasso" : "mcp";
}

}  // namespace pathglm
