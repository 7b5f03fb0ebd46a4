#pragma once

#include <string>

#include "pathglm/select.hpp"

namespace pathglm {

// 17-significant-digit serialization; round-trips bit-exactly through strtod.
std::string format_double(double x);

// CSV with a required header row; the response column is picked by name (or,
// if no name matches and the string is an unsigned integer, by 0-based column
// index); remaining numeric columns form X in file order.
// Throws ParseError (with line/column location) or DomainError (response
// outside the family domain, naming the offending line).
Dataset load_csv(const std::string& path, const std::string& response_column,
                 Family family);

// Header "y,x1,..,xp"; values at 17 significant digits.
void write_dataset(const std::string& path, const Dataset& data);

// Columns: k, lambda, active_size, corrector, kkt_residual, beta_0..beta_p.
// `beta_override`, when non-null, substitutes the written coefficient rows
// (used to emit back-transformed coefficients after --standardize).
void write_path_csv(const std::string& path, const PathSolution& solution,
                    const std::vector<Coefficients>* beta_override = nullptr);

void write_cv_csv(const std::string& path, const SelectionReport& report);

void write_summary_json(const std::string& path, const Dataset& data,
                        const PathSolution& solution,
                        const SelectionReport& report,
                        const Coefficients& chosen_beta_out);

// Static coefficient-path plot: beta_j versus log(lambda), one polyline per
// ever-active coordinate, emitted as a standalone SVG.
void write_path_svg(const std::string& path, const PathSolution& solution);

// Column centering/scaling (population sd) with coefficient back-transform.
struct Standardizer {
  Vector center;
  Vector scale;

  // Throws DomainError on a constant column.
  static Standardizer fit(const Matrix& X);
  Matrix apply(const Matrix& X) const;
  // Maps coefficients of the standardized problem to the original scale.
  Coefficients unstandardize(const Coefficients& beta_std) const;
};

const char* to_string(StopReason reason);
const char* to_string(CorrectorKind kind);
const char* to_string(Family family);
const char* to_string(PenaltyKind kind);

}  // namespace pathglm
