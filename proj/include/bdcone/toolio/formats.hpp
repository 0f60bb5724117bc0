#pragma once

#include <iosfwd>
#include <string>

#include "bdcone/conic/problem.hpp"

namespace bdcone {

// Numbers are written with 17 significant digits. Off-diagonal PSD
// coefficients a / sqrt(2) are computed in long double and written with 21,
// so re-importing yields the original a exactly.

/// CBF (version 3) text: Free, Zero, NonNeg and SecondOrder blocks become
/// F, L=, L+ and Q scalar cones, PSD blocks become PSDVAR entries, and the
/// rows form one L= constraint cone with A z - b. A comment line records the
/// block order so the importer restores it exactly.
void write_cbf(const ConicProblem& p, std::ostream& out);
std::string to_cbf(const ConicProblem& p);
ConicProblem read_cbf(std::istream& in);
ConicProblem from_cbf(const std::string& text);

struct SdpaOptions {
  /// Rewrite 3-dimensional second-order blocks (t, u, v) as 2x2 PSD blocks
  /// [[t + u, v], [v, t - u]] and free blocks as differences of nonnegative
  /// ones. Other unsupported blocks still raise an error.
  bool rewrite = false;
};

/// SDPA sparse text. The problem is written as the SDPA dual
/// max <F0, Y> s.t. <F_i, Y> = c_i with F0 = -C, F_i = row i of A, c = b,
/// so the SDPA objective is the negated conic value. NonNeg blocks become
/// diagonal blocks. Throws std::invalid_argument for Free, Zero or
/// SecondOrder blocks unless `rewrite` allows them.
void write_sdpa(const ConicProblem& p, std::ostream& out, const SdpaOptions& options = {});
std::string to_sdpa(const ConicProblem& p, const SdpaOptions& options = {});
ConicProblem read_sdpa(std::istream& in);
ConicProblem from_sdpa(const std::string& text);

/// Writes to `path`; throws std::runtime_error on I/O failure.
void save_text(const std::string& path, const std::string& text);
std::string load_text(const std::string& path);

}  // namespace bdcone
