// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "quadrelax/analysis.hpp"
#include "quadrelax/model.hpp"
#include "quadrelax/relaxer.hpp"

namespace quadrelax {

// Native instance format: line-oriented keyword grammar (see docs/formats.md).
// parse -> serialize -> parse is the identity.
MiqcqpInstance parse_native(const std::string& path);
MiqcqpInstance parse_native_stream(std::istream& in);
void write_native(const MiqcqpInstance& inst, const std::string& path);
void write_native_stream(const MiqcqpInstance& inst, std::ostream& out);

struct BoxQpParseResult {
  MiqcqpInstance instance;
  bool symmetrized = false;  // asymmetric Q averaged; caller may warn
};

// boxQP text format: "n", the linear vector c, then the n x n matrix Q,
// whitespace separated. Interpreted as min (1/2) x'Qx + c'x over [0,1]^n;
// maximize negates both.
BoxQpParseResult parse_boxqp(const std::string& path, bool maximize = false);
BoxQpParseResult parse_boxqp_stream(std::istream& in, bool maximize = false);

// LP-format export (Minimize / Subject To / Bounds / Binaries sections),
// coefficients printed with 17 significant digits.
void export_lp_file(const MipModel& model, const std::string& path);
void export_lp_stream(const MipModel& model, std::ostream& out);

// Reader for the same LP dialect; used by `solve MODEL` and round-trip tests.
MipModel parse_lp_file(const std::string& path);
MipModel parse_lp_stream(std::istream& in);

// Relaxation bookkeeping sidecar (JSON): term/aux mapping and model counts.
void write_term_map_json(const RelaxationResult& result, const std::string& path);

// CSV schemas (documented in docs/formats.md).
void write_error_report_header(std::ostream& out);
void write_error_report_row(std::ostream& out, const ErrorReportRow& row);

struct BenchRow {
  std::string instance;
  Method method = Method::NMDT;
  int L = 1;
  int L1 = 1;
  std::string status;
  double dual_bound = 0.0;
  double primal = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  long nodes = 0;
  double wall_seconds = 0.0;
};

void write_bench_header(std::ostream& out);
void write_bench_row(std::ostream& out, const BenchRow& row);
std::vector<BenchRow> read_bench_csv(const std::string& path);

void write_profile_csv(const ProfileTable& table, std::ostream& out);

struct SgmRow {
  std::string solver;
  double sgm_seconds = 0.0;
  int instances = 0;
};
void write_sgm_csv(const std::vector<SgmRow>& rows, double shift, std::ostream& out);

}  // namespace quadrelax
