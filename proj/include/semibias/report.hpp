#pragma once

#include <string>

#include "semibias/montecarlo.hpp"

namespace semibias {

// CSV renderings of a Monte Carlo report.
//
// report.csv columns (one row per (method, bandwidth), sorted by
// (estimator, method, h)):
//   estimator,method,eta,n,h,bias,variance,mse,coverage,replications,seed
// `eta` is the semicolon-joined jackknife scale list for msj rows and empty
// otherwise.
//
// tstats.csv columns: estimator,method,h,replication,t
//
// Numbers are printed with 6 significant digits (h with 6 decimal places)
// unless full_precision is set, which switches to round-trippable %.17g.
std::string render_report_csv(const MonteCarloReport& report,
                              bool full_precision = false);
std::string render_tstats_csv(const MonteCarloReport& report,
                              bool full_precision = false);

// Writes report.csv and tstats.csv (UTF-8, LF line endings) into out_dir,
// creating the directory if needed.
void write_report_files(const MonteCarloReport& report,
                        const std::string& out_dir,
                        bool full_precision = false);

}  // namespace semibias
