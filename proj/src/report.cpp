#include "semibias/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace semibias {

namespace {

std::string fmt(double v, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string fmt_value(double v, bool full_precision) {
  return fmt(v, full_precision ? "%.17g" : "%.6g");
}

std::string fmt_h(double v, bool full_precision) {
  return fmt(v, full_precision ? "%.17g" : "%.6f");
}

std::string eta_column(const MonteCarloReport& report, MethodId method) {
  if (method != MethodId::Msj) return "";
  std::ostringstream os;
  for (std::size_t i = 0; i < report.config.msj_etas.size(); ++i) {
    if (i) os << ';';
    os << fmt(report.config.msj_etas[i], "%g");
  }
  return os.str();
}

}  // namespace

std::string render_report_csv(const MonteCarloReport& report,
                              bool full_precision) {
  std::ostringstream os;
  os << "estimator,method,eta,n,h,bias,variance,mse,coverage,replications,seed\n";
  const std::string est = estimator_name(report.config.estimator);
  for (const ReportCell& cell : report.cells) {
    os << est << ',' << method_name(cell.method) << ','
       << eta_column(report, cell.method) << ',' << report.config.n << ','
       << fmt_h(cell.h, full_precision) << ','
       << fmt_value(cell.bias, full_precision) << ','
       << fmt_value(cell.variance, full_precision) << ','
       << fmt_value(cell.mse, full_precision) << ','
       << fmt_value(cell.coverage, full_precision) << ','
       << report.config.replications << ',' << report.config.master_seed
       << '\n';
  }
  return os.str();
}

std::string render_tstats_csv(const MonteCarloReport& report,
                              bool full_precision) {
  std::ostringstream os;
  os << "estimator,method,h,replication,t\n";
  const std::string est = estimator_name(report.config.estimator);
  for (const ReportCell& cell : report.cells) {
    for (std::size_t r = 0; r < cell.tstats.size(); ++r) {
      os << est << ',' << method_name(cell.method) << ','
         << fmt_h(cell.h, full_precision) << ',' << r << ','
         << fmt_value(cell.tstats[r], full_precision) << '\n';
    }
  }
  return os.str();
}

void write_report_files(const MonteCarloReport& report,
                        const std::string& out_dir, bool full_precision) {
  std::filesystem::create_directories(out_dir);
  const auto write = [&](const std::string& name, const std::string& body) {
    const std::filesystem::path path = std::filesystem::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
  };
  write("report.csv", render_report_csv(report, full_precision));
  write("tstats.csv", render_tstats_csv(report, full_precision));
}

}  // namespace semibias
