// Benchmark comparing the serial reference scans against the OpenMP-parallel
// kernels: the residual grid scan and the finite-difference Ricci oracle.
// Also checks that the two execution policies agree bitwise.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "etl/fixtures.hpp"
#include "etl/report.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double best_of(int reps, const std::function<void()>& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = Clock::now();
    body();
    const std::chrono::duration<double, std::milli> ms = Clock::now() - start;
    best = std::min(best, ms.count());
  }
  return best;
}

bool tensor_rows_equal(const etl::ResidualReport& a, const etl::ResidualReport& b) {
  if (a.reports.size() != b.reports.size()) return false;
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    const auto& ra = a.reports[i];
    const auto& rb = b.reports[i];
    if (ra.tensor_rows.size() != rb.tensor_rows.size()) return false;
    for (std::size_t j = 0; j < ra.tensor_rows.size(); ++j) {
      const auto& ta = ra.tensor_rows[j].components;
      const auto& tb = rb.tensor_rows[j].components;
      if (std::memcmp(&ta, &tb, sizeof(ta)) != 0) return false;
    }
    for (std::size_t j = 0; j < ra.value_rows.size(); ++j) {
      if (ra.value_rows[j].value != rb.value_rows[j].value) return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int grid = 20000;
  int oracle_points = 64;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--grid") == 0 && i + 1 < argc) grid = std::atoi(argv[++i]);
    if (std::strcmp(argv[i], "--oracle-points") == 0 && i + 1 < argc) {
      oracle_points = std::atoi(argv[++i]);
    }
  }

  std::printf("threads available: %d\n", etl::scan::thread_limit());

  etl::fixtures::Params params;
  params.values["m"] = grid;
  params.values["n"] = 3;
  const etl::fixtures::Fixture fixture = etl::fixtures::make("gudermannian", params);
  const etl::EinsteinTypeStructure& st = fixture.structure;

  etl::ResidualReport serial_report, parallel_report;
  const double t_serial = best_of(3, [&] {
    serial_report = etl::residual_eq0001(st, 1e-6, etl::scan::Exec::serial);
  });
  const double t_parallel = best_of(3, [&] {
    parallel_report = etl::residual_eq0001(st, 1e-6, etl::scan::Exec::parallel);
  });
  std::printf("residual scan (%d nodes):  serial %8.2f ms   openmp %8.2f ms   speedup %.2fx\n",
              grid + 1, t_serial, t_parallel, t_serial / t_parallel);
  if (!tensor_rows_equal(serial_report, parallel_report)) {
    std::printf("MISMATCH: serial and parallel residual scans differ\n");
    return 1;
  }

  std::vector<etl::oracle::OracleRecord> serial_records, parallel_records;
  const double o_serial = best_of(3, [&] {
    serial_records = etl::oracle::compare_surface(st.surface(), oracle_points, 1e-4,
                                                  etl::scan::Exec::serial);
  });
  const double o_parallel = best_of(3, [&] {
    parallel_records = etl::oracle::compare_surface(st.surface(), oracle_points, 1e-4,
                                                    etl::scan::Exec::parallel);
  });
  std::printf("fd oracle scan (%d pts):   serial %8.2f ms   openmp %8.2f ms   speedup %.2fx\n",
              oracle_points, o_serial, o_parallel, o_serial / o_parallel);
  bool same = serial_records.size() == parallel_records.size();
  for (std::size_t i = 0; same && i < serial_records.size(); ++i) {
    same = serial_records[i].oracle_value == parallel_records[i].oracle_value &&
           serial_records[i].closed_form == parallel_records[i].closed_form;
  }
  if (!same) {
    std::printf("MISMATCH: serial and parallel oracle scans differ\n");
    return 1;
  }
  std::printf("serial and parallel results identical\n");
  return 0;
}
