#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gpsim/metrics.hpp"
#include "gpsim/postprocess.hpp"

namespace gpsim {

class CsvError : public std::runtime_error {
public:
    explicit CsvError(const std::string& what) : std::runtime_error(what) {}
};

/// Doubles rendered with 17 significant digits so outputs round-trip and
/// determinism is byte-testable.
std::string format_double(double x);

/// Numeric CSV with a header row.
struct Table {
    std::vector<std::string> columns;
    Eigen::MatrixXd values;
};

Table read_csv(const std::string& path);
void write_csv(const std::string& path, const Table& table);

/// Dataset file: columns x1..xp then optionally y.
struct DatasetCsv {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    bool has_y = false;
};

DatasetCsv read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Chain file: iter, beta_1..beta_p (theta_* for separable/isotropic), eta,
/// log_post; one row per stored sample. Reconciled chains append a flips
/// column, which read_chain_csv ignores.
void write_chain_csv(const std::string& path, const Chain& chain);
void write_chain_csv(const std::string& path, const ReconciledChain& rec);
Chain read_chain_csv(const std::string& path);

/// Benchmark outputs: one row per (method, replicate) and the six-row
/// summary table.
void write_results_csv(const std::string& path, const ComparisonSummary& s);
void write_summary_csv(const std::string& path, const ComparisonSummary& s);

}  // namespace gpsim
