#pragma once

#include <ostream>
#include <vector>

#include <Eigen/Dense>

namespace amc::lupus {

struct Cell {
  double delta_igg;
  double iga;
  int cases;
  int total;
};

/// The 55-patient lupus nephritis table, one cell per covariate pair, and
/// its per-patient expansion: cells in table order, cases first within a
/// cell.
struct LupusDataset {
  std::vector<Cell> cells;
  Eigen::MatrixXd X;   // rows (1, delta_igg, iga)
  std::vector<int> y;  // 0/1

  std::size_t patients() const { return y.size(); }
  int positives() const;
};

const LupusDataset& load_dataset();

/// delta_igg,iga,cases,total
void write_dataset_csv(std::ostream& out, const LupusDataset& data);

}  // namespace amc::lupus
