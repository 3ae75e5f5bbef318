#include "amc/lupus/dataset.hpp"

#include <numeric>

#include "amc/errors.hpp"
#include "amc/io/output.hpp"

namespace amc::lupus {

namespace {

// rows by delta IgG, columns IgA in {0, 0.5, 1, 1.5, 2}; empty cells omitted
constexpr Cell kTable[] = {
    {-3.0, 0.0, 0, 1},
    {-2.5, 0.0, 0, 3},
    {-2.0, 0.0, 0, 7}, {-2.0, 2.0, 0, 1},
    {-1.5, 0.0, 0, 6}, {-1.5, 0.5, 0, 1},
    {-1.0, 0.0, 0, 6}, {-1.0, 0.5, 0, 1}, {-1.0, 1.0, 0, 1}, {-1.0, 2.0, 0, 1},
    {-0.5, 0.0, 0, 4}, {-0.5, 1.5, 1, 1},
    {0.0, 0.0, 0, 3}, {0.0, 1.0, 0, 1}, {0.0, 1.5, 1, 1},
    {0.5, 0.0, 3, 4}, {0.5, 1.0, 1, 1}, {0.5, 1.5, 1, 1}, {0.5, 2.0, 1, 1},
    {1.0, 0.0, 1, 1}, {1.0, 1.0, 1, 1}, {1.0, 1.5, 1, 1}, {1.0, 2.0, 4, 4},
    {1.5, 0.0, 1, 1}, {1.5, 1.5, 2, 2},
};

constexpr int table_total(int Cell::*field) {
  int s = 0;
  for (const auto& c : kTable) s += c.*field;
  return s;
}
static_assert(table_total(&Cell::total) == 55);
static_assert(table_total(&Cell::cases) == 18);

LupusDataset build() {
  LupusDataset d;
  d.cells.assign(std::begin(kTable), std::end(kTable));
  d.X.resize(55, 3);
  Eigen::Index row = 0;
  for (const auto& c : d.cells) {
    if (c.cases > c.total) throw InvalidSpec("lupus table: more cases than patients in a cell");
    for (int t = 0; t < c.total; ++t, ++row) {
      d.X.row(row) << 1.0, c.delta_igg, c.iga;
      d.y.push_back(t < c.cases ? 1 : 0);
    }
  }
  return d;
}

}  // namespace

int LupusDataset::positives() const { return std::accumulate(y.begin(), y.end(), 0); }

const LupusDataset& load_dataset() {
  static const LupusDataset data = build();
  return data;
}

void write_dataset_csv(std::ostream& out, const LupusDataset& data) {
  io::CsvWriter csv(out, {"delta_igg", "iga", "cases", "total"});
  for (const auto& c : data.cells) {
    csv.field(c.delta_igg).field(c.iga).field(c.cases).field(c.total);
    csv.end_row();
  }
}

}  // namespace amc::lupus
