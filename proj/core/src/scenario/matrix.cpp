#include "vpg/scenario/matrix.hpp"

#include "vpg/common/errors.hpp"

namespace vpg::scenario {

void TestMatrix::validate() const {
  if (sut_variants.empty()) throw ConfigError("test matrix: sut_variants is empty");
  if (times.empty()) throw ConfigError("test matrix: times is empty");
  if (weathers.empty()) throw ConfigError("test matrix: weathers is empty");
  if (batch_size < 1) throw ConfigError("test matrix: batch_size must be >= 1");
}

int BatchPlan::case_count() const {
  int n = 0;
  for (const auto& b : batches) n += static_cast<int>(b.size());
  return n;
}

std::vector<TestCase> expand_matrix(const TestMatrix& matrix, const ConditionTables& tables) {
  matrix.validate();
  std::vector<TestCase> cases;
  cases.reserve(matrix.sut_variants.size() * matrix.times.size() * matrix.weathers.size());
  int id = 0;
  for (const auto& sut : matrix.sut_variants) {
    for (const auto t : matrix.times) {
      for (const auto w : matrix.weathers) {
        TestCase c;
        c.id = id;
        c.sut = sut;
        c.conditions = derive_conditions(t, w, tables);
        c.seed = matrix.base_seed + id;
        cases.push_back(std::move(c));
        ++id;
      }
    }
  }
  return cases;
}

BatchPlan make_batches(const std::vector<TestCase>& cases, int batch_size) {
  if (batch_size < 1) throw ConfigError("make_batches: batch_size must be >= 1");
  BatchPlan plan;
  std::vector<int> current;
  current.reserve(static_cast<std::size_t>(batch_size));
  for (const auto& c : cases) {
    current.push_back(c.id);
    if (static_cast<int>(current.size()) == batch_size) {
      plan.batches.push_back(std::move(current));
      current = {};
    }
  }
  if (!current.empty()) plan.batches.push_back(std::move(current));
  return plan;
}

}  // namespace vpg::scenario
