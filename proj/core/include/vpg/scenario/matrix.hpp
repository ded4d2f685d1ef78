#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vpg/scenario/conditions.hpp"

namespace vpg::scenario {

/// Campaign cross-product definition.
struct TestMatrix {
  std::vector<std::string> sut_variants;
  std::vector<TimeOfDay> times;
  std::vector<Weather> weathers;
  int batch_size = 32;
  std::int64_t base_seed = 0;

  void validate() const;
};

struct TestCase {
  int id = 0;
  std::string sut;
  Conditions conditions;
  std::int64_t seed = 0;  // base_seed + id
  std::string scene_name;
  double timeout_s = 300.0;
};

/// Ordered list of batches; each batch is an ordered list of case ids. The
/// batches partition the case set and each holds at most batch_size ids.
struct BatchPlan {
  std::vector<std::vector<int>> batches;

  int case_count() const;
};

/// Full cross product, sut-major then time then weather; ids are dense from 0
/// and seeds are base_seed + id.
std::vector<TestCase> expand_matrix(const TestMatrix& matrix,
                                    const ConditionTables& tables = ConditionTables{});

/// Contiguous id-ordered chunks; the last batch may be short.
BatchPlan make_batches(const std::vector<TestCase>& cases, int batch_size);

}  // namespace vpg::scenario
