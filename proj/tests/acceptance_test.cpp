// Runs the full acceptance suite once and asserts every criterion; the
// per-criterion PASS/FAIL lines go to stdout, mirroring `fbsde run --check`.

#include "fbsde/acceptance.hpp"

#include <gtest/gtest.h>

#include <iostream>

namespace fbsde {
namespace {

const std::vector<CriterionResult>& results() {
  static const std::vector<CriterionResult> cached =
      run_acceptance(&std::cout);
  return cached;
}

void expect_criterion(int id) {
  for (const auto& r : results()) {
    if (r.id != id) continue;
    EXPECT_TRUE(r.pass) << "criterion " << id << " (" << r.name
                        << "): " << r.detail;
    return;
  }
  FAIL() << "criterion " << id << " missing from the suite";
}

TEST(Acceptance, Criterion01LinearPayoffIdentity) { expect_criterion(1); }
TEST(Acceptance, Criterion02GaussianOracle) { expect_criterion(2); }
TEST(Acceptance, Criterion03WeightMomentScaling) { expect_criterion(3); }
TEST(Acceptance, Criterion04TwoWeightAgreement) { expect_criterion(4); }
TEST(Acceptance, Criterion05MartingaleZeroMean) { expect_criterion(5); }
TEST(Acceptance, Criterion06GruschinDegenerate) { expect_criterion(6); }
TEST(Acceptance, Criterion07NonlinearDriver) { expect_criterion(7); }
TEST(Acceptance, Criterion08ConditionalInteriorS) { expect_criterion(8); }
TEST(Acceptance, Criterion09MvZRepresentation) { expect_criterion(9); }
TEST(Acceptance, Criterion10GradientBound) { expect_criterion(10); }
TEST(Acceptance, Criterion11Determinism) { expect_criterion(11); }

}  // namespace
}  // namespace fbsde
