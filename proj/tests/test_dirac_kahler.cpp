#include <gtest/gtest.h>

#include "dkc/dirac_kahler.hpp"
#include "dkc/spectral.hpp"
#include "dkc/verify.hpp"
#include "oracles.hpp"

namespace dkc {
namespace {

using D = DirectionSet;
constexpr double kTol = 1e-12;

const LatticeSpec kP = LatticeSpec::periodic(3, 2, 2, 3);

double dist(const InhomogeneousForm& a, const InhomogeneousForm& b) { return (a - b).max_abs(); }

TEST(Mass, RejectsNegativeAndNonFinite) {
  EXPECT_NO_THROW(Mass(0.0));
  EXPECT_THROW(Mass(-0.5), std::invalid_argument);
  EXPECT_THROW(Mass(std::nan("")), std::invalid_argument);
}

TEST(Antiautomorphism, DegreeSigns) {
  EXPECT_EQ(antiautomorphism_sign(0), 1);
  EXPECT_EQ(antiautomorphism_sign(1), 1);
  EXPECT_EQ(antiautomorphism_sign(2), -1);
  EXPECT_EQ(antiautomorphism_sign(3), -1);
  EXPECT_EQ(antiautomorphism_sign(4), 1);
  Rng rng(1);
  const InhomogeneousForm w = InhomogeneousForm::random(kP, Copy::plain, rng);
  const InhomogeneousForm b = antiautomorphism_B(w);
  EXPECT_EQ((b[0] - w[0]).max_abs(), 0.0);
  EXPECT_EQ((b[2] + w[2]).max_abs(), 0.0);
  EXPECT_EQ(dist(antiautomorphism_B(b), w), 0.0);
}

TEST(ChiralStar, PointMapsToImaginaryVolume) {
  InhomogeneousForm w(kP);
  const SiteIndex k{{2, 1, 2, 1}};
  w[0](k, D{}) = 1.0;
  const InhomogeneousForm s = chiral_star(w);
  EXPECT_EQ(s.copy(), Copy::tilde);
  EXPECT_EQ(s[4](k, D::full()), kI);
  EXPECT_EQ(s.max_abs(), 1.0);
}

TEST(ChiralStar, InvolutionAndAnticommutation) {
  Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    const InhomogeneousForm w = InhomogeneousForm::random(kP, Copy::plain, rng);
    EXPECT_LE(dist(chiral_star(chiral_star(w)), w), kTol);
    InhomogeneousForm sum = chiral_star(coboundary(w) + codifferential(w));
    const InhomogeneousForm sw = chiral_star(w);
    sum += coboundary(sw) + codifferential(sw);
    EXPECT_LE(sum.max_abs(), kTol);
    EXPECT_LE(dist(dual_map(dual_map(w)), w), kTol);
    EXPECT_LE((dual_map(dk_operator(w)) + dk_operator(dual_map(w))).max_abs(), kTol);
  }
}

TEST(DkOperator, ConstantIsAnnihilated) {
  Rng rng(3);
  const InhomogeneousForm c = constant_form(kP, rng);
  EXPECT_EQ(dk_operator(c).max_abs(), 0.0);
  EXPECT_NEAR(dk_residual(c, Mass(1.0)), c.euclidean_norm(), 1e-12);
  const auto fl = chirality_flip_check(c, Mass(0.0));
  EXPECT_EQ(fl.plus_to_minus, 0.0);
  EXPECT_EQ(fl.minus_to_plus, 0.0);
}

TEST(DkOperator, ScalarOnlyFeedsDegreeOne) {
  Rng rng(4);
  InhomogeneousForm w(kP);
  w[0] = Form::random(kP, 0, Copy::plain, rng);
  const InhomogeneousForm out = dk_operator(w);
  Form expected = coboundary(w[0]);
  expected *= kI;
  EXPECT_EQ((out[1] - expected).max_abs(), 0.0);
  for (int r : {0, 2, 3, 4}) EXPECT_EQ(out[r].max_abs(), 0.0);
}

TEST(DkOperator, MatchesSixteenComponentEquations) {
  Rng rng(5);
  for (int t = 0; t < 4; ++t) {
    const InhomogeneousForm w = InhomogeneousForm::random(kP, Copy::plain, rng);
    const InhomogeneousForm out = dk_operator(w);
    kP.for_each_volume_site([&](const SiteIndex& k) {
      const auto expected = oracle::dirac_kahler_at(w, k);
      const std::size_t s = kP.site_rank(k);
      for (int ch = 0; ch < kChannels; ++ch)
        EXPECT_NEAR(std::abs(out.channel(s, ch) - expected[ch]), 0.0, kTol) << "channel " << ch;
    });
  }
}

TEST(ChiralProject, ComponentsAndProjectorAlgebra) {
  Rng rng(6);
  const InhomogeneousForm w = InhomogeneousForm::random(kP, Copy::plain, rng);
  const auto [plus, minus] = chiral_project(w);
  EXPECT_LE(dist(plus + minus, w), kTol);
  EXPECT_TRUE(is_self_dual(plus, 1e-12));
  EXPECT_TRUE(is_anti_self_dual(minus, 1e-12));
  EXPECT_FALSE(is_self_dual(w, 1e-12));
  const auto pp = chiral_project(plus);
  EXPECT_LE(dist(pp.plus, plus), kTol);
  EXPECT_LE(pp.minus.max_abs(), kTol);
  EXPECT_LE(chiral_project(minus).plus.max_abs(), kTol);
  // Self-dual forms tie the scalar to the top form: iota * w0 = -i w4.
  Form lhs = iota(hodge(plus[0]));
  Form rhs = plus[4];
  rhs *= -kI;
  EXPECT_LE((lhs - rhs).max_abs(), kTol);
  EXPECT_THROW(chiral_project(w.with_copy(Copy::tilde)), std::domain_error);
}

TEST(ChiralProject, DualityPredicates) {
  const InhomogeneousForm zero(kP);
  EXPECT_TRUE(is_self_dual(zero, 1e-12));
  EXPECT_TRUE(is_anti_self_dual(zero, 1e-12));
  InhomogeneousForm scalar(kP);
  for (auto& v : scalar[0].coeffs()) v = 2.0;
  EXPECT_FALSE(is_self_dual(scalar, 1e-6));
  EXPECT_FALSE(is_anti_self_dual(scalar, 1e-6));
}

TEST(ChiralInvariance, KernelElementsSplit) {
  Rng rng(7);
  const InhomogeneousForm c = constant_form(kP, rng);
  const auto [plus, minus] = chiral_project(c);
  EXPECT_EQ(dk_operator(plus).max_abs(), 0.0);
  EXPECT_EQ(dk_operator(minus).max_abs(), 0.0);
}

TEST(ChiralityFlip, ExactEigenpairs) {
  const auto lat = LatticeSpec::periodic(2, 2, 2, 2);
  const OperatorMatrix d = assemble(lat, OperatorKind::dirac_kahler);
  int checked = 0;
  for (const EigenPair& p : eigenpairs(d.dense())) {
    if (!is_real_positive(p.value)) continue;
    const InhomogeneousForm w = unflatten(p.vector, lat);
    const Mass m(p.value.real());
    EXPECT_LE(dk_residual(w, m), 1e-10);
    const auto fl = chirality_flip_check(w, m);
    EXPECT_LE(fl.plus_to_minus, 1e-10);
    EXPECT_LE(fl.minus_to_plus, 1e-10);
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

}  // namespace
}  // namespace dkc
