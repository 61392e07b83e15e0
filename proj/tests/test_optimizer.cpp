#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vantage/optimizer.hpp"

using namespace vantage;

namespace {

KinematicChain defaultChain() {
  return loadChainFile(VANTAGE_SOURCE_DIR "/configs/default_chain.json");
}

// Three orthogonal prismatic slides: forward kinematics is the identity map
// on q, which makes optima analytic (see the clamped-optimum case below).
KinematicChain prismaticXyz() {
  std::vector<Joint> joints(3);
  joints[0] = {JointType::kPrismatic, Pose3d::Identity(), Eigen::Vector3d::UnitX()};
  joints[1] = {JointType::kPrismatic, Pose3d::Identity(), Eigen::Vector3d::UnitY()};
  joints[2] = {JointType::kPrismatic, Pose3d::Identity(), Eigen::Vector3d::UnitZ()};
  JointVector lo(3), hi(3);
  lo << -0.3, -0.2, -0.25;
  hi << 0.25, 0.3, 0.2;
  return KinematicChain(joints, lo, hi, Pose3d::Identity(), "prismatic-xyz");
}

// A random solvable problem: feature near a reachable pose, target a viewing
// distance away from it.
ConstrainedIkProblem randomProblem(const KinematicChain& chain,
                                   std::mt19937_64& rng,
                                   const SolverConfig& cfg) {
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
  };
  const Pose3d fp = forwardKinematics(chain, oracle::randomConfig(chain, rng));
  const Eigen::Vector3d feat =
      fp.translation() + 0.02 * Eigen::Vector3d(u(-1, 1), u(-1, 1), u(-1, 1));
  const Eigen::Vector3d tgt =
      feat + 0.11 * Eigen::Vector3d(u(-1, 1), u(-1, 1), u(-1, 1)).normalized();
  return ConstrainedIkProblem{chain, tgt, feat, Eigen::Vector3d::UnitZ(), cfg};
}

}  // namespace

TEST_SUITE("optimizer") {

TEST_CASE("huber values and smoothness at the threshold") {
  CHECK(huber(0.01, 0.01) == doctest::Approx(5e-5).epsilon(1e-14));
  CHECK(huber(0.02, 0.01) == doctest::Approx(1.5e-4).epsilon(1e-14));
  CHECK(huber(0.0, 0.01) == 0.0);
  CHECK(huber(-0.02, 0.01) == huber(0.02, 0.01));  // even function

  // C1 at |x| = delta: value and slope continuous.
  const double d = 0.17, eps = 1e-9;
  CHECK(huber(d + eps, d) - huber(d - eps, d) ==
        doctest::Approx(2.0 * eps * d).epsilon(1e-3));
  CHECK(huberDerivative(d - 1e-12, d) == doctest::Approx(d).epsilon(1e-9));
  CHECK(huberDerivative(d + 1e-12, d) == doctest::Approx(d).epsilon(1e-9));
  CHECK(huberDerivative(-0.5, 0.02) == doctest::Approx(-0.02));
  CHECK_THROWS(huber(0.1, 0.0));
  CHECK_THROWS(huber(0.1, -1.0));
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.w3 = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.max_evals = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.ftol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("objective breakdown for a pure position residual") {
  const KinematicChain toy = prismaticXyz();
  SolverConfig cfg;
  JointVector q(3);
  q << 0.1, 0.0, 0.05;
  // Feature a viewing distance along the (fixed) optical axis: distance and
  // view terms vanish, leaving only the 3-4-5 position residual of 5 mm.
  const Eigen::Vector3d cam = forwardKinematics(toy, q).translation();
  const Eigen::Vector3d feat = cam + 0.11 * Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d tgt = cam + Eigen::Vector3d(0.003, 0.0, 0.004);
  const ConstrainedIkProblem prob{toy, tgt, feat, Eigen::Vector3d::UnitZ(), cfg};
  const ObjectiveBreakdown b = objective(prob, q);
  CHECK(b.position_cost == doctest::Approx(0.005).epsilon(1e-12));
  CHECK(b.view_alignment_cost == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b.distance_cost == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(b.horizontality_cost == doctest::Approx(0.0).epsilon(1e-12));
  // w1 * huber(0.005, 0.01) = 15 * 1.25e-5
  CHECK(b.total == doctest::Approx(1.875e-4).epsilon(1e-10));
}

TEST_CASE("orientation cost terms for a known misalignment") {
  const KinematicChain toy = prismaticXyz();
  SolverConfig cfg;
  JointVector q = JointVector::Zero(3);
  const FeatureState f = FeatureState::fromNormal(
      // 45 degrees off the optical axis (+z), in the x-z plane.
      Eigen::Vector3d(0.11 * std::sin(M_PI / 4), 0, 0.11 * std::cos(M_PI / 4)),
      UnitVec3d{Eigen::Vector3d(0, 1, 0)}, {1, 0, 0});
  const OrientationCostTerms terms =
      orientationCost(toy, q, f, Eigen::Vector3d::UnitZ(), cfg.w4, cfg.w5);
  CHECK(terms.view_alignment ==
        doctest::Approx(1.0 - std::cos(M_PI / 4)).epsilon(1e-12));
  CHECK(terms.horizontality == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(terms.compound ==
        doctest::Approx(cfg.w4 * 0.5 * terms.view_alignment).epsilon(1e-12));
}

TEST_CASE("distance cost keeps its sign convention") {
  const KinematicChain toy = prismaticXyz();
  SolverConfig cfg;
  JointVector q = JointVector::Zero(3);
  auto featureAt = [&](double dist) {
    return FeatureState::fromNormal(Eigen::Vector3d(0, 0, dist),
                                    UnitVec3d{Eigen::Vector3d(0, 1, 0)}, {1, 0, 0});
  };
  // 10 cm instead of 11: residual is -0.01 (too close).
  const ConstrainedIkProblem prob{toy, Eigen::Vector3d::Zero(),
                                  Eigen::Vector3d(0, 0, 0.10),
                                  Eigen::Vector3d::UnitZ(), cfg};
  CHECK(objective(prob, q).distance_cost == doctest::Approx(-0.01).epsilon(1e-12));
  CHECK(distanceCost(toy, q, featureAt(0.13), cfg.viewing_distance) ==
        doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("analytic gradient agrees with central differences") {
  const KinematicChain chain = defaultChain();
  SolverConfig cfg;
  std::mt19937_64 rng(61);
  int used = 0;
  while (used < 30) {
    const ConstrainedIkProblem prob = randomProblem(chain, rng, cfg);
    const JointVector q = oracle::randomConfig(chain, rng);
    // Stay away from the isolated Huber kinks where the FD stencil straddles
    // a second-derivative jump.
    const Eigen::Vector3d cam = forwardKinematics(chain, q).translation();
    if (std::abs((cam - prob.target_translation).norm() - cfg.delta1) < 1e-3) continue;
    if (std::abs(std::abs((cam - prob.feature_translation).norm() -
                          cfg.viewing_distance) -
                 cfg.delta3) < 1e-3)
      continue;
    ++used;
    JointVector g(chain.dof());
    objectiveWithGradient(prob, q, g);
    JointVector gfd(chain.dof());
    const double h = 1e-6;
    for (int j = 0; j < chain.dof(); ++j) {
      JointVector qp = q, qm = q;
      qp[j] += h;
      qm[j] -= h;
      gfd[j] = (objective(prob, qp).total - objective(prob, qm).total) / (2 * h);
    }
    CHECK((g - gfd).lpNorm<Eigen::Infinity>() /
              std::max(1.0, g.lpNorm<Eigen::Infinity>()) <
          1e-6);
  }
}

TEST_CASE("finite-difference gradient mode matches the analytic one") {
  const KinematicChain chain = defaultChain();
  std::mt19937_64 rng(62);
  SolverConfig analytic;
  SolverConfig fd;
  fd.gradient_mode = SolverConfig::GradientMode::kFiniteDifference;
  for (int i = 0; i < 5; ++i) {
    const ConstrainedIkProblem pa = randomProblem(chain, rng, analytic);
    const ConstrainedIkProblem pf{pa.chain, pa.target_translation,
                                  pa.feature_translation, pa.world_up, fd};
    const JointVector q = oracle::randomConfig(chain, rng);
    JointVector ga(chain.dof()), gf(chain.dof());
    objectiveWithGradient(pa, q, ga);
    objectiveWithGradient(pf, q, gf);
    CHECK((ga - gf).lpNorm<Eigen::Infinity>() /
              std::max(1.0, ga.lpNorm<Eigen::Infinity>()) <
          1e-5);
  }
}

TEST_CASE("constrained solve returns in-bounds, never worse than the seed") {
  const KinematicChain chain = defaultChain();
  SolverConfig cfg;
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 200; ++trial) {
    const ConstrainedIkProblem prob = randomProblem(chain, rng, cfg);
    const JointVector seed = oracle::randomConfig(chain, rng);
    const ConstrainedIkResult res = solveConstrainedIk(prob, seed);
    for (int j = 0; j < chain.dof(); ++j) {
      CHECK(res.q[j] >= chain.lowerLimits()[j]);
      CHECK(res.q[j] <= chain.upperLimits()[j]);
    }
    CHECK(res.breakdown.total <= objective(prob, seed).total + 1e-12);
    CHECK(res.report.value_evals >= 1);
    CHECK(res.report.value_evals <= cfg.max_evals);
    CHECK(res.report.final_total == doctest::Approx(res.breakdown.total));
  }
}

TEST_CASE("an out-of-bounds seed is clamped and reported") {
  const KinematicChain chain = defaultChain();
  SolverConfig cfg;
  std::mt19937_64 rng(64);
  const ConstrainedIkProblem prob = randomProblem(chain, rng, cfg);
  JointVector seed = chain.upperLimits();
  seed[0] += 1.0;
  const ConstrainedIkResult res = solveConstrainedIk(prob, seed);
  CHECK(res.report.seed_clamped);
  CHECK(withinJointLimits(chain, res.q));
}

TEST_CASE("termination reasons are labelled") {
  CHECK(std::string(terminationName(Termination::kFtol)) == "ftol");
  CHECK(std::string(terminationName(Termination::kMaxEvals)) == "max-evals");
  CHECK(std::string(terminationName(Termination::kStalled)) == "stalled");
}

TEST_CASE("clamped analytic optimum on the prismatic toy chain") {
  const KinematicChain toy = prismaticXyz();
  SolverConfig cfg;
  cfg.ftol = 1e-12;
  cfg.max_evals = 200;
  std::mt19937_64 rng(65);
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
  };
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Vector3d tgt(u(-0.5, 0.5), u(-0.5, 0.5), u(-0.5, 0.5));
    Eigen::Vector3d clamped;
    for (int j = 0; j < 3; ++j)
      clamped[j] = std::clamp(tgt[j], toy.lowerLimits()[j], toy.upperLimits()[j]);
    // Feature placed so all non-position terms are zero and stationary at the
    // clamped point, making it the exact global optimum (see acceptance).
    const Eigen::Vector3d feat = clamped + 0.11 * Eigen::Vector3d::UnitZ();
    const ConstrainedIkProblem prob{toy, tgt, feat, Eigen::Vector3d::UnitZ(), cfg};
    const JointVector seed = oracle::randomConfig(toy, rng);
    const ConstrainedIkResult res = solveConstrainedIk(prob, seed);
    CHECK((res.q - Eigen::VectorXd(clamped)).lpNorm<Eigen::Infinity>() < 1e-3);
  }
}

}  // TEST_SUITE
