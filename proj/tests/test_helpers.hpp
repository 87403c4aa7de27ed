// Shared fixtures: the running example from the numerical experiments
// (prior 0.8, symmetric noise 0.9, R/c = 25) and a seeded random-model
// generator for property sweeps.

#ifndef SPOTCHECK_TEST_HELPERS_HPP
#define SPOTCHECK_TEST_HELPERS_HPP

#include <random>

#include "mechanism.hpp"
#include "model.hpp"

namespace spotcheck::testing {

inline SignalModel fig2_model() { return SignalModel::build(0.8, 0.9, 0.9); }
inline EconParams fig2_econ() { return {1.0, 25.0}; }

// Frozen quantities for the fixture, hand-derived from the mixture:
//   P_a = 0.8*0.9 + 0.2*0.1, P_aa = 0.8*0.81 + 0.2*0.01, etc.
inline constexpr double kFig2Pa = 0.74;
inline constexpr double kFig2Pb = 0.26;
inline constexpr double kFig2Paa = 0.65;
inline constexpr double kFig2Pab = 0.09;
inline constexpr double kFig2Pbb = 0.17;
inline constexpr double kFig2Variance = 0.1024;  // P_aa*P_bb - P_ab^2
inline constexpr double kFig2RosX = 0.5;         // 0.04 / (0.17 - 0.09)
inline constexpr double kFig2RssXa = 0.1015625;  // 0.04 * 0.26 / 0.1024
inline constexpr double kFig2RssXb = 0.2890625;  // 0.04 * 0.74 / 0.1024
inline constexpr double kFig2RssWorkload3 = 0.179675;
inline constexpr double kFig2RssWorkload10 = 0.23676073398125;

struct RandomModelGen {
  std::mt19937_64 rng;

  explicit RandomModelGen(uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }

  // Canonical informative model with strictly separated marginals.
  SignalModel next_asymmetric() {
    for (;;) {
      SignalModel model = SignalModel::build(uniform(0.05, 0.95), uniform(0.55, 0.99),
                                             uniform(0.55, 0.99));
      if (!model.informative(1e-6)) continue;
      if (model.marginal(Signal::A) - model.marginal(Signal::B) < 1e-4) continue;
      return model;
    }
  }
};

}  // namespace spotcheck::testing

#endif
