#pragma once

// Real-argument Airy functions Ai, Bi and their derivatives.
//
// Evaluation uses the Maclaurin series (summed in double-double arithmetic)
// for |a| <= kSwitchRadius and the standard large-argument asymptotic
// expansions beyond it. On the negative axis the modulus Ai^2 + Bi^2 has its
// own smooth asymptotic series and never goes through the oscillatory values.
//
// Accuracy: ~1e-15 relative for Bi and for Ai with a >= 0; on the negative
// axis the error of Ai, Bi is ~1e-15 of the envelope sqrt(Ai^2 + Bi^2).

#include "uniwkb/detail/double_double.hpp"

namespace uniwkb::airy {

/// Series/asymptotic switch point.
inline constexpr double kSwitchRadius = 9.0;

/// Largest argument for which unscaled Bi(a) is representable.
/// exp((2/3) a^{3/2}) overflows a double just above a = 104.7.
inline constexpr double kBiOverflowBound = 104.0;

struct AiryEval {
  double a = 0.0;
  double ai = 0.0;
  double dai = 0.0;
  double bi = 0.0;
  double dbi = 0.0;
};

/// Exponentially scaled values for a >= 0: Ai e^{+zeta}, Bi e^{-zeta}.
struct ScaledAiryEval {
  double a = 0.0;
  double zeta = 0.0;
  double ai_s = 0.0;
  double dai_s = 0.0;
  double bi_s = 0.0;
  double dbi_s = 0.0;
};

/// m2 = Ai^2 + Bi^2 and its derivative on a <= 0.
struct ModulusEval {
  double a = 0.0;
  double m2 = 0.0;
  double dm2 = 0.0;
};

/// Which expansion to use. `automatic` picks by kSwitchRadius; the forced
/// variants exist so the two regimes can be compared in an overlap window.
enum class Regime { automatic, series, asymptotic };

/// Throws OverflowError for a > kBiOverflowBound (use airy_scaled instead).
AiryEval airy_eval(double a, Regime regime = Regime::automatic);

/// Throws DomainError for a < 0.
ScaledAiryEval airy_scaled(double a, Regime regime = Regime::automatic);

/// Throws DomainError for a > 0.
ModulusEval modulus_sq(double a, Regime regime = Regime::automatic);

// Extended-precision kernels used by the WKB layer, where closed forms in the
// Airy log-derivatives cancel by many orders of magnitude.

/// Ai'(a)/Ai(a) for a >= 0.
detail::DD ai_log_derivative(double a, Regime regime = Regime::automatic);

/// Bi'(a)/Bi(a) for a >= 0.
detail::DD bi_log_derivative(double a, Regime regime = Regime::automatic);

struct ModulusDD {
  detail::DD m2;
  detail::DD dm2;
};

/// Ai^2 + Bi^2 and its a-derivative for a <= 0.
ModulusDD modulus_sq_dd(double a, Regime regime = Regime::automatic);

}  // namespace uniwkb::airy
