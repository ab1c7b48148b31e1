#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "qnet/qstate.hpp"
#include "qnet/rng.hpp"

namespace qnet::channels {

using state::DensityMatrix;

struct BitFlip {
  double p;
};
struct PhaseFlip {
  double p;
};
/// rho -> (1-p) rho + p I/2 on the target qubit.
struct Depolarizing {
  double p;
};
/// Amplitude damping for a wait t: Prob(|1>) scales by e^{-t/T1}, coherences by e^{-t/(2 T1)}.
struct RelaxationT1 {
  double t;
  double T1;
};
/// rho -> (1+P)/2 rho + (1-P)/2 Z rho Z with P = e^{-t/T2}.
struct DephasingT2 {
  double t;
  double T2;
};

using NoiseChannel = std::variant<BitFlip, PhaseFlip, Depolarizing, RelaxationT1, DephasingT2>;

/// Throws InvalidProbability for p outside [0,1] and NegativeInput for
/// negative times or non-positive time constants.
void validate(const NoiseChannel& ch);

std::string describe(const NoiseChannel& ch);

DensityMatrix apply_channel(const DensityMatrix& rho, const NoiseChannel& ch, std::size_t target);

/// 10^{-alpha L / 10}. Throws NegativeInput.
double survival_probability(double alpha_db_per_km, double length_km);
/// log10 of the same, exact for very long fibers.
double log10_survival(double alpha_db_per_km, double length_km);

/// 1 / (p * rate). Throws ZeroProbability for p <= 0, InvalidProbability for p > 1,
/// NegativeInput for rate <= 0.
double expected_wait(double survival_p, double attempt_rate_hz);

struct ErasureOutcome {
  bool survived;
  double survival_probability;
};

/// Photon loss as a classical Bernoulli flag.
ErasureOutcome sample_erasure(double alpha_db_per_km, double length_km, RngStream& rng);

}  // namespace qnet::channels
