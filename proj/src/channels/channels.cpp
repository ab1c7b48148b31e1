#include "qnet/channels.hpp"

#include <cmath>
#include <sstream>

#include "qnet/error.hpp"

namespace qnet::channels {
namespace {

using linalg::Complex;
using linalg::ComplexMatrix;

void check_p(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::InvalidProbability, std::string(what) + " probability must be in [0,1]");
}

void check_times(double t, double tau, const char* what) {
  if (!(t >= 0.0)) fail(ErrorCode::NegativeInput, std::string(what) + ": wait time must be >= 0");
  if (!(tau > 0.0)) fail(ErrorCode::NegativeInput, std::string(what) + ": time constant must be > 0");
}

// sum_k K rho K^dagger over single-qubit Kraus operators embedded on `target`.
template <std::size_t N>
DensityMatrix kraus(const DensityMatrix& rho, const std::array<ComplexMatrix, N>& ops, std::size_t target) {
  const std::size_t n = rho.n_qubits();
  ComplexMatrix out(rho.dim(), rho.dim());
  for (const auto& k : ops) {
    const ComplexMatrix full = linalg::embed_gate(k, {target}, n);
    out += full * rho.matrix() * linalg::adjoint(full);
  }
  return DensityMatrix::trusted(std::move(out));
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void validate(const NoiseChannel& ch) {
  std::visit(overloaded{[](const BitFlip& c) { check_p(c.p, "bitflip"); },
                        [](const PhaseFlip& c) { check_p(c.p, "phaseflip"); },
                        [](const Depolarizing& c) { check_p(c.p, "depolarizing"); },
                        [](const RelaxationT1& c) { check_times(c.t, c.T1, "relaxationT1"); },
                        [](const DephasingT2& c) { check_times(c.t, c.T2, "dephasingT2"); }},
             ch);
}

std::string describe(const NoiseChannel& ch) {
  std::ostringstream os;
  std::visit(overloaded{[&](const BitFlip& c) { os << "bitflip(p=" << c.p << ")"; },
                        [&](const PhaseFlip& c) { os << "phaseflip(p=" << c.p << ")"; },
                        [&](const Depolarizing& c) { os << "depolarizing(p=" << c.p << ")"; },
                        [&](const RelaxationT1& c) { os << "relaxationT1(t=" << c.t << ",T1=" << c.T1 << ")"; },
                        [&](const DephasingT2& c) { os << "dephasingT2(t=" << c.t << ",T2=" << c.T2 << ")"; }},
             ch);
  return os.str();
}

DensityMatrix apply_channel(const DensityMatrix& rho, const NoiseChannel& ch, std::size_t target) {
  validate(ch);
  linalg::QubitIndexSet{target}.validate(rho.n_qubits());
  const auto& I = state::gates::I();
  const auto& X = state::gates::X();
  const auto& Z = state::gates::Z();
  return std::visit(
      overloaded{
          [&](const BitFlip& c) {
            return kraus<2>(rho, {std::sqrt(1 - c.p) * I, std::sqrt(c.p) * X}, target);
          },
          [&](const PhaseFlip& c) {
            return kraus<2>(rho, {std::sqrt(1 - c.p) * I, std::sqrt(c.p) * Z}, target);
          },
          [&](const Depolarizing& c) {
            // (1-p) rho + p I/2 = (1 - 3p/4) rho + p/4 (X rho X + Y rho Y + Z rho Z)
            const Complex a = std::sqrt(1 - 0.75 * c.p), b = std::sqrt(0.25 * c.p);
            return kraus<4>(rho, {a * I, b * X, b * state::gates::Y(), b * Z}, target);
          },
          [&](const RelaxationT1& c) {
            const double gamma = -std::expm1(-c.t / c.T1);
            const ComplexMatrix k0{{1, 0}, {0, std::sqrt(1 - gamma)}};
            const ComplexMatrix k1{{0, std::sqrt(gamma)}, {0, 0}};
            return kraus<2>(rho, {k0, k1}, target);
          },
          [&](const DephasingT2& c) {
            const double P = std::exp(-c.t / c.T2);
            return kraus<2>(rho, {std::sqrt((1 + P) / 2) * I, std::sqrt((1 - P) / 2) * Z}, target);
          }},
      ch);
}

double log10_survival(double alpha_db_per_km, double length_km) {
  if (alpha_db_per_km < 0 || length_km < 0) fail(ErrorCode::NegativeInput, "attenuation and length must be >= 0");
  return -alpha_db_per_km * length_km / 10.0;
}

double survival_probability(double alpha_db_per_km, double length_km) {
  return std::pow(10.0, log10_survival(alpha_db_per_km, length_km));
}

double expected_wait(double survival_p, double attempt_rate_hz) {
  if (!(survival_p > 0.0)) fail(ErrorCode::ZeroProbability, "survival probability must be > 0");
  if (survival_p > 1.0) fail(ErrorCode::InvalidProbability, "survival probability must be <= 1");
  if (!(attempt_rate_hz > 0.0)) fail(ErrorCode::NegativeInput, "attempt rate must be > 0");
  return 1.0 / (survival_p * attempt_rate_hz);
}

ErasureOutcome sample_erasure(double alpha_db_per_km, double length_km, RngStream& rng) {
  const double p = survival_probability(alpha_db_per_km, length_km);
  return {rng.bernoulli(p), p};
}

}  // namespace qnet::channels
