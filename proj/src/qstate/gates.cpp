#include <cmath>

#include "qnet/error.hpp"
#include "qnet/qstate.hpp"

namespace qnet::state {
namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
constexpr Complex kI{0.0, 1.0};
}  // namespace

namespace gates {

const ComplexMatrix& I() {
  static const ComplexMatrix m{{1, 0}, {0, 1}};
  return m;
}
const ComplexMatrix& X() {
  static const ComplexMatrix m{{0, 1}, {1, 0}};
  return m;
}
const ComplexMatrix& Y() {
  static const ComplexMatrix m{{0, -kI}, {kI, 0}};
  return m;
}
const ComplexMatrix& Z() {
  static const ComplexMatrix m{{1, 0}, {0, -1}};
  return m;
}
const ComplexMatrix& H() {
  static const ComplexMatrix m{{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
  return m;
}
const ComplexMatrix& S() {
  static const ComplexMatrix m{{1, 0}, {0, kI}};
  return m;
}
const ComplexMatrix& CNOT() {
  static const ComplexMatrix m{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
  return m;
}
const ComplexMatrix& CZ() {
  static const ComplexMatrix m{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}};
  return m;
}
const ComplexMatrix& BS1() { return H(); }
const ComplexMatrix& BS2() {
  static const ComplexMatrix m{{-kInvSqrt2, kInvSqrt2}, {kInvSqrt2, kInvSqrt2}};
  return m;
}

std::vector<std::pair<std::string, ComplexMatrix>> table() {
  return {{"I", I()},       {"X", X()},   {"Y", Y()},     {"Z", Z()},     {"H", H()},
          {"S", S()},       {"CNOT", CNOT()}, {"CZ", CZ()}, {"BS1", BS1()}, {"BS2", BS2()}};
}

}  // namespace gates

ComplexMatrix rotation_gate(const std::array<double, 3>& axis, double theta) {
  const double len = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (std::abs(len - 1.0) > linalg::kTolerance) fail(ErrorCode::NonUnitVector, "rotation axis must be a unit vector");
  ComplexMatrix n_sigma = Complex{axis[0]} * gates::X();
  n_sigma += Complex{axis[1]} * gates::Y();
  n_sigma += Complex{axis[2]} * gates::Z();
  ComplexMatrix r = Complex{std::cos(theta / 2)} * gates::I();
  r -= (kI * std::sin(theta / 2)) * n_sigma;
  return r;
}

}  // namespace qnet::state
