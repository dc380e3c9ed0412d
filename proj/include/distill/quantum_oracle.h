#ifndef DISTILL_QUANTUM_ORACLE_H_
#define DISTILL_QUANTUM_ORACLE_H_

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "distill/bell_diagonal.h"

// Brute-force dense simulation of the pumping and ZZ-check circuits, used to
// check the closed-form maps independently. Qubit 0 is the most significant
// bit of a basis index. States are capped at five qubits (32 x 32).

namespace distill {

inline constexpr int kMaxOracleQubits = 5;

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Gate = Eigen::Matrix2cd;

namespace gates {
Gate identity();
Gate x();
Gate y();
Gate z();
Gate h();
Gate s();
Gate s_dagger();
}  // namespace gates

class StateVector {
 public:
  StateVector(int num_qubits, ComplexVector amplitudes);

  int num_qubits() const { return num_qubits_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }

 private:
  int num_qubits_;
  ComplexVector amplitudes_;
};

class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix matrix);
  static DensityOperator pure(const StateVector& state);

  int num_qubits() const { return num_qubits_; }
  const ComplexMatrix& matrix() const { return matrix_; }

  double trace() const;
  DensityOperator normalized() const;
  DensityOperator scaled(double factor) const;
  DensityOperator operator+(const DensityOperator& other) const;

  bool is_hermitian(double tol = 1e-12) const;
  double min_eigenvalue() const;
  // Hermitian, unit trace and PSD within the given tolerances.
  bool is_valid_state(double tol = 1e-12, double psd_tol = 1e-10) const;

  void apply(const Gate& gate, int qubit);
  void apply_cz(int a, int b);

  // Projects `qubit` onto `ket` and removes it; the trace of the result is the
  // outcome probability.
  DensityOperator measure_and_discard(int qubit, const Eigen::Vector2cd& ket) const;
  DensityOperator trace_out(int qubit) const;
  // this (x) other, with `other` on the higher-index qubits.
  DensityOperator tensor(const DensityOperator& other) const;

 private:
  int num_qubits_;
  ComplexMatrix matrix_;
};

double trace_distance(const DensityOperator& a, const DensityOperator& b);

struct Edge {
  int a;
  int b;
};

// |+>^n followed by CZ on every edge.
StateVector make_graph_state(int num_qubits, std::span<const Edge> edges);

// Orthogonal projector onto ZZ = sign on qubits (l1, l2), unit normalization.
ComplexMatrix parity_projector(int num_qubits, int l1, int l2, int sign);
double parity_weight(const DensityOperator& state, int l1, int l2, int sign);

// (1 - eps) |Psi+><Psi+| + eps Z|Psi+><Psi+|Z, Psi+ = (|01> + |10>) / sqrt(2).
DensityOperator noisy_bell_pair(double epsilon);

/// One pumping branch: outcome M of the X measurement of A2, the tracked
/// channel error E, the normalized post-measurement logical state and the
/// branch probability.
struct BranchOutcome {
  int m = 0;
  int e = 0;
  DensityOperator logical;
  double weight = 0.0;
};

/// One round of entanglement pumping onto logical qubits (l1, l2):
/// noisy pair on (A1, A2); X then H on A1; CZ(A1, L1), CZ(A2, L2); Y measurement
/// of A1 with its by-product undone; X measurement of A2. Y outcomes are
/// corrected and merged, so one branch is returned per (M, E).
std::vector<BranchOutcome> pumping_round(const DensityOperator& logical, double epsilon,
                                         int l1 = 0, int l2 = 1);

/// The local correction applied after the Y measurement of A1 for outcome y,
/// as (gate on L1, gate on A2). A Y measurement of a graph vertex leaves
/// sqrt(-/+ iZ) on each neighbour; the correction removes it.
std::pair<Gate, Gate> y_byproduct_correction(int y);

struct ParityMapCheck {
  int delta = 0;
  double trace_distance = 0.0;
  double sequence_probability = 0.0;  // from the dense simulation
  double walk_probability = 0.0;      // signed-walk path probability
  double fidelity = 0.0;              // weight of the P_sign(delta) component
  DensityOperator conditional_state;
};

/// Runs pumping_round repeatedly, conditioning on `outcomes`, and compares
/// the conditional logical state with the noisy parity map
/// (alpha^D P+ rho P+ + alpha^-D P- rho P-) / norm, D = sum of outcomes.
/// Defaults to the two-qubit edgeless graph |++>.
ParityMapCheck verify_parity_map(double epsilon, std::span<const int> outcomes);
ParityMapCheck verify_parity_map(double epsilon, std::span<const int> outcomes,
                                 const DensityOperator& initial, int l1, int l2);

// Bell states as two-qubit kets, and Bell-diagonal conversions.
ComplexVector bell_phi_plus();
DensityOperator bell_diagonal_density(const BellDiagonalState& weights);
BellDiagonalState bell_weights(const DensityOperator& two_qubit);
DensityOperator werner_state(double f0);

struct DistillStepResult {
  DensityOperator target;  // normalized
  double success_probability;
};

/// Bilateral ZZ check: CZ(C1, T1) and CZ(C2, T2), X measurement of both control
/// qubits, keep the even-parity outcomes.
DistillStepResult bilateral_distill_step(const DensityOperator& control,
                                         const DensityOperator& target);

}  // namespace distill

#endif  // DISTILL_QUANTUM_ORACLE_H_
