#include "distill/quantum_oracle.h"

#include <cmath>
#include <complex>
#include <string>

#include "distill/errors.h"
#include "distill/walk_engine.h"

namespace distill {
namespace {

using cd = std::complex<double>;
constexpr double kInvSqrt2 = 0.70710678118654752440;

int qubits_for_dimension(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw DomainError("state dimension " + std::to_string(dim) + " is not a power of two");
  }
  if (n > kMaxOracleQubits) {
    throw DomainError("oracle is capped at " + std::to_string(kMaxOracleQubits) + " qubits");
  }
  return n;
}

// Bit of `qubit` within a basis index of an n-qubit register.
inline Eigen::Index bit_mask(int num_qubits, int qubit) {
  return Eigen::Index{1} << (num_qubits - 1 - qubit);
}

void check_qubit(int num_qubits, int qubit) {
  if (qubit < 0 || qubit >= num_qubits) {
    throw DomainError("qubit index " + std::to_string(qubit) + " out of range");
  }
}

ComplexMatrix embed(const Gate& gate, int num_qubits, int qubit) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  const Eigen::Index mask = bit_mask(num_qubits, qubit);
  ComplexMatrix full = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if ((i & ~mask) != (j & ~mask)) continue;
      full(i, j) = gate((i & mask) ? 1 : 0, (j & mask) ? 1 : 0);
    }
  }
  return full;
}

Eigen::Vector2cd basis_ket(char axis, int sign) {
  const double s = sign > 0 ? 1.0 : -1.0;
  switch (axis) {
    case 'x':
      return Eigen::Vector2cd(kInvSqrt2, s * kInvSqrt2);
    case 'y':
      return Eigen::Vector2cd(kInvSqrt2, cd(0.0, s * kInvSqrt2));
    default:
      return sign > 0 ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
  }
}

}  // namespace

namespace gates {
Gate identity() { return Gate::Identity(); }
Gate x() { return (Gate() << 0, 1, 1, 0).finished(); }
Gate y() { return (Gate() << 0, cd(0, -1), cd(0, 1), 0).finished(); }
Gate z() { return (Gate() << 1, 0, 0, -1).finished(); }
Gate h() { return (Gate() << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2).finished(); }
Gate s() { return (Gate() << 1, 0, 0, cd(0, 1)).finished(); }
Gate s_dagger() { return (Gate() << 1, 0, 0, cd(0, -1)).finished(); }
}  // namespace gates

StateVector::StateVector(int num_qubits, ComplexVector amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  if (qubits_for_dimension(amplitudes_.size()) != num_qubits) {
    throw DomainError("amplitude count does not match qubit count");
  }
}

DensityOperator::DensityOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw DomainError("density operator must be square");
  num_qubits_ = qubits_for_dimension(matrix_.rows());
}

DensityOperator DensityOperator::pure(const StateVector& state) {
  const ComplexVector& v = state.amplitudes();
  return DensityOperator(v * v.adjoint());
}

double DensityOperator::trace() const { return matrix_.trace().real(); }

DensityOperator DensityOperator::normalized() const {
  const double t = trace();
  if (!(t > 0.0)) throw NumericalError("cannot normalize a zero-trace operator");
  return scaled(1.0 / t);
}

DensityOperator DensityOperator::scaled(double factor) const {
  return DensityOperator(matrix_ * factor);
}

DensityOperator DensityOperator::operator+(const DensityOperator& other) const {
  return DensityOperator(matrix_ + other.matrix_);
}

bool DensityOperator::is_hermitian(double tol) const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double DensityOperator::min_eigenvalue() const {
  const ComplexMatrix hermitian = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool DensityOperator::is_valid_state(double tol, double psd_tol) const {
  return is_hermitian(tol) && std::abs(trace() - 1.0) <= tol && min_eigenvalue() >= -psd_tol;
}

void DensityOperator::apply(const Gate& gate, int qubit) {
  check_qubit(num_qubits_, qubit);
  const ComplexMatrix u = embed(gate, num_qubits_, qubit);
  matrix_ = u * matrix_ * u.adjoint();
}

void DensityOperator::apply_cz(int a, int b) {
  check_qubit(num_qubits_, a);
  check_qubit(num_qubits_, b);
  if (a == b) throw DomainError("controlled-Z needs two distinct qubits");
  const Eigen::Index both = bit_mask(num_qubits_, a) | bit_mask(num_qubits_, b);
  auto sign = [both](Eigen::Index i) { return (i & both) == both ? -1.0 : 1.0; };
  for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
      matrix_(i, j) *= sign(i) * sign(j);
    }
  }
}

DensityOperator DensityOperator::measure_and_discard(int qubit,
                                                     const Eigen::Vector2cd& ket) const {
  check_qubit(num_qubits_, qubit);
  if (num_qubits_ == 1) throw DomainError("cannot discard the last qubit");
  const Eigen::Index mask = bit_mask(num_qubits_, qubit);
  const Eigen::Index low = mask - 1;
  const Eigen::Index dim = matrix_.rows() / 2;
  // Index of the reduced register with `bit` reinserted at `qubit`.
  auto expand = [&](Eigen::Index r, int bit) {
    return ((r & ~low) << 1) | (bit ? mask : 0) | (r & low);
  };
  ComplexMatrix reduced = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      cd sum = 0.0;
      for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) {
          sum += std::conj(ket(p)) * matrix_(expand(i, p), expand(j, q)) * ket(q);
        }
      }
      reduced(i, j) = sum;
    }
  }
  return DensityOperator(std::move(reduced));
}

DensityOperator DensityOperator::trace_out(int qubit) const {
  return measure_and_discard(qubit, basis_ket('z', +1)) +
         measure_and_discard(qubit, basis_ket('z', -1));
}

DensityOperator DensityOperator::tensor(const DensityOperator& other) const {
  if (num_qubits_ + other.num_qubits_ > kMaxOracleQubits) {
    throw DomainError("tensor product exceeds the oracle qubit cap");
  }
  const ComplexMatrix& a = matrix_;
  const ComplexMatrix& b = other.matrix_;
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return DensityOperator(std::move(out));
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.num_qubits() != b.num_qubits()) throw DomainError("trace distance needs equal sizes");
  const ComplexMatrix diff = a.matrix() - b.matrix();
  const ComplexMatrix hermitian = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

StateVector make_graph_state(int num_qubits, std::span<const Edge> edges) {
  if (num_qubits < 1 || num_qubits > kMaxOracleQubits) {
    throw DomainError("graph states are limited to 1.." + std::to_string(kMaxOracleQubits) +
                      " qubits");
  }
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  ComplexVector amps = ComplexVector::Constant(dim, std::pow(kInvSqrt2, num_qubits));
  for (const Edge& e : edges) {
    check_qubit(num_qubits, e.a);
    check_qubit(num_qubits, e.b);
    if (e.a == e.b) throw DomainError("graph edges must join distinct qubits");
    const Eigen::Index both = bit_mask(num_qubits, e.a) | bit_mask(num_qubits, e.b);
    for (Eigen::Index i = 0; i < dim; ++i) {
      if ((i & both) == both) amps(i) = -amps(i);
    }
  }
  return StateVector(num_qubits, std::move(amps));
}

ComplexMatrix parity_projector(int num_qubits, int l1, int l2, int sign) {
  check_qubit(num_qubits, l1);
  check_qubit(num_qubits, l2);
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const bool b1 = (i & bit_mask(num_qubits, l1)) != 0;
    const bool b2 = (i & bit_mask(num_qubits, l2)) != 0;
    const int parity = b1 == b2 ? +1 : -1;
    if (parity == sign) p(i, i) = 1.0;
  }
  return p;
}

double parity_weight(const DensityOperator& state, int l1, int l2, int sign) {
  return (parity_projector(state.num_qubits(), l1, l2, sign) * state.matrix()).trace().real();
}

ComplexVector bell_phi_plus() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = kInvSqrt2;
  v(3) = kInvSqrt2;
  return v;
}

DensityOperator noisy_bell_pair(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 0.5)) {
    throw DomainError("noisy Bell pair needs epsilon in [0, 0.5]");
  }
  ComplexVector psi_plus = ComplexVector::Zero(4);
  psi_plus(1) = kInvSqrt2;
  psi_plus(2) = kInvSqrt2;
  DensityOperator clean = DensityOperator::pure(StateVector(2, psi_plus));
  DensityOperator flipped = clean;
  flipped.apply(gates::z(), 1);
  return clean.scaled(1.0 - epsilon) + flipped.scaled(epsilon);
}

std::pair<Gate, Gate> y_byproduct_correction(int y) {
  // Outcome +1 leaves S on both neighbours, outcome -1 leaves S^dagger.
  return y > 0 ? std::pair{gates::s_dagger(), gates::s_dagger()}
               : std::pair{gates::s(), gates::s()};
}

std::vector<BranchOutcome> pumping_round(const DensityOperator& logical, double epsilon, int l1,
                                         int l2) {
  const int n = logical.num_qubits();
  check_qubit(n, l1);
  check_qubit(n, l2);
  if (l1 == l2) throw DomainError("pumping needs two distinct logical qubits");
  if (n + 2 > kMaxOracleQubits) throw DomainError("logical register too large for the oracle");
  if (!(epsilon >= 0.0 && epsilon <= 0.5)) throw DomainError("epsilon must lie in [0, 0.5]");

  const int a1 = n;
  const int a2 = n + 1;
  ComplexVector psi_plus = ComplexVector::Zero(4);
  psi_plus(1) = kInvSqrt2;
  psi_plus(2) = kInvSqrt2;

  std::vector<BranchOutcome> branches;
  for (int e : {0, 1}) {
    const double prior = e == 0 ? 1.0 - epsilon : epsilon;
    if (prior == 0.0) continue;
    DensityOperator pair = DensityOperator::pure(StateVector(2, psi_plus));
    if (e == 1) pair.apply(gates::z(), 1);  // Z on A2; equals Z on A1 up to sign

    DensityOperator state = logical.tensor(pair);
    state.apply(gates::x(), a1);
    state.apply(gates::h(), a1);
    state.apply_cz(a1, l1);
    state.apply_cz(a2, l2);

    // After discarding A1, A2 sits at index n.
    std::optional<DensityOperator> after_y;
    for (int y : {+1, -1}) {
      DensityOperator branch = state.measure_and_discard(a1, basis_ket('y', y));
      const auto [fix_l1, fix_a2] = y_byproduct_correction(y);
      branch.apply(fix_l1, l1);
      branch.apply(fix_a2, n);
      after_y = after_y ? *after_y + branch : branch;
    }

    for (int m : {+1, -1}) {
      DensityOperator out = after_y->measure_and_discard(n, basis_ket('x', m));
      const double p = out.trace();
      if (p <= 0.0) continue;
      branches.push_back(BranchOutcome{m, e, out.scaled(1.0 / p), prior * p});
    }
  }
  return branches;
}

ParityMapCheck verify_parity_map(double epsilon, std::span<const int> outcomes) {
  const Edge none[] = {{0, 0}};
  const DensityOperator plus_plus =
      DensityOperator::pure(make_graph_state(2, std::span<const Edge>(none, 0)));
  return verify_parity_map(epsilon, outcomes, plus_plus, 0, 1);
}

ParityMapCheck verify_parity_map(double epsilon, std::span<const int> outcomes,
                                 const DensityOperator& initial, int l1, int l2) {
  DensityOperator rho = initial;
  double probability = 1.0;
  int delta = 0;
  for (int m : outcomes) {
    if (m != 1 && m != -1) throw DomainError("outcomes must be +1 or -1");
    std::optional<DensityOperator> conditional;
    double p_m = 0.0;
    for (const BranchOutcome& b : pumping_round(rho, epsilon, l1, l2)) {
      if (b.m != m) continue;
      p_m += b.weight;
      DensityOperator part = b.logical.scaled(b.weight);
      conditional = conditional ? *conditional + part : part;
    }
    if (!conditional || p_m <= 0.0) {
      throw DomainError("outcome sequence has zero probability");
    }
    rho = conditional->scaled(1.0 / p_m);
    probability *= p_m;
    delta += m;
  }

  // Prediction from the noisy parity map applied to the initial state.
  const int n = initial.num_qubits();
  const ComplexMatrix p_even = parity_projector(n, l1, l2, +1);
  const ComplexMatrix p_odd = parity_projector(n, l1, l2, -1);
  const ComplexMatrix even = p_even * initial.matrix() * p_even;
  const ComplexMatrix odd = p_odd * initial.matrix() * p_odd;
  ComplexMatrix predicted;
  if (epsilon == 0.0) {
    predicted = delta >= 0 ? even : odd;
  } else {
    const double alpha = std::sqrt(1.0 / epsilon - 1.0);
    predicted = std::pow(alpha, delta) * even + std::pow(alpha, -delta) * odd;
  }
  const DensityOperator prediction = DensityOperator(predicted).normalized();

  std::vector<int> seq(outcomes.begin(), outcomes.end());
  double walk_probability = 1.0;
  if (epsilon > 0.0 && epsilon < 0.5) {
    walk_probability = sequence_probability(DephasingChannel(epsilon), seq);
  } else {
    // Degenerate channels: every step from delta != 0 is deterministic (eps = 0)
    // or a fair coin (eps = 1/2).
    int d = 0;
    for (int m : seq) {
      const bool away = d != 0 && (d > 0) == (m > 0);
      walk_probability *= d == 0 || epsilon == 0.5 ? 0.5 : (away ? 1.0 : 0.0);
      d += m;
    }
  }

  const int sign = delta >= 0 ? +1 : -1;
  return ParityMapCheck{delta,
                        trace_distance(rho, prediction),
                        probability,
                        walk_probability,
                        parity_weight(rho, l1, l2, sign),
                        rho};
}

DensityOperator bell_diagonal_density(const BellDiagonalState& w) {
  DensityOperator phi = DensityOperator::pure(StateVector(2, bell_phi_plus()));
  auto rotated = [&](const Gate& g) {
    DensityOperator r = phi;
    r.apply(g, 0);
    return r;
  };
  return phi.scaled(w.a) + rotated(gates::x()).scaled(w.b) + rotated(gates::z()).scaled(w.c) +
         rotated(gates::y()).scaled(w.d);
}

BellDiagonalState bell_weights(const DensityOperator& two_qubit) {
  if (two_qubit.num_qubits() != 2) throw DomainError("Bell weights need a two-qubit state");
  auto weight = [&](const Gate& g) {
    ComplexVector v = bell_phi_plus();
    // Apply g to qubit 0 of the ket.
    ComplexVector out = ComplexVector::Zero(4);
    for (int i = 0; i < 4; ++i) {
      const int b0 = i >> 1;
      const int rest = i & 1;
      for (int k = 0; k < 2; ++k) out((k << 1) | rest) += g(k, b0) * v(i);
    }
    return (out.adjoint() * two_qubit.matrix() * out)(0, 0).real();
  };
  BellDiagonalState w{weight(gates::identity()), weight(gates::x()), weight(gates::z()),
                      weight(gates::y()), false};
  w.normalized = std::abs(w.total() - 1.0) <= 1e-12;
  return w;
}

DensityOperator werner_state(double f0) {
  const double q = (1.0 - f0) / 3.0;
  return bell_diagonal_density(BellDiagonalState{f0, q, q, q, true});
}

DistillStepResult bilateral_distill_step(const DensityOperator& control,
                                         const DensityOperator& target) {
  if (control.num_qubits() != 2 || target.num_qubits() != 2) {
    throw DomainError("bilateral step needs two two-qubit states");
  }
  // C1 = 0, C2 = 1, T1 = 2, T2 = 3.
  DensityOperator state = control.tensor(target);
  state.apply_cz(0, 2);
  state.apply_cz(1, 3);
  std::optional<DensityOperator> kept;
  for (int m : {+1, -1}) {
    DensityOperator branch = state.measure_and_discard(0, basis_ket('x', m))
                                 .measure_and_discard(0, basis_ket('x', m));
    kept = kept ? *kept + branch : branch;
  }
  const double p = kept->trace();
  return {kept->scaled(1.0 / p), p};
}

}  // namespace distill
