#ifndef DISTILL_BELL_DIAGONAL_H_
#define DISTILL_BELL_DIAGONAL_H_

namespace distill {

/// Two-qubit state diagonal in the Bell basis, by weight on
/// Phi+ (a), X Phi+ = Psi+ (b), Z Phi+ = Phi- (c) and Y Phi+ ~ Psi- (d).
/// Weights produced by the distillation recursion are left unnormalized.
struct BellDiagonalState {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  bool normalized = false;

  double total() const { return a + b + c + d; }
  BellDiagonalState normalized_copy() const;
};

}  // namespace distill

#endif  // DISTILL_BELL_DIAGONAL_H_
