// Wavelet sets: the standard sets, the two planar three-way wavelet sets W1
// and W2 with exact truncation tails, and a constructor producing sets that
// are simultaneously congruent to a fundamental domain E of a translation or
// reflection group and to a dilation fundamental domain F.
//
// All coordinates are in units of pi.
#pragma once

#include "cwave/tiles.hpp"

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwave {

DyadicBoxSet cube_C(size_t n);                              // [-pi, pi)^n
DyadicBoxSet shannon_set();                                 // [-2pi,-pi) u [pi,2pi)
DyadicBoxSet dilation_shell(size_t n, const Rational& c = 2);  // cC \ C

GroupSpec lattice_2pi(size_t n);    // 2 pi Z^n
GroupSpec square_weyl();            // reflections in the faces of [-pi,pi]^2
GroupSpec interval_weyl();          // reflections in x = +-pi
GroupSpec dyadic_dilations(size_t n);  // x -> 2x

// Two-generator criterion: E is a 2pi-translation generator of a partition
// (translation congruent to C) and a 2-dilation generator of a partition of
// R^n \ {0} (dilation congruent to 2C \ C).
struct WaveletSetVerdict {
  CongruenceCertificate translation, dilation;
  bool is_wavelet_set() const { return translation.congruent() && dilation.congruent(); }
};
WaveletSetVerdict wavelet_set_criterion(const DyadicBoxSet& E);

// ---------------------------------------------------------------------------
// W1 and W2

struct NamedSet {
  std::string name;
  DyadicBoxSet set;
};

struct WaveletSetFixture {
  std::string name;  // "w1" or "w2"
  int depth = 0;
  DyadicBoxSet set;
  std::vector<NamedSet> parts;  // G0, G1.., E, B, C/D, A1.. in construction order
  Scalar tail;                  // sum_{k > depth} m(G_k) for one copy
  int copies = 0;               // 4 quadrants (W1) or 2 halves (W2)
  // Residual bound for the congruence checks: 2 * copies * tail (each
  // missing G_k and its displaced translate).
  Scalar residual_bound() const;
  const DyadicBoxSet& part(const std::string& name) const;  // std::out_of_range if absent
};

// m(G_k) for W1 and W2, and the exact tail sums.
Scalar w1_piece_measure(int k);
Scalar w2_piece_measure(int k);
Scalar w1_tail(int depth);
Scalar w2_tail(int depth);

// Truncated fixtures, depth >= 1 (std::invalid_argument otherwise).
WaveletSetFixture build_w1(int depth);
WaveletSetFixture build_w2(int depth);

// A set statement from the construction, checked exactly.
struct StatementCheck {
  std::string statement;
  bool holds = false;
  std::string detail;
};
std::vector<StatementCheck> w1_statements(const WaveletSetFixture& w1);
std::vector<StatementCheck> w2_statements(const WaveletSetFixture& w2);

// ---------------------------------------------------------------------------
// Constructor

struct ConstructionOptions {
  double epsilon = 1e-6;
  int max_iterations = 50;
  int max_shell = 16;  // largest j tried when relocating E into D^j(F)
};

struct PairCheck {
  bool neighbourhood = false;  // D^{-k0}(F) is inside E
  bool relocation = false;     // some g in the tiling group has g(E) inside D^j(F)
  long k0 = 0, shell = 0;
  AffineMap<Rational> g;
};
PairCheck check_pair(const DyadicBoxSet& E, const DyadicBoxSet& F, const GroupSpec& tiling,
                     const GroupSpec& dilations, int max_shell = 16);

struct ConstructionResult {
  DyadicBoxSet set;
  int iterations = 0;
  bool trivial = false;  // epsilon >= m(E): E returned unchanged
  CongruenceCertificate to_E;  // tiling-group certificate W -> E
  CongruenceCertificate to_F;  // dilation certificate W -> F (empty when trivial)
  PairCheck pair;
  std::vector<double> history;  // max(defect_E, defect_F) per iteration
  double defect_E() const { return to_double(to_E.defect()); }
  double defect_F() const { return to_double(to_F.defect()); }
};

class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(const std::string& what, double best) : std::runtime_error(what), best_residual(best) {}
  double best_residual;
};

// Exchange iteration: with F' = D^{-k0}(F) inside E and g(E) inside D^j(F),
//   C_0 = E \ F',  C_{m+1} = dilation reduction of g(C_m) into F',
//   W_m = (E \ (C_0 u .. u C_m)) u g(C_0 u .. u C_m).
// W_m is tiling-congruent to E exactly; its dilation defect is the measure
// of C_{m+1}, which shrinks geometrically.  Throws std::invalid_argument
// when the pair conditions fail and ConstructionError on non-convergence.
ConstructionResult construct_wavelet_set(const DyadicBoxSet& E, const DyadicBoxSet& F, const GroupSpec& tiling,
                                         const GroupSpec& dilations, const ConstructionOptions& opt = {});

// ---------------------------------------------------------------------------

// int_E e^{i (l - l') s} ds for -L <= l, l' <= L, one-dimensional E in
// units of pi (closed-form integrals of the exponentials).
std::vector<std::vector<std::complex<double>>> exponential_gram(const DyadicBoxSet& E, long L);

}  // namespace cwave
