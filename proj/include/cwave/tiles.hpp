// Tilings of R^n by congruent copies of a set: translation, dilation and
// reflection-group congruence with exact certificates.
//
// Sets are DyadicBoxSets and group elements exact axis-aligned affine maps
// in unit coordinates (multiples of pi for the built-in groups).  A
// congruence certificate splits the source E into pieces E_j and group
// elements g_j with the images g_j(E_j) pairwise disjoint inside the target;
// whatever part of E cannot be placed is the residual, whatever part of the
// target is not reached is the uncovered set.  E and the target are
// congruent iff both are empty.  Candidate elements are tried in a fixed
// order (translations by coefficient norm, dilation powers A^k by
// increasing k, reflection cells by index norm); each takes the largest
// part of the remaining source that lands in the remaining target.
#pragma once

#include "cwave/boxset.hpp"
#include "cwave/reflections.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cwave {

enum class GroupKind { Translation, Dilation, Weyl };
std::string to_string(GroupKind k);

struct GroupSpec {
  GroupKind kind = GroupKind::Translation;
  size_t dim = 1;
  int unit_power = 1;
  std::vector<Vec<Rational>> lattice;  // Translation: basis vectors
  Mat<Rational> A;                     // Dilation: D(x) = A (x - theta) + theta
  Vec<Rational> theta;
  RBox figure;  // Weyl: the box whose faces are the mirrors

  static GroupSpec translations(std::vector<Vec<Rational>> basis, int unit_power = 1);
  // step * Z^n.
  static GroupSpec integer_translations(size_t dim, const Rational& step, int unit_power = 1);
  static GroupSpec dilations(Mat<Rational> A, Vec<Rational> theta, int unit_power = 1);
  // Uniform dilation x -> c x about 0.
  static GroupSpec scalar_dilations(size_t dim, const Rational& c, int unit_power = 1);
  static GroupSpec weyl_box(RBox figure, int unit_power = 1);
  // The reflection group of an axis-aligned box figure with its faces as
  // walls (e.g. square_C); std::invalid_argument for other figures.
  static GroupSpec weyl(const FoldableFigure<Scalar>& figure);

  // Throws std::invalid_argument for malformed data (singular lattice,
  // dilation that is not expansive or not axis-aligned, empty figure).
  void validate() const;
  std::string describe() const;

  // Exact membership of an affine map in the group.
  bool contains(const AffineMap<Rational>& g) const;
  // D^k for the dilation group.
  AffineMap<Rational> dilation_power(long k) const;
  // Elements g whose image g(S) can meet the box `near` for a source with
  // bounding box `src`, in the canonical order.
  std::vector<AffineMap<Rational>> candidates(const RBox& src, const RBox& near) const;
  // A fundamental cell of the group (lattice parallelepiped bounding box or
  // the figure); Dilation has none.
  RBox cell_box() const;
};

// ---------------------------------------------------------------------------
// Certificates

struct CertificatePiece {
  DyadicBoxSet piece;
  AffineMap<Rational> g;
};

struct CongruenceCertificate {
  GroupKind kind = GroupKind::Translation;
  std::vector<CertificatePiece> pieces;
  DyadicBoxSet residual;   // source part not carried into the target
  DyadicBoxSet uncovered;  // target part not reached

  bool congruent() const { return residual.empty() && uncovered.empty(); }
  Scalar residual_measure() const { return residual.measure(); }
  Scalar uncovered_measure() const { return uncovered.measure(); }
  // residual + uncovered measure (exact).
  Scalar defect() const;
};

struct CertificateCheck {
  bool ok = true;
  std::vector<std::string> failures;
};

// Independent re-verification: every g in the group, pieces disjoint and
// inside the source, pieces + residual = source, images disjoint and inside
// the target, uncovered = target minus the images.
CertificateCheck verify_certificate(const CongruenceCertificate& cert, const DyadicBoxSet& source,
                                    const DyadicBoxSet& target, const GroupSpec& group);

// Target -> source certificate (residual and uncovered swap roles).
CongruenceCertificate invert_certificate(const CongruenceCertificate& cert);
// a: S -> T and b: T -> U give S -> U; the composite residual collects
// everything that a or b fails to carry.
CongruenceCertificate compose_certificates(const CongruenceCertificate& a, const CongruenceCertificate& b);

// Congruence of E to the target under the group.  Dilation requires both
// sets to stay away from theta (std::domain_error otherwise).
CongruenceCertificate congruence(const DyadicBoxSet& E, const DyadicBoxSet& target, const GroupSpec& group);
CongruenceCertificate translation_congruent(const DyadicBoxSet& E, const DyadicBoxSet& target,
                                            const GroupSpec& lattice);
CongruenceCertificate dilation_congruent(const DyadicBoxSet& E, const DyadicBoxSet& target,
                                         const GroupSpec& dilations);
// Reflection congruence; the target defaults to the figure itself (folding).
CongruenceCertificate weyl_congruent(const DyadicBoxSet& E, const GroupSpec& weyl,
                                     const std::optional<DyadicBoxSet>& target = std::nullopt);

// Largest part of `source` mapped into `target` by D^k, as (D^k piece)
// summed over k: the dilation reduction of a set into a fundamental domain.
DyadicBoxSet dilation_reduce(const DyadicBoxSet& source, const DyadicBoxSet& target, const GroupSpec& dilations);

// ---------------------------------------------------------------------------
// Fundamental domains

struct FundamentalDomainReport {
  bool ok = false;
  Scalar overlap;    // sum of image measures minus the measure of their union (in the region)
  Scalar uncovered;  // region minus the union of the images
  size_t images = 0;
};

// Do the images g(E), g in the group, partition the region (up to null
// sets)?  Translation and Weyl groups need a region spanning at least three
// group cells per axis; dilation regions must stay away from theta.
FundamentalDomainReport is_fundamental_domain(const DyadicBoxSet& E, const GroupSpec& group,
                                              const DyadicBoxSet& region);

// Grid-mode version for general expansive A and sets given by indicator
// functions: on the midpoints of a grid over the region counts the k with
// D^{-k} y in F; the defect is the region measure times the fraction of
// points not counted exactly once.
struct GridPartitionReport {
  size_t points = 0, multiply_covered = 0, uncovered = 0;
  double defect = 0;
};
GridPartitionReport dilation_partition_grid(const std::function<bool(const Vec<double>&)>& in_F,
                                            const Mat<double>& A, const Vec<double>& theta,
                                            const std::function<bool(const Vec<double>&)>& in_region,
                                            const Vec<double>& region_lo, const Vec<double>& region_hi,
                                            double resolution, int max_power = 64);

// ---------------------------------------------------------------------------
// Reflections and translations

// J = (translations of the reflection group) intersected with the lattice,
// for a box figure and a lattice with axis-parallel generators.
struct IntersectionGroup {
  std::vector<Vec<Scalar>> weyl_translations;  // generators of the translation part of W~
  std::vector<Vec<Scalar>> lattice;            // generators of T
  std::vector<Vec<Scalar>> generators;         // generators of J
  bool contains(const Vec<Scalar>& v) const;
};
IntersectionGroup intersection_group(const FoldableFigure<Scalar>& figure, const std::vector<Vec<Scalar>>& lattice);

// rho_{r, pi k} o rho_{s, pi l}.  For r = s this is the translation by
// pi (k - l) r^vee.
struct ReflectionComposition {
  AffineMap<Scalar> map;
  bool is_translation = false;
  Vec<Scalar> translation;           // when is_translation
  std::optional<Vec<Scalar>> fixed;  // unique fixed point when I - linear is invertible
};
ReflectionComposition compose_reflections(const Vec<Scalar>& r, long k, const Vec<Scalar>& s, long l);

// ---------------------------------------------------------------------------
// Wavelet-set checks

struct ThreeWayReport {
  CongruenceCertificate translation, weyl, dilation;
  Scalar bound;  // tolerance applied to each defect
  bool translation_ok = false, weyl_ok = false, dilation_ok = false;
  bool ok() const { return translation_ok && weyl_ok && dilation_ok; }
};

// Translation congruence to the figure box under the lattice, reflection
// congruence to the figure, and dilation congruence to A(C) \ C; each defect
// must be <= bound.
ThreeWayReport three_way_check(const DyadicBoxSet& W, const GroupSpec& lattice, const GroupSpec& weyl,
                               const GroupSpec& dilations, const Scalar& bound);

}  // namespace cwave
