#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "twowell/energy.hpp"
#include "twowell/grid.hpp"
#include "twowell/matrixcore.hpp"

namespace twowell {

/// Tunable constants of the rigidity probes. None of them is quantified by
/// the theory; the defaults are conventions.
struct RigidityConstants {
  double eta = 0.01;    ///< smallness of volume and perimeter in the probe ball
  double eta0 = 0.01;   ///< covering density threshold
  double delta = 0.2;   ///< cross aspect ratio
  double theta = 0.1;   ///< fraction of candidates rejected by each energy test
  double alpha = 0.05;  ///< inner radius factor of the lower bound (delta / 4)
  int rho_samples = 64;

  void validate() const;
};

struct SmallnessReport {
  double volume = 0.0;     ///< |M cap B_R|
  double perimeter = 0.0;  ///< perimeter of M inside B_R
  double volume_ratio = 0.0;     ///< volume / R^2
  double perimeter_ratio = 0.0;  ///< perimeter / R
  bool holds = false;            ///< both ratios <= eta
};

/// |M cap B_R| <= eta R^2 and Per(M, B_R) <= eta R.
SmallnessReport check_smallness(const ScalarField& chi, const Ball& ball, double eta);

/// True when no sample of [x, y] lies in M dilated by one cell.
bool segment_avoids(const ScalarField& chi, const Vec2& x, const Vec2& y);

/// Candidate segments of the cross. With S = R/m, horizontal segments are
/// [(-S/2, rS), (S/2, rS)] for r in (-delta, delta); vertical ones are
/// [(sS, -delta S), (sS, delta S)] for s in (-1/2, 1/2), offsets relative to
/// the ball center. Candidates are spaced one cell apart.
struct LineScan {
  bool horizontal = true;
  double scale = 0.0;             ///< S = R / m
  double half_height = 0.0;       ///< delta, the half-length of vertical lines in units of S
  std::vector<double> params;     ///< r or s
  std::vector<double> energies;   ///< segment elastic energy
  std::vector<bool> hits_M;
  std::vector<bool> accepted;
  double threshold = 0.0;         ///< (1 - theta)-quantile of the energies
  double ball_energy = 0.0;       ///< elastic energy in B_R
  int accepted_count() const;
  std::pair<Vec2, Vec2> segment(std::size_t k, const Vec2& center) const;
};

/// Lines that avoid M and whose energy is within the best (1 - theta)
/// fraction. Throws HypothesisError when nothing is accepted.
LineScan good_horizontal_lines(const ScalarField& chi, const VectorField& v, const WellPair& W,
                               const Ball& ball, double m, const RigidityConstants& k = {});
LineScan good_vertical_lines(const ScalarField& chi, const VectorField& v, const WellPair& W,
                             const Ball& ball, double m, const RigidityConstants& k = {});

/// Elastic density on the cells of a ball, with the singular integral
/// int e(z) / |z - x| dz. The cell containing x is replaced by its exact
/// contribution for x at the cell center, 4 h ln(1 + sqrt 2) e.
class BallDensity {
 public:
  BallDensity(const ScalarField& chi, const VectorField& v, const WellPair& W, const Ball& ball);
  /// For an arbitrary nonnegative cell field f restricted to the ball.
  BallDensity(const ScalarField& f, const Ball& ball);

  double weighted(const Vec2& x) const;
  double total() const { return total_; }
  const std::vector<Vec2>& centers() const { return centers_; }

 private:
  double h_ = 0.0;
  double total_ = 0.0;
  std::vector<Vec2> centers_;
  std::vector<double> values_;  ///< density times cell area
};

/// Points x0 of a ball where int |f| / |x - x0| <= C / R |f|_1, keeping all
/// but a fraction theta of the candidates. Candidates are the cell centers
/// of every `stride`-th cell in each direction.
struct NonsingularSelection {
  std::vector<Vec2> points;
  std::vector<double> values;  ///< the weighted integrals at `points`
  double threshold = 0.0;
  double C = 0.0;              ///< max value * R / |f|_1 over the selection
  int candidates = 0;
};
NonsingularSelection nonsingular_points(const ScalarField& f, const Ball& ball, double theta, int stride = 4);

enum class RhombusItem { AvoidM = 0, SegmentEnergy, WeightedEnergy, ImageAvoidM, ImageEnergy };
inline constexpr int kRhombusItems = 5;
const char* to_string(RhombusItem item);

struct RhombusReport {
  Vec2 a, b, c, d;           ///< a, b on the long diagonal, c above, d below
  Vec2 center;
  double rho = 0.0;
  double half_long = 0.0;    ///< cross half-lengths before shrinking
  double half_short = 0.0;
  /// Segment order: [a,b], [c,d], [a,c], [c,b], [b,d], [d,a].
  std::array<double, 6> segment_energies{};
  std::array<bool, 6> intersects_M{};
  std::array<double, 6> image_energies{};
  std::array<bool, 6> image_intersects_M{};
  double weighted_energy = 0.0;  ///< max over corners of the singular integral
  double max_length_distortion = 0.0;
  double rigid_fit_deviation = 0.0;  ///< max_corner |v(x) - Qx - p|
  double rigid_fit_angle = 0.0;
  Vec2 rigid_fit_shift;
  double ball_energy = 0.0;   ///< epsilon = elastic energy in B_R
  double ball_radius = 0.0;
  double C_distortion = 0.0;  ///< max_length_distortion * R / sqrt(epsilon)
  int rho_tested = 0;
  int rho_good = 0;
  std::array<int, kRhombusItems> item_failures{};
  int pushforward_indeterminate = 0;

  std::array<std::pair<Vec2, Vec2>, 6> segments() const;
  bool contains(const Vec2& x) const;
};

/// Cross from the line scans, then a scan over the homothety factor rho in
/// (1/4, 3/4). Items (i)-(v) are tested on every rho; (iii) and the two
/// energy items keep the best (1 - theta) fraction. Among the rho passing
/// all items the one with the smallest maximal segment energy is reported,
/// with the rigid fit (vi) and the length distortion (vii). Throws
/// HypothesisError naming the most frequent failure when no rho passes.
RhombusReport find_good_rhombus(const ScalarField& chi, const VectorField& v, const WellPair& W,
                                const Ball& ball, double m, const RigidityConstants& k = {});

/// h^2 times the number of cells in `region` where grad v is strictly closer
/// to SO(2)F than to SO(2).
double bad_set_measure(const ScalarField& chi, const VectorField& v, const WellPair& W,
                       const std::function<bool(const Vec2&)>& region);

/// E_elast[B_R] R^2 / |chi|_{L1(B_{alpha R})}^2, +infinity when chi vanishes
/// on the inner ball. Throws HypothesisError when the smallness conditions
/// fail on B_R.
double lower_bound_ratio(const ScalarField& chi, const VectorField& v, const WellPair& W,
                         const Ball& ball, double alpha, double eta);

/// Line-oriented key=value dump.
void write_report(std::ostream& os, const RhombusReport& r);

}  // namespace twowell
