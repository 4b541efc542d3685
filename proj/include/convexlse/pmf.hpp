#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace convexlse {

// Threshold above which a second difference counts as a knot. Exact
// positivity is what the definitions ask for; the slack keeps knot
// detection stable under the 1e-12-level noise of the decomposition
// round-trips.
inline constexpr double kKnotTol = 1e-10;

// Finitely supported probability mass function on {0,...,S}. The support
// must start at 0 (shift samples first, see shift_to_origin) and S >= 1:
// a Dirac mass has no convexity structure to estimate.
class Pmf {
 public:
  explicit Pmf(std::vector<double> mass, double mass_tol = 1e-12);

  int support_end() const { return static_cast<int>(mass_.size()) - 1; }  // S
  const std::vector<double>& mass() const { return mass_; }

  // p(k); zero outside {0,...,S}.
  double operator()(int k) const {
    return (k < 0 || k > support_end()) ? 0.0 : mass_[static_cast<std::size_t>(k)];
  }

  double mean() const;

 private:
  std::vector<double> mass_;
};

// Knots of a convex pmf supported on {0,...,S}: interior knots lie in
// [1, S]; S+1 is always a knot and is kept as `last`. The implicit left
// boundary is 0.
struct KnotSet {
  std::vector<int> interior;
  int last = 0;  // S + 1

  bool is_interior(int s) const;
  // Consecutive pairs [s_j, s_{j+1}] with s_0 = 0 and s_{m+1} = last.
  std::vector<std::pair<int, int>> segments() const;
};

// Mixing weights pi_1..pi_J of the triangular representation
// p = sum_j pi_j T_j. Stored densely; pi(j) is zero outside [1, J].
// The constructor requires the weights to sum to 1 within sum_tol and
// rescales them to sum to exactly 1.
class MixtureWeights {
 public:
  explicit MixtureWeights(std::vector<double> pi, double sum_tol = 1e-10);

  const std::vector<double>& pi() const { return pi_; }
  int max_component() const { return static_cast<int>(pi_.size()); }  // J

  double operator()(int j) const {
    return (j < 1 || j > max_component()) ? 0.0 : pi_[static_cast<std::size_t>(j - 1)];
  }

 private:
  std::vector<double> pi_;
};

// Cdf F(k) = sum_{j<=k} p(j) for k = 0..S+1; F(S) = F(S+1) = 1.
std::vector<double> cdf(const Pmf& p);

// H(z) = sum_{k=0}^{z-1} F(k), H(0) = 0; F saturates at 1 beyond S.
double h_process(const Pmf& p, int z);

// Second difference p(k+1) - 2 p(k) + p(k-1); out-of-range mass reads 0.
double laplacian(const Pmf& p, int k);
double laplacian(std::span<const double> mass, int k);

bool is_convex(const Pmf& p, double tol = kKnotTol);
bool is_convex(std::span<const double> mass, double tol = kKnotTol);

KnotSet knots(const Pmf& p, double tol = kKnotTol);

// Triangular pmf T_j(i) = 2 (j-i)_+ / (j (j+1)) on {0,...,j-1}; j >= 2.
Pmf triangular(int j);

// pi_j = j (j+1) / 2 * laplacian(p, j); requires a convex input.
MixtureWeights mixture_decompose(const Pmf& p, double tol = kKnotTol);
Pmf mixture_compose(const MixtureWeights& w);

// The same linear maps on raw sequences, with no normalization or
// convexity checks; mixture_weights_raw inverts mixture_mass_raw exactly.
std::vector<double> mixture_weights_raw(std::span<const double> mass);
std::vector<double> mixture_mass_raw(std::span<const double> pi);

// p(i) = q^i (1-q) / (1 - q^{S+1}) on {0,...,S}; convex iff q <= 1/2.
Pmf truncated_geometric(double q, int max_support);

// l_r norm for r in {1, 2, infinity}.
double lr_norm(std::span<const double> x, double r);

// Support-shift plumbing for samples whose support starts at kappa > 0.
std::vector<int> shift_to_origin(std::vector<int> values, int kappa);

// Sequence-level helpers shared by the optimality certificates: treat
// `mass` as a sequence on the nonnegative integers (zero beyond the end).
std::vector<double> prefix_cdf(std::span<const double> mass, int k_max);
std::vector<double> h_sequence(std::span<const double> mass, int z_max);

}  // namespace convexlse
