#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mpifs/fuzzy.hpp"
#include "mpifs/geometry.hpp"

namespace mpifs {

/// Affine map phi(x) = A x + b. For a GIFS of arity m the linear part acts on
/// the concatenated tuple, so A is dim x (m * dim); m == 1 for ordinary IFSs.
struct AffineMap {
    Eigen::MatrixXd linear;
    Eigen::VectorXd offset;

    AffineMap(Eigen::MatrixXd a, Eigen::VectorXd b);

    int dim() const { return static_cast<int>(linear.rows()); }
    int arity() const { return static_cast<int>(linear.cols() / linear.rows()); }

    Point apply(const Point& x) const;
    Point apply_tuple(const TupleVec& xs) const;
};

Point apply_map(const AffineMap& m, std::span<const Point> xs);

/// Largest singular value by power iteration on A^T A, relative tolerance
/// 1e-10 on the dominant eigenvalue.
double spectral_norm(const Eigen::MatrixXd& a);

/// Lipschitz constant of an arity-1 affine map: the spectral norm of A.
double lipschitz_constant(const AffineMap& m);

/// Max-plus normalized IFS: maps of uniform arity with weights q_j <= 0,
/// max_j q_j == 0 (enforced at construction).
class MaxPlusSystem {
public:
    MaxPlusSystem(std::vector<AffineMap> maps, std::vector<double> weights,
                  std::optional<double> declared_alpha = std::nullopt);

    const std::vector<AffineMap>& maps() const { return maps_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t map_count() const { return maps_.size(); }
    int dim() const { return maps_.front().dim(); }
    int arity() const { return maps_.front().arity(); }

    /// Contraction factor alpha_S. Arity 1: max spectral norm of the linear
    /// parts (computed once). Arity >= 2: the declared value from the config;
    /// throws InvalidSystemError when none was declared.
    double contraction_factor() const;

    std::optional<double> declared_alpha() const { return declared_alpha_; }

private:
    std::vector<AffineMap> maps_;
    std::vector<double> weights_;
    std::optional<double> declared_alpha_;
    double computed_alpha_ = 0.0;  // valid for arity 1
};

/// Grey maps of the corresponding fuzzy IFS: d_j(t) = theta(q_j + theta^{-1}(t)).
std::vector<GreyLevelMap> grey_maps(const MaxPlusSystem& sys, const ScaleFunction& theta);

/// Sampled Edelstein check for a (possibly arity >= 2) map: draws tuple pairs
/// from the box and verifies d(phi(x), phi(y)) < max_i d(x_i, y_i). Returns
/// false on the first violated sample.
bool edelstein_sampled(const AffineMap& m, const Box& box, int samples, std::uint64_t seed);

}  // namespace mpifs
