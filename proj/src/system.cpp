#include "mpifs/system.hpp"

#include <cmath>
#include <random>

namespace mpifs {

AffineMap::AffineMap(Eigen::MatrixXd a, Eigen::VectorXd b)
    : linear(std::move(a)), offset(std::move(b)) {
    if (linear.rows() < 1 || linear.rows() > 3)
        throw DomainError("affine map: output dimension must be 1..3");
    if (offset.size() != linear.rows())
        throw DomainError("affine map: offset size must match output dimension");
    if (linear.cols() % linear.rows() != 0 || linear.cols() < linear.rows())
        throw DomainError("affine map: column count must be arity * dim");
    if (!linear.allFinite() || !offset.allFinite())
        throw DomainError("affine map: entries must be finite");
}

Point AffineMap::apply(const Point& x) const {
    if (x.size() != linear.cols()) throw DomainError("affine map: dimension mismatch");
    return linear * x + offset;
}

Point AffineMap::apply_tuple(const TupleVec& xs) const {
    if (xs.size() != linear.cols()) throw DomainError("affine map: tuple arity mismatch");
    return linear * xs + offset;
}

Point apply_map(const AffineMap& m, std::span<const Point> xs) {
    if (static_cast<int>(xs.size()) != m.arity())
        throw DomainError("apply_map: tuple arity mismatch");
    TupleVec cat(m.linear.cols());
    Eigen::Index at = 0;
    for (const Point& p : xs) {
        if (p.size() != m.dim()) throw DomainError("apply_map: point dimension mismatch");
        cat.segment(at, p.size()) = p;
        at += p.size();
    }
    return m.apply_tuple(cat);
}

double spectral_norm(const Eigen::MatrixXd& a) {
    if (a.size() == 0) return 0.0;
    const Eigen::MatrixXd ata = a.transpose() * a;
    const Eigen::Index n = ata.rows();
    Eigen::VectorXd v(n);
    // Deterministic start, slightly tilted so it is not orthogonal to the
    // dominant eigenvector of symmetric sign patterns.
    for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.0101 * static_cast<double>(i);
    v.normalize();
    double lambda = 0.0;
    double prev = -1.0;
    for (int iter = 0; iter < 200000; ++iter) {
        Eigen::VectorXd w = ata * v;
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        v = w / norm;
        lambda = norm;
        if (iter > 0 && std::abs(lambda - prev) <= 1e-10 * lambda) break;
        prev = lambda;
    }
    return std::sqrt(lambda);
}

double lipschitz_constant(const AffineMap& m) {
    if (m.arity() != 1)
        throw DomainError("lipschitz_constant: defined for arity-1 maps only");
    return spectral_norm(m.linear);
}

MaxPlusSystem::MaxPlusSystem(std::vector<AffineMap> maps, std::vector<double> weights,
                             std::optional<double> declared_alpha)
    : maps_(std::move(maps)), weights_(std::move(weights)), declared_alpha_(declared_alpha) {
    if (maps_.empty()) throw InvalidSystemError("system: needs at least one map");
    if (weights_.size() != maps_.size())
        throw InvalidSystemError("system: need exactly one weight per map");
    const int d = maps_.front().dim();
    const int m = maps_.front().arity();
    for (const AffineMap& f : maps_)
        if (f.dim() != d || f.arity() != m)
            throw InvalidSystemError("system: maps must share dimension and arity");
    double wmax = neg_inf;
    for (double q : weights_) {
        if (std::isnan(q) || q > 0.0)
            throw InvalidSystemError("system: weights must lie in [-inf, 0]");
        wmax = std::max(wmax, q);
    }
    if (wmax != 0.0)
        throw InvalidSystemError("system: max weight must equal 0 (max-plus normalization)");
    if (declared_alpha_ && !(*declared_alpha_ > 0.0 && std::isfinite(*declared_alpha_)))
        throw InvalidSystemError("system: declared contraction factor must be positive and finite");
    if (m == 1) {
        computed_alpha_ = 0.0;
        for (const AffineMap& f : maps_)
            computed_alpha_ = std::max(computed_alpha_, lipschitz_constant(f));
    }
}

double MaxPlusSystem::contraction_factor() const {
    if (arity() == 1) return declared_alpha_ ? *declared_alpha_ : computed_alpha_;
    if (!declared_alpha_)
        throw InvalidSystemError("system: arity >= 2 needs a declared contraction factor");
    return *declared_alpha_;
}

std::vector<GreyLevelMap> grey_maps(const MaxPlusSystem& sys, const ScaleFunction& theta) {
    std::vector<GreyLevelMap> out;
    out.reserve(sys.map_count());
    for (double q : sys.weights()) out.emplace_back(q, theta);
    return out;
}

bool edelstein_sampled(const AffineMap& m, const Box& box, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int d = m.dim();
    const int arity = m.arity();
    auto draw_tuple = [&] {
        TupleVec t(arity * d);
        for (int i = 0; i < arity; ++i)
            for (int c = 0; c < d; ++c)
                t[i * d + c] = box.lower[c] + unit(rng) * (box.upper[c] - box.lower[c]);
        return t;
    };
    for (int s = 0; s < samples; ++s) {
        TupleVec x = draw_tuple();
        TupleVec y = draw_tuple();
        double max_coord_dist = 0.0;
        for (int i = 0; i < arity; ++i) {
            double dist = (x.segment(i * d, d) - y.segment(i * d, d)).norm();
            max_coord_dist = std::max(max_coord_dist, dist);
        }
        if (max_coord_dist == 0.0) continue;
        const double image_dist = (m.apply_tuple(x) - m.apply_tuple(y)).norm();
        if (!(image_dist < max_coord_dist)) return false;
    }
    return true;
}

}  // namespace mpifs
