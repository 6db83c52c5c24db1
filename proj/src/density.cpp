#include "mpifs/density.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

namespace mpifs {
namespace {

bool entry_less(const PointValue& a, const PointValue& b) { return point_less(a.x, b.x); }

// Sort, merge equal points by max, drop -inf. Shared by DensityMap and the
// operator kernels below.
void sort_and_merge(std::vector<PointValue>& entries) {
    entries.erase(std::remove_if(entries.begin(), entries.end(),
                                 [](const PointValue& e) { return e.value == neg_inf; }),
                  entries.end());
    std::sort(entries.begin(), entries.end(), entry_less);
    std::size_t out = 0;
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i + 1;
        double v = entries[i].value;
        while (j < entries.size() && point_equal(entries[i].x, entries[j].x)) {
            v = std::max(v, entries[j].value);
            ++j;
        }
        entries[out].x = entries[i].x;
        entries[out].value = v;
        ++out;
        i = j;
    }
    entries.resize(out);
}

void validate_density(const std::vector<PointValue>& entries) {
    if (entries.empty()) throw InvalidMeasureError("density: support is empty");
    const Eigen::Index d = entries.front().x.size();
    bool has_zero = false;
    for (const PointValue& e : entries) {
        if (e.x.size() != d) throw InvalidMeasureError("density: mixed point dimensions");
        if (std::isnan(e.value) || e.value > 0.0)
            throw InvalidMeasureError("density: values must lie in [-inf, 0]");
        if (e.value == 0.0) has_zero = true;
    }
    if (!has_zero) throw InvalidMeasureError("density: no point has density 0 (not normalized)");
}

// Apply `maps` to every support point, tagging image values with the map's
// weight. Chunks of the support may be processed in parallel; the caller
// sorts, so the fill order never shows in the result.
std::vector<PointValue> image_candidates(const std::vector<PointValue>& in,
                                         std::span<const double> weights,
                                         std::span<const PointMap> maps, int threads) {
    const std::size_t n = in.size();
    const std::size_t L = maps.size();
    std::vector<PointValue> out(n * L);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < L; ++j) {
                PointValue& slot = out[i * L + j];
                slot.x = maps[j](in[i].x);
                slot.value = weights[j] + in[i].value;
            }
        }
    };
    if (threads <= 1 || n < 1024) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (n + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            std::size_t b = std::min(n, t * chunk);
            std::size_t e = std::min(n, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace

DensityMap::DensityMap(std::vector<PointValue> entries) : entries_(std::move(entries)) {
    sort_and_merge(entries_);
    validate_density(entries_);
}

double DensityMap::value_at(const Point& x) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                               [](const PointValue& e, const Point& p) { return point_less(e.x, p); });
    if (it != entries_.end() && point_equal(it->x, x)) return it->value;
    return neg_inf;
}

bool operator==(const DensityMap& a, const DensityMap& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
        if (!point_equal(a.entries_[i].x, b.entries_[i].x)) return false;
        if (a.entries_[i].value != b.entries_[i].value) return false;
    }
    return true;
}

std::ostream& operator<<(std::ostream& os, const DensityMap& mu) {
    os << "{";
    for (std::size_t i = 0; i < mu.entries().size(); ++i) {
        const PointValue& e = mu.entries()[i];
        if (i) os << ", ";
        os << "(" << e.x.transpose() << ") -> " << e.value;
    }
    return os << "}";
}

AffineFunctional::AffineFunctional(Point c, double b) : coeffs(std::move(c)), offset(b) {
    for (Eigen::Index i = 0; i < coeffs.size(); ++i)
        if (!std::isfinite(coeffs[i])) throw DomainError("functional: coefficients must be finite");
    if (!std::isfinite(offset)) throw DomainError("functional: offset must be finite");
}

double AffineFunctional::operator()(const Point& x) const {
    if (x.size() != coeffs.size()) throw DomainError("functional: dimension mismatch");
    return coeffs.dot(x) + offset;
}

double eval_measure(const DensityMap& mu, const AffineFunctional& phi) {
    if (mu.empty()) throw InvalidMeasureError("eval: measure has empty support");
    double best = neg_inf;
    for (const PointValue& e : mu.entries()) best = std::max(best, e.value + phi(e.x));
    return best;
}

DensityMap pushforward(const DensityMap& mu, const PointMap& phi, int threads) {
    if (mu.empty()) throw InvalidMeasureError("pushforward: measure has empty support");
    const double q0 = 0.0;
    const PointMap* m = &phi;
    return DensityMap(image_candidates(mu.entries(), std::span(&q0, 1), std::span(m, 1), threads));
}

DensityMap markov_step(const DensityMap& mu, std::span<const double> weights,
                       std::span<const PointMap> maps, int threads) {
    if (mu.empty()) throw InvalidMeasureError("markov: measure has empty support");
    if (maps.empty() || maps.size() != weights.size())
        throw InvalidSystemError("markov: need one weight per map");
    double wmax = neg_inf;
    for (double q : weights) {
        if (std::isnan(q) || q > 0.0)
            throw InvalidSystemError("markov: weights must lie in [-inf, 0]");
        wmax = std::max(wmax, q);
    }
    if (wmax != 0.0) throw InvalidSystemError("markov: max weight must equal 0");
    return DensityMap(image_candidates(mu.entries(), weights, maps, threads));
}

std::vector<Point> support(const DensityMap& mu) {
    std::vector<Point> pts;
    pts.reserve(mu.size());
    for (const PointValue& e : mu.entries()) pts.push_back(e.x);
    return pts;
}

}  // namespace mpifs
