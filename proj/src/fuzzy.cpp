#include "mpifs/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

namespace mpifs {
namespace {

bool entry_less(const PointValue& a, const PointValue& b) { return point_less(a.x, b.x); }

void sort_and_merge(std::vector<PointValue>& entries) {
    entries.erase(std::remove_if(entries.begin(), entries.end(),
                                 [](const PointValue& e) { return e.value == 0.0; }),
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

void validate_fuzzy(const std::vector<PointValue>& entries) {
    if (entries.empty()) throw InvalidMeasureError("fuzzy: support is empty");
    const Eigen::Index d = entries.front().x.size();
    bool has_one = false;
    for (const PointValue& e : entries) {
        if (e.x.size() != d) throw InvalidMeasureError("fuzzy: mixed point dimensions");
        if (std::isnan(e.value) || e.value <= 0.0 || e.value > 1.0)
            throw InvalidMeasureError("fuzzy: memberships must lie in (0, 1]");
        if (e.value == 1.0) has_one = true;
    }
    if (!has_one) throw InvalidMeasureError("fuzzy: no point has membership 1 (not normal)");
}

}  // namespace

FuzzyMap::FuzzyMap(std::vector<PointValue> entries) : entries_(std::move(entries)) {
    sort_and_merge(entries_);
    validate_fuzzy(entries_);
}

double FuzzyMap::value_at(const Point& x) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                               [](const PointValue& e, const Point& p) { return point_less(e.x, p); });
    if (it != entries_.end() && point_equal(it->x, x)) return it->value;
    return 0.0;
}

bool operator==(const FuzzyMap& a, const FuzzyMap& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
        if (!point_equal(a.entries_[i].x, b.entries_[i].x)) return false;
        if (a.entries_[i].value != b.entries_[i].value) return false;
    }
    return true;
}

std::ostream& operator<<(std::ostream& os, const FuzzyMap& u) {
    os << "{";
    for (std::size_t i = 0; i < u.entries().size(); ++i) {
        const PointValue& e = u.entries()[i];
        if (i) os << ", ";
        os << "(" << e.x.transpose() << ") -> " << e.value;
    }
    return os << "}";
}

ScaleFunction::ScaleFunction(double base) : base_(base) {
    if (!(base > 1.0) || !std::isfinite(base))
        throw DomainError("scale function: base must be a finite number > 1");
    log_base_ = std::log(base);
}

double ScaleFunction::operator()(double t) const {
    if (std::isnan(t) || t > 0.0) throw DomainError("scale function: argument must lie in [-inf, 0]");
    return std::pow(base_, t);  // pow(base, -inf) = 0, pow(base, 0) = 1
}

double ScaleFunction::inverse(double u) const {
    if (std::isnan(u) || u < 0.0 || u > 1.0)
        throw DomainError("scale function: inverse argument must lie in [0, 1]");
    if (u == 0.0) return neg_inf;
    if (u == 1.0) return 0.0;
    return std::log(u) / log_base_;
}

GreyLevelMap::GreyLevelMap(double weight, ScaleFunction scale) : q(weight), theta(std::move(scale)) {
    if (std::isnan(q) || q > 0.0) throw DomainError("grey map: weight must lie in [-inf, 0]");
}

double GreyLevelMap::operator()(double t) const {
    return theta(q + theta.inverse(t));  // q + (-inf) = -inf, so d(0) = 0
}

FuzzyMap theta_forward(const DensityMap& mu, const ScaleFunction& theta) {
    if (mu.empty()) throw InvalidMeasureError("theta_forward: empty measure");
    std::vector<PointValue> out;
    out.reserve(mu.size());
    for (const PointValue& e : mu.entries()) out.push_back({e.x, theta(e.value)});
    return FuzzyMap(std::move(out));
}

DensityMap theta_backward(const FuzzyMap& u, const ScaleFunction& theta) {
    if (u.empty()) throw InvalidMeasureError("theta_backward: empty fuzzy set");
    std::vector<PointValue> out;
    out.reserve(u.size());
    for (const PointValue& e : u.entries()) out.push_back({e.x, theta.inverse(e.value)});
    return DensityMap(std::move(out));
}

std::vector<Point> alpha_cut(const FuzzyMap& u, double alpha) {
    if (std::isnan(alpha) || alpha <= 0.0 || alpha > 1.0)
        throw DomainError("alpha_cut: alpha must lie in (0, 1]");
    std::vector<Point> cut;
    for (const PointValue& e : u.entries())
        if (e.value >= alpha) cut.push_back(e.x);
    return cut;
}

namespace {

std::vector<PointValue> fuzzy_candidates(const std::vector<PointValue>& in,
                                         std::span<const PointMap> maps,
                                         std::span<const GreyLevelMap> greys, int threads) {
    const std::size_t n = in.size();
    const std::size_t L = maps.size();
    std::vector<PointValue> out(n * L);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < L; ++j) {
                PointValue& slot = out[i * L + j];
                slot.x = maps[j](in[i].x);
                slot.value = greys.empty() ? in[i].value : greys[j](in[i].value);
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

FuzzyMap zadeh_extension(const FuzzyMap& u, const PointMap& phi, int threads) {
    if (u.empty()) throw InvalidMeasureError("zadeh: empty fuzzy set");
    const PointMap* m = &phi;
    return FuzzyMap(fuzzy_candidates(u.entries(), std::span(m, 1), {}, threads));
}

FuzzyMap hutchinson_step(const FuzzyMap& u, std::span<const PointMap> maps,
                         std::span<const GreyLevelMap> greys, int threads) {
    if (u.empty()) throw InvalidMeasureError("hutchinson: empty fuzzy set");
    if (maps.empty() || maps.size() != greys.size())
        throw InvalidSystemError("hutchinson: need one grey map per map");
    bool admissible = false;
    for (const GreyLevelMap& d : greys)
        if (d(1.0) == 1.0) admissible = true;
    if (!admissible)
        throw InvalidSystemError("hutchinson: grey system is inadmissible (no d_j(1) == 1)");
    return FuzzyMap(fuzzy_candidates(u.entries(), maps, greys, threads));
}

}  // namespace mpifs
