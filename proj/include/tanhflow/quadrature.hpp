#ifndef TANHFLOW_QUADRATURE_HPP
#define TANHFLOW_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace tanhflow {

// Gauss-Legendre nodes/weights on [-1,1]; cached per order.
struct GaussRule {
    std::vector<double> x, w;
};

inline const GaussRule& gauss_rule(int n) {
    // node references stay valid across inserts, so a lock around the map
    // operations is all the thread safety this cache needs
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lk(mtx);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration from the Chebyshev-based initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p1 = 0, dp = 0;
        for (int it2 = 0; it2 < 100; ++it2) {
            p1 = 1.0;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * x * p2 - j * p3) / (j + 1.0);
            }
            dp = n * (x * p1 - p2) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    std::lock_guard<std::mutex> lk(mtx);
    return cache.emplace(n, std::move(r)).first->second;
}

template <class F>
auto integrate_gl(F&& f, double a, double b, int n) -> decltype(f(0.0)) {
    const GaussRule& r = gauss_rule(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    decltype(f(0.0)) acc{};
    for (int i = 0; i < n; ++i) acc += r.w[i] * f(mid + half * r.x[i]);
    return acc * half;
}

template <class F>
auto integrate_panels(F&& f, const std::vector<double>& edges, int n)
    -> decltype(f(0.0)) {
    decltype(f(0.0)) acc{};
    for (size_t i = 0; i + 1 < edges.size(); ++i)
        acc += integrate_gl(f, edges[i], edges[i + 1], n);
    return acc;
}

// Panel edges over [lo, hi] refined dyadically toward `center`: widths shrink
// geometrically from w0 down to min_w on each side, uniform panels outside.
inline std::vector<double> refined_edges(double lo, double hi, double center,
                                         double w0, double min_w,
                                         double outer_w) {
    std::vector<double> e;
    auto push = [&](double x) {
        if (x > lo + 1e-14 && x < hi - 1e-14) e.push_back(x);
    };
    e.push_back(lo);
    // ladder of breakpoints center +- w0*2^-k down to min_w
    std::vector<double> ladder;
    for (double w = w0; w > min_w; w *= 0.5) ladder.push_back(w);
    ladder.push_back(std::max(min_w, 1e-300));
    if (center - w0 > lo) {
        for (double x = lo + outer_w; x < center - w0; x += outer_w) push(x);
    }
    for (double w : ladder) push(center - w);
    push(center);
    for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) push(center + *it);
    if (center + w0 < hi) {
        double start = std::max(center + w0, lo);
        for (double x = start; x < hi; x += outer_w) push(x);
    }
    e.push_back(hi);
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-14; }),
            e.end());
    return e;
}

// Neville extrapolation of f(eps) to eps -> 0 through the sample points.
template <class T>
T richardson_limit(std::vector<double> eps, std::vector<T> val) {
    if (eps.size() != val.size() || eps.empty())
        throw std::invalid_argument("richardson_limit: bad inputs");
    const int n = static_cast<int>(eps.size());
    for (int level = 1; level < n; ++level)
        for (int i = 0; i + level < n; ++i)
            val[i] = (eps[i] * val[i + 1] - eps[i + level] * val[i]) /
                     (eps[i] - eps[i + level]);
    return val[0];
}

}  // namespace tanhflow

#endif
