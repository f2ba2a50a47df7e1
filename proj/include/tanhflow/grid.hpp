#ifndef TANHFLOW_GRID_HPP
#define TANHFLOW_GRID_HPP

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace tanhflow {

using cplx = std::complex<double>;

// Uniform grid y_i = y0 + i*h, i = 0..n-1, with 6-point (quintic) Lagrange
// interpolation and an order-6 composite integration rule.
class Grid {
  public:
    Grid() = default;
    Grid(double y0, double h, int n) : y0_(y0), h_(h), n_(n) {
        if (n < 8 || h <= 0.0) throw std::invalid_argument("Grid: need n >= 8, h > 0");
    }

    static Grid symmetric(double half_width, double h) {
        int m = static_cast<int>(std::ceil(half_width / h - 1e-12));
        return Grid(-m * h, h, 2 * m + 1);
    }
    static Grid around(double center, double half_width, double h) {
        int m = static_cast<int>(std::ceil(half_width / h - 1e-12));
        return Grid(center - m * h, h, 2 * m + 1);
    }

    double y0() const { return y0_; }
    double h() const { return h_; }
    int size() const { return n_; }
    double y(int i) const { return y0_ + i * h_; }
    double ymin() const { return y0_; }
    double ymax() const { return y(n_ - 1); }
    bool inside(double x) const { return x >= ymin() - 1e-12 * h_ && x <= ymax() + 1e-12 * h_; }

    // Cell index such that y(i) <= x < y(i+1), clamped to [0, n-2].
    int cell(double x) const {
        int i = static_cast<int>(std::floor((x - y0_) / h_));
        if (i < 0) i = 0;
        if (i > n_ - 2) i = n_ - 2;
        return i;
    }

    // 6-point Lagrange stencil for evaluation at x: base index and weights.
    struct Stencil {
        int base;
        std::array<double, 6> w;
    };
    Stencil stencil(double x) const {
        double s = (x - y0_) / h_;
        int i0 = static_cast<int>(std::floor(s)) - 2;
        if (i0 < 0) i0 = 0;
        if (i0 > n_ - 6) i0 = n_ - 6;
        double t = s - i0;
        Stencil st;
        st.base = i0;
        for (int k = 0; k < 6; ++k) {
            double w = 1.0;
            for (int j = 0; j < 6; ++j)
                if (j != k) w *= (t - j) / double(k - j);
            st.w[k] = w;
        }
        return st;
    }

    template <class T>
    T interp(const std::vector<T>& f, double x) const {
        Stencil st = stencil(x);
        T acc = T(0);
        for (int k = 0; k < 6; ++k) acc += st.w[k] * f[st.base + k];
        return acc;
    }
    template <class T>
    static T apply(const Stencil& st, const std::vector<T>& f) {
        T acc = T(0);
        for (int k = 0; k < 6; ++k) acc += st.w[k] * f[st.base + k];
        return acc;
    }

    // Integral of f over one cell [y_i, y_{i+1}] from the quintic through the
    // six surrounding nodes; order 6 globally when accumulated.
    template <class T>
    T cell_integral(const std::vector<T>& f, int i) const {
        int s = i - 2;
        if (s < 0) s = 0;
        if (s > n_ - 6) s = n_ - 6;
        const std::array<double, 6>& w = cell_weights(i - s);
        T acc = T(0);
        for (int k = 0; k < 6; ++k) acc += w[k] * f[s + k];
        return acc * h_;
    }

    template <class T>
    T integrate(const std::vector<T>& f) const {
        T acc = T(0);
        for (int i = 0; i + 1 < n_; ++i) acc += cell_integral(f, i);
        return acc;
    }

    // Cumulative integral from the left grid end, order 6.
    template <class T>
    std::vector<T> cumulative(const std::vector<T>& f) const {
        std::vector<T> out(n_);
        out[0] = T(0);
        for (int i = 0; i + 1 < n_; ++i) out[i + 1] = out[i] + cell_integral(f, i);
        return out;
    }

  private:
    // Weights for integrating the degree-5 interpolant (nodes 0..5 in units
    // of h) over the cell [o, o+1], o = 0..4. Solved once from the moment
    // conditions sum_k w_k k^p = ((o+1)^{p+1} - o^{p+1})/(p+1).
    static const std::array<double, 6>& cell_weights(int o) {
        static const std::array<std::array<double, 6>, 5> table = [] {
            std::array<std::array<double, 6>, 5> tab{};
            for (int o = 0; o < 5; ++o) {
                double M[6][7];
                for (int p = 0; p < 6; ++p) {
                    for (int k = 0; k < 6; ++k) M[p][k] = std::pow(double(k), p);
                    M[p][6] = (std::pow(o + 1.0, p + 1) - std::pow(double(o), p + 1)) / (p + 1);
                }
                for (int col = 0; col < 6; ++col) {  // Gaussian elimination
                    int piv = col;
                    for (int r = col + 1; r < 6; ++r)
                        if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
                    for (int j = 0; j < 7; ++j) std::swap(M[col][j], M[piv][j]);
                    for (int r = 0; r < 6; ++r) {
                        if (r == col) continue;
                        double fct = M[r][col] / M[col][col];
                        for (int j = col; j < 7; ++j) M[r][j] -= fct * M[col][j];
                    }
                }
                for (int k = 0; k < 6; ++k) tab[o][k] = M[k][6] / M[k][k];
            }
            return tab;
        }();
        return table[o];
    }

    double y0_ = 0.0, h_ = 1.0;
    int n_ = 0;
};

}  // namespace tanhflow

#endif
