#include "tanhflow/rayleigh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tanhflow/quadrature.hpp"

namespace tanhflow {

namespace {

// Ratio D(w)/D(z) for w, z on the same side of y_c.  For real c the sinh
// form keeps full relative accuracy when both factors vanish at y_c.
inline cplx d_ratio(const UMinusC& D, double y_c, double w, double z) {
    if (D.im == 0.0) {
        double num = std::sinh(w - y_c) * std::cosh(z);
        double den = std::sinh(z - y_c) * std::cosh(w);
        return cplx(num / den, 0.0);
    }
    return D(w) / D(z);
}

struct SolveWorkspace {
    // Quadrature points covering one cell (or partial cell).  Cells next to
    // y_c are subdivided toward y_c when Im c != 0, so the eps-scale feature
    // of 1/(u-c)^2 is resolved.
    struct CellQuad {
        std::vector<double> x;
        std::vector<double> w;
        std::vector<Grid::Stencil> st;
        std::vector<cplx> D2;
        std::vector<cplx> invD2;
        bool direct_inner = false;  // outer sweep re-integrates inner from y_c
        // per-abscissa 8-point rule on [y_c, x_k], used when direct_inner
        std::vector<std::vector<double>> dw;
        std::vector<std::vector<Grid::Stencil>> dst;
        std::vector<std::vector<cplx>> dD2;
    };

    const Grid& grid;
    const SpectralPoint& pt;
    UMinusC D;
    int jc;
    std::vector<CellQuad> cells;            // per cell [i, i+1]
    CellQuad left_part, right_part;         // [y_jc, y_c], [y_c, y_{jc+1}]
    std::vector<cplx> node_invD2;

    SolveWorkspace(const Grid& g, const SpectralPoint& p) : grid(g), pt(p), D(p) {
        const int n = g.size();
        const double y_c = p.y_c;
        const double h = g.h();
        jc = g.cell(y_c);
        const double eps = std::abs(p.c.imag());
        const double min_w = (eps > 0.0) ? std::max(eps / 4.0, h / 512.0) : h;
        const int near_lo = std::max(0, jc - 2);
        const int near_hi = std::min(n - 2, jc + 2);

        cells.resize(n - 1);
        for (int i = 0; i + 1 < n; ++i) {
            const double a = g.y(i), b = g.y(i + 1);
            const bool near = (i >= near_lo && i <= near_hi);
            if (near && eps > 0.0 && min_w < h) {
                fill_refined(cells[i], a, b, y_c, min_w);
            } else {
                fill_plain(cells[i], a, b, gauss_rule(near ? 8 : 4));
            }
            cells[i].direct_inner = near;
            if (cells[i].direct_inner) add_direct(cells[i], y_c);
        }
        build_partial(left_part, g.y(jc), y_c, y_c, min_w, eps, h);
        build_partial(right_part, y_c, g.y(jc + 1), y_c, min_w, eps, h);

        node_invD2.resize(n);
        for (int i = 0; i < n; ++i) {
            cplx d2 = D.sq(g.y(i));
            node_invD2[i] = (d2 == cplx(0.0)) ? cplx(0.0) : 1.0 / d2;
        }
    }

    void push_point(CellQuad& q, double x, double w) {
        q.x.push_back(x);
        q.w.push_back(w);
        q.st.push_back(grid.stencil(x));
        cplx d2 = D.sq(x);
        q.D2.push_back(d2);
        q.invD2.push_back(d2 == cplx(0.0) ? cplx(0.0) : 1.0 / d2);
    }

    void fill_plain(CellQuad& q, double a, double b, const GaussRule& r) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (size_t k = 0; k < r.x.size(); ++k)
            push_point(q, mid + half * r.x[k], half * r.w[k]);
    }

    // Panels over [a,b] whose widths shrink dyadically toward `center`.
    void fill_refined(CellQuad& q, double a, double b, double center, double min_w) {
        std::vector<double> edges;
        edges.push_back(a);
        if (center > a && center < b) {
            for (double w = (b - a); w > min_w; w *= 0.5) {
                if (center - w > a) edges.push_back(center - w);
            }
            edges.push_back(center);
            for (double w = min_w; w < (b - a); w *= 2.0) {
                if (center + w < b) edges.push_back(center + w);
            }
        } else if (center <= a) {
            for (double w = (b - a); w > min_w; w *= 0.5)
                if (a + w < b) edges.push_back(a + w);
        } else {
            for (double w = (b - a); w > min_w; w *= 0.5)
                if (b - w > a) edges.push_back(b - w);
        }
        edges.push_back(b);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        const GaussRule& r = gauss_rule(8);
        for (size_t e = 0; e + 1 < edges.size(); ++e) {
            const double mid = 0.5 * (edges[e] + edges[e + 1]);
            const double half = 0.5 * (edges[e + 1] - edges[e]);
            if (half <= 0.0) continue;
            for (size_t k = 0; k < r.x.size(); ++k)
                push_point(q, mid + half * r.x[k], half * r.w[k]);
        }
    }

    void build_partial(CellQuad& q, double a, double b, double y_c, double min_w,
                       double eps, double h) {
        if (b - a <= 0.0) { q.direct_inner = true; return; }
        if (eps > 0.0 && min_w < (b - a)) {
            fill_refined(q, a, b, y_c, min_w);
        } else {
            fill_plain(q, a, b, gauss_rule(8));
        }
        q.direct_inner = true;
        add_direct(q, y_c);
    }

    // For each abscissa x_k build an 8-point rule on [y_c, x_k]; the inner
    // integrand f * (u-c)^2 is smooth, so no refinement is needed here.
    void add_direct(CellQuad& q, double y_c) {
        const GaussRule& r = gauss_rule(8);
        q.dw.resize(q.x.size());
        q.dst.resize(q.x.size());
        q.dD2.resize(q.x.size());
        for (size_t k = 0; k < q.x.size(); ++k) {
            const double mid = 0.5 * (y_c + q.x[k]);
            const double half = 0.5 * (q.x[k] - y_c);
            for (size_t j = 0; j < r.x.size(); ++j) {
                const double x = mid + half * r.x[j];
                q.dw[k].push_back(half * r.w[j]);
                q.dst[k].push_back(grid.stencil(x));
                q.dD2[k].push_back(D.sq(x));
            }
        }
    }

    cplx inner_cell(const CellQuad& q, const std::vector<cplx>& f) const {
        cplx acc(0.0);
        for (size_t k = 0; k < q.x.size(); ++k)
            acc += q.w[k] * Grid::apply(q.st[k], f) * q.D2[k];
        return acc;
    }

    cplx direct_from_yc(const CellQuad& q, size_t k, const std::vector<cplx>& f) const {
        cplx acc(0.0);
        for (size_t j = 0; j < q.dw[k].size(); ++j)
            acc += q.dw[k][j] * Grid::apply(q.dst[k][j], f) * q.dD2[k][j];
        return acc;
    }

    cplx outer_cell(const CellQuad& q, const std::vector<cplx>& f,
                    const std::vector<cplx>& I) const {
        cplx acc(0.0);
        if (q.direct_inner) {
            for (size_t k = 0; k < q.x.size(); ++k)
                acc += q.w[k] * direct_from_yc(q, k, f) * q.invD2[k];
        } else {
            for (size_t k = 0; k < q.x.size(); ++k)
                acc += q.w[k] * Grid::apply(q.st[k], I) * q.invD2[k];
        }
        return acc;
    }

    // inner(y_i) = int_{y_c}^{y_i} f (u-c)^2 dw at all nodes
    void inner_sweep(const std::vector<cplx>& f, std::vector<cplx>& I) const {
        const int n = grid.size();
        I.assign(n, cplx(0.0));
        I[jc] = -inner_cell(left_part, f);
        I[jc + 1] = inner_cell(right_part, f);
        for (int i = jc + 1; i + 1 < n; ++i) I[i + 1] = I[i] + inner_cell(cells[i], f);
        for (int i = jc; i > 0; --i) I[i - 1] = I[i] - inner_cell(cells[i - 1], f);
    }

    // outer(y_i) = int_{y_c}^{y_i} inner(z)/(u(z)-c)^2 dz at all nodes
    void outer_sweep(const std::vector<cplx>& f, const std::vector<cplx>& I,
                     std::vector<cplx>& T) const {
        const int n = grid.size();
        T.assign(n, cplx(0.0));
        T[jc] = -outer_cell(left_part, f, I);
        T[jc + 1] = outer_cell(right_part, f, I);
        for (int i = jc + 1; i + 1 < n; ++i) T[i + 1] = T[i] + outer_cell(cells[i], f, I);
        for (int i = jc; i > 0; --i) T[i - 1] = T[i] - outer_cell(cells[i - 1], f, I);
    }
};

}  // namespace

Grid default_grid(const SpectralPoint& point, double alpha_h) {
    const double L = std::max(25.0 / point.alpha, 20.0);
    const double h = alpha_h / point.alpha;
    return Grid::around(point.y_c, L, h);
}

std::vector<cplx> apply_T(const std::vector<cplx>& f, const SpectralPoint& point,
                          const Grid& grid, int base_order) {
    if (static_cast<int>(f.size()) != grid.size())
        throw std::invalid_argument("apply_T: f size does not match grid");
    for (const cplx& v : f)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("apply_T: non-finite input sample");
    if (!grid.inside(point.y_c))
        throw std::invalid_argument("apply_T: grid does not cover y_c");

    const double y_c = point.y_c;
    const UMinusC D(point);
    const int n = grid.size();
    std::vector<cplx> out(n, cplx(0.0));
    for (int i = 0; i < n; ++i) {
        const double dy = grid.y(i) - y_c;
        if (std::abs(dy) < 1e-14) continue;  // T f(y_c) = 0
        const int order = std::min(
            64, std::max(base_order, 12 + int(0.6 * point.alpha * std::abs(dy))));
        const GaussRule& r = gauss_rule(order);
        cplx acc(0.0);
        for (int a = 0; a < order; ++a) {
            const double s = 0.5 * (1.0 + r.x[a]);
            const double ws = 0.5 * r.w[a];
            const double z = y_c + s * dy;
            cplx acc_t(0.0);
            for (int b = 0; b < order; ++b) {
                const double t = 0.5 * (1.0 + r.x[b]);
                const double wt = 0.5 * r.w[b];
                const double w = y_c + t * s * dy;
                cplx ratio = d_ratio(D, y_c, w, z);
                acc_t += wt * ratio * ratio * grid.interp(f, w);
            }
            acc += ws * s * acc_t;
        }
        out[i] = dy * dy * acc;
    }
    return out;
}

Phi1Field solve_phi1(const SpectralPoint& point, const Grid& grid, double tol,
                     int max_iter) {
    if (tol <= 0) throw std::invalid_argument("solve_phi1: tol must be positive");
    const double span_needed = 25.0 / point.alpha;
    if (point.y_c - grid.ymin() < span_needed - 1e-9 ||
        grid.ymax() - point.y_c < span_needed - 1e-9)
        throw std::invalid_argument(
            "solve_phi1: grid must span [y_c - 25/alpha, y_c + 25/alpha]");
    // e^{alpha |y - y_c|} must stay representable over the whole grid.
    const double reach = point.alpha *
        std::max(grid.ymax() - point.y_c, point.y_c - grid.ymin());
    if (reach > 600.0)
        throw std::invalid_argument("solve_phi1: alpha*span too large, phi1 would overflow");

    SolveWorkspace ws(grid, point);
    const int n = grid.size();
    const double a2 = double(point.alpha) * point.alpha;

    Phi1Field fld;
    fld.point = point;
    fld.grid = grid;
    fld.phi1.assign(n, cplx(1.0));
    std::vector<cplx> I, T;
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
        ws.inner_sweep(fld.phi1, I);
        ws.outer_sweep(fld.phi1, I, T);
        double upd = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx nv = 1.0 + a2 * T[i];
            double rel = std::abs(nv - fld.phi1[i]) / std::max(1.0, std::abs(nv));
            upd = std::max(upd, rel);
            fld.phi1[i] = nv;
        }
        fld.update_history.push_back(upd);
        fld.iterations = it + 1;
        fld.residual = upd;
        if (upd < tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw std::runtime_error(
            "solve_phi1: Picard iteration did not reach tol within max_iter "
            "(grid too coarse or point outside O~)");

    // Final cumulative fields and d_y phi1 = alpha^2 inner / (u-c)^2.  The
    // stored phi1 is re-set to 1 + alpha^2 tphi so the field arrays satisfy
    // the integral equation exactly as stored (one extra half-update).
    ws.inner_sweep(fld.phi1, I);
    ws.outer_sweep(fld.phi1, I, T);
    fld.inner = I;
    fld.tphi = T;
    for (int i = 0; i < n; ++i) fld.phi1[i] = 1.0 + a2 * T[i];
    fld.dphi1.assign(n, cplx(0.0));
    for (int i = 0; i < n; ++i) {
        if (std::abs(grid.y(i) - point.y_c) < 1e-12 && point.real_c()) {
            fld.dphi1[i] = 0.0;  // T_{2,2} phi1 (y_c) = 0
        } else {
            fld.dphi1[i] = a2 * I[i] * ws.node_invD2[i];
        }
    }
    return fld;
}

Phi1Eval::Phi1Eval(const Phi1Field& field)
    : f_(field),
      D_(field.point),
      a2_(double(field.point.alpha) * field.point.alpha) {
    const double h = field.grid.h();
    const double eps = std::abs(field.point.c.imag());
    // Reconstruction only pays off when phi1 carries sub-grid Im(c)-scale
    // structure; at real c (and eps above the grid scale) interpolation of
    // the smooth phi1 is both cheaper and free of the 1/D^2 noise
    // amplification near y_c.
    band_ = (eps > 0.0 && eps < 2.0 * h) ? 4.0 * h + 12.0 * eps : 0.0;
    min_w_ = std::max(eps / 8.0, h / 4096.0);
}

cplx Phi1Eval::operator()(double y) const {
    if (std::abs(y - f_.point.y_c) > band_) return f_.grid.interp(f_.phi1, y);
    return 1.0 + a2_ * tphi_at(y);
}

cplx Phi1Eval::tphi_at(double y) const {
    const Grid& g = f_.grid;
    const double y_c = f_.point.y_c;
    if (std::abs(y - y_c) > band_) return g.interp(f_.tphi, y);
    const int j = g.cell(y);
    const double yj = g.y(j);
    auto integrand = [&](double w) { return g.interp(f_.inner, w) / D_.sq(w); };
    cplx inc(0.0);
    if (std::abs(y - yj) > 1e-14) {
        // panels refined toward y_c when it lies in or near [yj, y]
        std::vector<double> edges;
        edges.push_back(yj);
        if (y_c > yj && y_c < y) {
            for (double w = y - yj; w > min_w_; w *= 0.5)
                if (y_c - w > yj) edges.push_back(y_c - w);
            edges.push_back(y_c);
            for (double w = min_w_; w < y - yj; w *= 2.0)
                if (y_c + w < y) edges.push_back(y_c + w);
        } else if (std::abs(yj - y_c) < std::abs(y - y_c)) {
            for (double w = y - yj; w > min_w_; w *= 0.5)
                if (yj + w < y) edges.push_back(yj + w);
        } else {
            for (double w = y - yj; w > min_w_; w *= 0.5)
                if (y - w > yj) edges.push_back(y - w);
        }
        edges.push_back(y);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        inc = integrate_panels(integrand, edges, 8);
    }
    return f_.tphi[j] + inc;
}

std::pair<cplx, cplx> phi_hom(const Phi1Field& field, double y) {
    if (!field.grid.inside(y))
        throw std::invalid_argument("phi_hom: y outside the field grid");
    const UMinusC D(field.point);
    const FlowSample fs = eval_flow(y);
    cplx p1 = field.phi1_at(y);
    cplx dp1 = field.dphi1_at(y);
    cplx d = D(y);
    return {d * p1, fs.du * p1 + d * dp1};
}

double ode_residual(const Phi1Field& field, double band) {
    const Grid& g = field.grid;
    const int n = g.size();
    const UMinusC D(field.point);
    const double a2 = double(field.point.alpha) * field.point.alpha;
    double worst = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        const double y = g.y(i);
        if (std::abs(y - field.point.y_c) < band) continue;
        cplx d2 = (field.phi1[i + 1] - 2.0 * field.phi1[i] + field.phi1[i - 1]) /
                  (g.h() * g.h());
        cplx coeff = 2.0 * eval_flow(y).du / D(y);
        cplx r = d2 - a2 * field.phi1[i] + coeff * field.dphi1[i];
        // measured against the local solution size; phi1 grows like
        // e^{alpha|y-y_c|}, so the absolute defect is not meaningful far out
        worst = std::max(worst, std::abs(r) / std::max(1.0, std::abs(field.phi1[i])));
    }
    return worst;
}

}  // namespace tanhflow
