#include "cft/util.hpp"

#include <atomic>
#include <cstdio>
#include <cstring>
#include <mutex>

namespace cft {

double inverse_normal_cdf(double p) {
    if (p <= 0.0 || p >= 1.0) throw InvalidArgument("inverse_normal_cdf: p outside (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    if (p > phigh) {
        q = std::sqrt(-2 * std::log(1 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

std::vector<VecR> sphere_points(int d, int count, std::uint64_t seed) {
    Halton seq(d, 10 + seed);
    std::vector<VecR> pts;
    pts.reserve(count);
    while ((int)pts.size() < count) {
        auto u = seq.next();
        VecR g(d);
        bool ok = true;
        for (int i = 0; i < d; ++i) {
            double ui = std::min(std::max(u[i], 1e-12), 1.0 - 1e-12);
            g[i] = inverse_normal_cdf(ui);
            if (!std::isfinite(g[i])) ok = false;
        }
        double nrm = g.norm();
        if (!ok || nrm < 1e-8) continue;
        pts.push_back(g / nrm);
    }
    return pts;
}

std::vector<VecC> complex_ball_points(int n, int count, std::uint64_t seed) {
    int d = 2 * n;
    Halton seq(d + 1, 10 + seed);
    std::vector<VecC> pts;
    pts.reserve(count);
    while ((int)pts.size() < count) {
        auto u = seq.next();
        VecR g(d);
        bool ok = true;
        for (int i = 0; i < d; ++i) {
            double ui = std::min(std::max(u[i], 1e-12), 1.0 - 1e-12);
            g[i] = inverse_normal_cdf(ui);
            if (!std::isfinite(g[i])) ok = false;
        }
        double nrm = g.norm();
        if (!ok || nrm < 1e-8) continue;
        double radius = std::pow(u[d], 1.0 / d);
        VecC v(n);
        for (int i = 0; i < n; ++i) v[i] = Complex(g[2 * i], g[2 * i + 1]) * (radius / nrm);
        pts.push_back(v);
    }
    return pts;
}

std::vector<VecC> complex_sphere_points(int n, int count, std::uint64_t seed) {
    auto real_pts = sphere_points(2 * n, count, seed);
    std::vector<VecC> pts;
    pts.reserve(count);
    for (const auto& g : real_pts) {
        VecC v(n);
        for (int i = 0; i < n; ++i) v[i] = Complex(g[2 * i], g[2 * i + 1]);
        pts.push_back(v);
    }
    return pts;
}

SphereQuad sphere_quadrature(int n, int resolution, std::uint64_t seed) {
    SphereQuad q;
    if (n == 1) {
        int N = std::max(8, 4 * resolution);
        for (int k = 0; k < N; ++k) {
            VecC v(1);
            v << std::polar(1.0, 2 * kPi * (k + 0.5) / N);
            q.dirs.push_back(v);
            q.weights.push_back(2 * kPi / N);
        }
        return q;
    }
    if (n == 2) {
        // z = (cos t e^{i p1}, sin t e^{i p2}), dσ = (1/2) d(sin^2 t) dp1 dp2
        int nu = std::max(4, resolution);
        int na = std::max(8, 2 * resolution);
        std::vector<double> gx, gw;
        gauss_legendre(nu, gx, gw);
        for (int iu = 0; iu < nu; ++iu) {
            double u = 0.5 * (gx[iu] + 1.0);  // sin^2 t in (0,1)
            double wu = 0.5 * gw[iu];
            double ct = std::sqrt(1.0 - u), st = std::sqrt(u);
            for (int a = 0; a < na; ++a)
                for (int b = 0; b < na; ++b) {
                    VecC v(2);
                    v << ct * std::polar(1.0, 2 * kPi * (a + 0.5) / na),
                        st * std::polar(1.0, 2 * kPi * (b + 0.5) / na);
                    q.dirs.push_back(v);
                    q.weights.push_back(0.5 * wu * (2 * kPi / na) * (2 * kPi / na));
                }
        }
        return q;
    }
    int count = std::max(64, resolution * resolution * resolution);
    double fact = 1;
    for (int i = 2; i < n; ++i) fact *= i;
    double area = 2 * std::pow(kPi, n) / fact;
    q.dirs = complex_sphere_points(n, count, seed);
    q.weights.assign(count, area / count);
    return q;
}

double bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                         double target, double reltol, int maxiter) {
    double flo = f(lo) - target;
    double fhi = f(hi) - target;
    if (flo > 0 && fhi > 0) return lo;
    if (flo < 0 && fhi < 0) return hi;
    for (int it = 0; it < maxiter; ++it) {
        double mid = 0.5 * (lo + hi);
        if (hi - lo <= reltol * std::max(1e-300, std::abs(mid))) return mid;
        double fm = f(mid) - target;
        if ((fm <= 0) == (flo <= 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double golden_max(const std::function<double(double)>& f, double a, double b, double tol,
                  int maxiter) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < maxiter && (b - a) > tol; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

namespace {
inline double bump(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }
inline double bump_d(double x) {
    if (x <= 0) return 0.0;
    return std::exp(-1.0 / x) / (x * x);
}
inline double bump_dd(double x) {
    if (x <= 0) return 0.0;
    return std::exp(-1.0 / x) * (1.0 - 2.0 * x) / (x * x * x * x);
}
}  // namespace

double SmoothStep::value(double x) {
    if (x <= 0) return 1.0;
    if (x >= 1) return 0.0;
    double n = bump(1 - x), d = bump(x) + bump(1 - x);
    return n / d;
}

double SmoothStep::deriv(double x) {
    if (x <= 0 || x >= 1) return 0.0;
    double n = bump(1 - x), m = bump(x);
    double dn = -bump_d(1 - x), dm = bump_d(x);
    double d = n + m;
    return (dn * d - n * (dn + dm)) / (d * d);
}

double SmoothStep::deriv2(double x) {
    if (x <= 0 || x >= 1) return 0.0;
    double n = bump(1 - x), m = bump(x);
    double dn = -bump_d(1 - x), dm = bump_d(x);
    double nn = bump_dd(1 - x), mm = bump_dd(x);
    double d = n + m, dd = dn + dm, d2 = nn + mm;
    double f = n / d;
    double f1 = (dn - f * dd) / d;
    return (nn - 2 * f1 * dd - f * d2) / d;
}

double QuinticStep::value(double x) {
    if (x <= 0) return 1.0;
    if (x >= 1) return 0.0;
    double s = x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
    return 1.0 - s;
}

double QuinticStep::deriv(double x) {
    if (x <= 0 || x >= 1) return 0.0;
    return -(30.0 * x * x + x * x * x * (-60.0 + 30.0 * x));
}

double QuinticStep::deriv2(double x) {
    if (x <= 0 || x >= 1) return 0.0;
    return -(60.0 * x - 180.0 * x * x + 120.0 * x * x * x);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw InvalidArgument("regression_slope: need >= 2 matched samples");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(x.size());
    my /= double(x.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx < 1e-300) throw SingularityError("regression_slope: degenerate abscissae");
    return sxy / sxx;
}

namespace {
std::atomic<int> g_workers{0};
}

int default_workers() {
    int w = g_workers.load();
    if (w > 0) return w;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
}

void set_default_workers(int w) { g_workers.store(w); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, int workers) {
    if (workers <= 0) workers = default_workers();
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    auto run = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            body(i);
        }
    };
    int spawn = std::min<std::size_t>(workers, count);
    pool.reserve(spawn);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
}

std::string fnv_hex(const std::vector<double>& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (double v : data) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffu;
            h *= 1099511628211ull;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return std::string(buf);
}

}  // namespace cft
