#include "cft/currents.hpp"

namespace cft {

FormField FormField::form11(int n, Coeff11 theta, Support support) {
    FormField f;
    f.n_ = n;
    f.p_ = 1;
    f.q_ = 1;
    f.theta_ = std::move(theta);
    f.support_ = std::move(support);
    return f;
}

FormField FormField::form10(int n, Coeff1 a, Support support) {
    FormField f;
    f.n_ = n;
    f.p_ = 1;
    f.q_ = 0;
    f.a10_ = std::move(a);
    f.support_ = std::move(support);
    return f;
}

FormField FormField::form01(int n, Coeff1 b, Support support) {
    FormField f;
    f.n_ = n;
    f.p_ = 0;
    f.q_ = 1;
    f.b01_ = std::move(b);
    f.support_ = std::move(support);
    return f;
}

FormField FormField::real_one_form(int n, Coeff1 a, Support support) {
    FormField f;
    f.n_ = n;
    f.p_ = 1;
    f.q_ = 0;
    f.one_form_ = true;
    f.a10_ = std::move(a);
    f.b01_ = [a = f.a10_](const VecC& z) { return VecC(a(z).conjugate()); };
    f.support_ = std::move(support);
    return f;
}

MatC FormField::coeff11(const VecC& z) const {
    if (!theta_) throw InvalidArgument("form: no (1,1) coefficients");
    if (!in_support(z)) return MatC::Zero(n_, n_);
    return theta_(z);
}

VecC FormField::coeff10(const VecC& z) const {
    if (!a10_) throw InvalidArgument("form: no (1,0) coefficients");
    if (!in_support(z)) return VecC::Zero(n_);
    return a10_(z);
}

VecC FormField::coeff01(const VecC& z) const {
    if (!b01_) throw InvalidArgument("form: no (0,1) coefficients");
    if (!in_support(z)) return VecC::Zero(n_);
    return b01_(z);
}

Complex FormField::pair11(const VecC& z, const VecC& u, const VecC& v) const {
    MatC t = coeff11(z);
    return (u.transpose() * t * v.conjugate())(0);
}

Complex FormField::action2(const VecC& z, const VecC& X, const VecC& Y) const {
    if (p_ + q_ != 2 || one_form_) throw InvalidArgument("form: action2 needs a 2-form");
    MatC t = coeff11(z);
    Complex qxy = (X.transpose() * t * Y.conjugate())(0);
    Complex qyx = (Y.transpose() * t * X.conjugate())(0);
    return Complex(0, 1) * (qxy - qyx);
}

Complex FormField::action1(const VecC& z, const VecC& X) const {
    Complex acc(0, 0);
    if (a10_) acc += (coeff10(z).transpose() * X)(0);
    if (b01_) acc += (coeff01(z).transpose() * X.conjugate())(0);
    return acc;
}

FormField FormField::scaled(Complex factor) const {
    FormField f = *this;
    if (theta_) {
        auto base = theta_;
        f.theta_ = [base, factor](const VecC& z) { return MatC(factor * base(z)); };
    }
    if (a10_) {
        auto base = a10_;
        f.a10_ = [base, factor](const VecC& z) { return VecC(factor * base(z)); };
    }
    if (b01_) {
        auto base = b01_;
        f.b01_ = [base, factor](const VecC& z) { return VecC(factor * base(z)); };
    }
    return f;
}

FormField lelong_smoothed(const DivisorModel& div) {
    if (div.f.is_zero()) throw InvalidArgument("lelong: zero polynomial");
    if (div.smoothing <= 0) throw InvalidArgument("lelong: smoothing must be positive");
    int n = div.f.nvars();
    Polynomial f = div.f;
    double s2 = div.smoothing * div.smoothing;
    double w = div.weight;
    return FormField::form11(n, [f, s2, w, n](const VecC& z) {
        Complex fv = f.eval(z);
        VecC g = f.gradient(z);
        double denom = std::norm(fv) + s2;
        MatC theta(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) theta(j, k) = w * s2 * g[j] * std::conj(g[k]) / (denom * denom);
        return theta;
    });
}

FormField lelong_smoothed_localized(const DivisorModel& div, const Domain& domain, double eps0) {
    if (div.f.is_zero()) throw InvalidArgument("lelong: zero polynomial");
    int n = div.f.nvars();
    Polynomial f = div.f;
    double s2 = div.smoothing * div.smoothing;
    double w = div.weight;
    Domain dom = domain;
    double half = eps0 / 2;
    auto support = [dom, eps0](const VecC& z) { return dom.dist(z) < eps0 * (1 + 1e-9); };
    return FormField::form11(
        n,
        [f, s2, w, n, dom, half](const VecC& z) {
            double d = dom.dist(z);
            double x = (d - half) / half;
            double chi = SmoothStep::value(x);
            double chi_d = SmoothStep::deriv(x) / half;
            double chi_dd = SmoothStep::deriv2(x) / (half * half);

            Complex fv = f.eval(z);
            VecC g = f.gradient(z);
            double denom = std::norm(fv) + s2;
            double upot = std::log(denom);
            VecC du(n);  // holomorphic partials of log(|f|^2 + s^2)
            for (int j = 0; j < n; ++j) du[j] = std::conj(fv) * g[j] / denom;

            VecC dr = dom.grad(z);
            MatC Hm = dom.hess_mixed(z);
            // d = -r inside, so d_j d = -d_j r and dd-bar d = -H_mixed.
            MatC theta(n, n);
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    Complex t = chi * s2 * g[j] * std::conj(g[k]) / (denom * denom);
                    Complex chi_j = -chi_d * dr[j];
                    Complex chi_k_bar = -chi_d * std::conj(dr[k]);
                    t += chi_j * std::conj(du[k]) + chi_k_bar * du[j];
                    Complex chi_jk = chi_dd * dr[j] * std::conj(dr[k]) - chi_d * Hm(j, k);
                    t += upot * chi_jk;
                    theta(j, k) = w * t;
                }
            return theta;
        },
        support);
}

namespace {

// Graph-area factor 1 + sum |d alpha / d w_j|^2 for the branched cover of the
// zero set over the chart that omits the pivot variable.
double blaschke_chart_integral(const DivisorModel& div, const Domain& domain, int pivot,
                               const BlaschkeOptions& opts) {
    int n = div.f.nvars();
    Polynomial fz = div.f.derivative(pivot);
    std::vector<int> others;
    for (int i = 0; i < n; ++i)
        if (i != pivot) others.push_back(i);

    std::vector<double> rn, rw;
    gauss_legendre(opts.radial, rn, rw);
    double acc = 0;
    // Product polar grid over the remaining variables (n = 2 or 3).
    int n_other = (int)others.size();
    std::vector<int> ang_idx(n_other, 0), rad_idx(n_other, 0);
    auto cell_value = [&](const std::vector<int>& ri, const std::vector<int>& ai) {
        VecC z = VecC::Zero(n);
        double cellw = 1;
        for (int m = 0; m < n_other; ++m) {
            double rho = 0.5 * (rn[ri[m]] + 1.0);  // (0,1)
            double ang = 2 * kPi * (ai[m] + 0.5) / opts.angular;
            z[others[m]] = std::polar(rho, ang);
            cellw *= rho * (0.5 * rw[ri[m]]) * (2 * kPi / opts.angular);
        }
        auto coeffs = div.f.restrict_to(pivot, z);
        double local = 0;
        for (Complex root : polynomial_roots(coeffs)) {
            z[pivot] = root;
            double rv = domain.r(z);
            if (rv >= 0) continue;
            VecC grad = div.f.gradient(z);
            Complex fp = grad[pivot];
            double slope2 = 0;
            if (std::abs(fp) > opts.variety_tol) {
                for (int m = 0; m < n_other; ++m) slope2 += std::norm(grad[others[m]] / fp);
            }
            local += std::abs(rv) * (1.0 + slope2);
        }
        return local * cellw;
    };
    // Iterate the product grid.
    std::vector<int> ri(n_other, 0), ai(n_other, 0);
    std::function<void(int)> recurse = [&](int level) {
        if (level == n_other) {
            acc += cell_value(ri, ai);
            return;
        }
        for (ri[level] = 0; ri[level] < opts.radial; ++ri[level])
            for (ai[level] = 0; ai[level] < opts.angular; ++ai[level]) recurse(level + 1);
    };
    recurse(0);
    return acc * div.weight;
}

}  // namespace

double blaschke_integral(const DivisorModel& div, const Domain& domain,
                         const BlaschkeOptions& opts) {
    int n = div.f.nvars();
    int pivot = -1;
    for (int i = 0; i < n; ++i)
        if (div.f.degree_in(i) > 0) {
            pivot = i;
            break;
        }
    if (pivot < 0) return 0.0;  // constant polynomial: empty divisor inside D
    return blaschke_chart_integral(div, domain, pivot, opts);
}

namespace {

std::vector<VecC> boundary_probes(const Domain& domain, int count, std::uint64_t seed) {
    int n = domain.dimension();
    auto sph = sphere_points(2 * n, count, seed);
    std::vector<VecC> pts;
    pts.reserve(count);
    for (const auto& g : sph) {
        VecC z(n);
        for (int i = 0; i < n; ++i) z[i] = Complex(g[2 * i], g[2 * i + 1]);
        pts.push_back(z / domain.gauge(z));
    }
    return pts;
}

}  // namespace

CarlesonReport carleson_norm_measure(const DiscreteMeasure& mu, const Domain& domain,
                                     const CarlesonBudget& budget) {
    if (mu.points.size() != mu.weights.size())
        throw InvalidArgument("carleson: measure arity mismatch");
    CarlesonReport rep;
    rep.atoms = (int)mu.points.size();
    rep.surrogate_area = true;

    std::vector<VecC> centers = boundary_probes(domain, budget.boundary_points, budget.seed);
    // Atom-seeded probes: gauge-ray projections of the heaviest atoms.
    std::vector<int> order(mu.points.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return mu.weights[a] > mu.weights[b]; });
    for (int i = 0; i < std::min<int>(budget.seeded_atoms, (int)order.size()); ++i) {
        const VecC& a = mu.points[order[i]];
        double p = domain.gauge(a);
        if (p > 1e-9) centers.push_back(a / p);
    }

    std::vector<double> hash_data;
    std::vector<double> results(centers.size(), 0.0);
    std::vector<double> arg_eps(centers.size(), 0.0);
    parallel_for(centers.size(), [&](std::size_t ci) {
        const VecC& z0 = centers[ci];
        double best = 0, best_eps = 0;
        for (int k = 1; k <= budget.eps_levels; ++k) {
            double eps = std::ldexp(1.0, -k);
            ExtremalFrame f = extremal_basis(domain, z0, eps);
            Polydisc disc(f);
            double mass = 0;
            for (size_t i = 0; i < mu.points.size(); ++i)
                if (domain.r(mu.points[i]) < 0 && disc.contains(mu.points[i]))
                    mass += mu.weights[i];
            double area = 1;
            for (int j = 1; j < f.radii.size(); ++j) area *= f.radii[j] * f.radii[j];
            double ratio = mass / area;
            if (ratio > best) {
                best = ratio;
                best_eps = eps;
            }
        }
        results[ci] = best;
        arg_eps[ci] = best_eps;
    });
    rep.arg_z0 = VecC::Zero(domain.dimension());
    for (size_t ci = 0; ci < centers.size(); ++ci) {
        hash_data.push_back(results[ci]);
        if (results[ci] > rep.norm) {
            rep.norm = results[ci];
            rep.arg_z0 = centers[ci];
            rep.arg_eps = arg_eps[ci];
        }
    }
    rep.probes = (int)centers.size() * budget.eps_levels;
    rep.probe_hash = fnv_hex(hash_data);
    return rep;
}

CarlesonReport carleson_norm_current(const FormField& theta, const Domain& domain,
                                     const MetricModel& metric, bool weight_by_d,
                                     const CurrentCloudBudget& budget) {
    int n = domain.dimension();
    int pq = theta.p() + theta.q();
    if (pq > 2 || pq < 1 || (pq == 2 && !(theta.p() == 1 && theta.q() == 1)))
        throw InvalidArgument("carleson_norm_current: unsupported bidegree");

    // Gauge-polar interior cloud over the boundary collar.
    std::vector<VecC> base = boundary_probes(domain, budget.boundary_points, budget.carleson.seed + 1);
    double fact = 1;
    for (int i = 2; i < n; ++i) fact *= i;
    double sphere_area = 2 * std::pow(kPi, n) / fact;  // area of S^{2n-1}
    double base_w = sphere_area / budget.boundary_points;

    struct Cell {
        VecC z;
        double vol;
    };
    std::vector<Cell> cells;
    int l0 = (int)std::ceil(-std::log2(budget.collar));
    for (int l = l0; l < l0 + budget.radial_levels; ++l) {
        double dhi = std::ldexp(1.0, -l), dlo = std::ldexp(1.0, -l - 1);
        if (l == l0) dhi = std::min(dhi, budget.collar);
        double dm = 0.5 * (dhi + dlo);
        double thick = dhi - dlo;
        for (const auto& b : base) {
            Cell c;
            c.z = (1.0 - dm) * b;
            c.vol = base_w * thick * std::pow(1.0 - dm, 2.0 * n - 1);
            cells.push_back(c);
        }
    }

    // Frame densities per cell, all index tuples at once.
    int tuples = pq == 2 ? n * n : n;
    std::vector<DiscreteMeasure> measures(tuples);
    for (auto& m : measures) {
        m.points.reserve(cells.size());
        m.weights.reserve(cells.size());
    }
    std::vector<std::vector<double>> densities(cells.size());
    parallel_for(cells.size(), [&](std::size_t ci) {
        const Cell& cell = cells[ci];
        std::vector<double> local(tuples, 0.0);
        if (theta.in_support(cell.z)) {
            MetricFrame fr = metric.frame(cell.z);
            VecR kn(n);
            for (int j = 0; j < n; ++j) kn[j] = knorm(domain, cell.z, fr.e(j));
            double w = weight_by_d ? domain.dist(cell.z) : 1.0;
            if (pq == 2) {
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        local[j * n + k] =
                            std::abs(theta.pair11(cell.z, fr.e(j), fr.e(k))) * w /
                            (kn[j] * kn[k]);
            } else {
                for (int j = 0; j < n; ++j)
                    local[j] = std::abs(theta.action1(cell.z, fr.e(j))) * w / kn[j];
            }
        }
        densities[ci] = std::move(local);
    });
    for (size_t ci = 0; ci < cells.size(); ++ci)
        for (int t = 0; t < tuples; ++t) {
            measures[t].points.push_back(cells[ci].z);
            measures[t].weights.push_back(densities[ci][t] * cells[ci].vol);
        }

    CarlesonReport best;
    best.surrogate_area = true;
    for (int t = 0; t < tuples; ++t) {
        CarlesonReport rep = carleson_norm_measure(measures[t], domain, budget.carleson);
        if (rep.norm >= best.norm) {
            rep.atoms = (int)cells.size();
            best = rep;
        }
    }
    return best;
}

}  // namespace cft
