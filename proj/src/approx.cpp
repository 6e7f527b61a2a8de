#include "uslab/approx.hpp"

#include <cmath>
#include <numbers>

namespace uslab {

RatPoly interpolate_exact(const std::vector<Rational>& nodes, const std::vector<Rational>& values) {
    const std::size_t n = nodes.size();
    if (n == 0 || values.size() != n) throw DomainError("interpolation needs matching nonempty node and value lists");
    std::vector<Rational> dd = values;
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) {
            Rational den = nodes[i] - nodes[i - j];
            if (sgn(den) == 0) throw DomainError("interpolation nodes must be distinct");
            dd[i] = (dd[i] - dd[i - 1]) / den;
        }
    // Nested Newton form to monomials.
    std::vector<Rational> p{dd[n - 1]};
    for (std::size_t i = n - 1; i-- > 0;) {
        std::vector<Rational> q(p.size() + 1, Rational(0));
        for (std::size_t k = 0; k < p.size(); ++k) {
            q[k + 1] += p[k];
            q[k] -= nodes[i] * p[k];
        }
        q[0] += dd[i];
        p = std::move(q);
    }
    return RatPoly(std::move(p));
}

std::vector<Rational> chebyshev_nodes(const Interval& I, std::size_t n) {
    Rational mid = (I.a + I.b) / 2, half = (I.b - I.a) / 2;
    const double scale = std::ldexp(1.0, 30);
    std::vector<Rational> x(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        double t = std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * n + 2.0));
        Rational tq = ratio(std::llround(t * scale), static_cast<long>(scale));
        x[j] = mid + half * tq;
    }
    return x;
}

namespace {

std::vector<std::size_t> degree_schedule(std::size_t max_degree) {
    std::vector<std::size_t> s;
    for (std::size_t d = 1; d < max_degree; d *= 2) s.push_back(d);
    s.push_back(std::max<std::size_t>(max_degree, 1));
    return s;
}

struct Errors {
    double build = 0, verify = 0;
};

template <class F>
Errors grid_errors(const CompactSet& I, F&& pointwise) {
    Errors e;
    CompactSet fine = I.refined();
    const auto xs = fine.real_samples();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double d = pointwise(xs[i]);
        if (std::isnan(d)) d = std::numeric_limits<double>::infinity();
        e.verify = std::max(e.verify, d);
        if (i % kVerificationFactor == 0) e.build = std::max(e.build, d);
    }
    return e;
}

double interval_radius(const Interval& iv) {
    return std::max(std::fabs(to_double(iv.a)), std::fabs(to_double(iv.b)));
}

}  // namespace

template <>
ApproximationResult<Rational> approx_on_interval<Rational>(const std::function<Rational(const Rational&)>& g,
                                                           const CompactSet& I, double eps, std::size_t max_degree) {
    I.validate();
    const Interval& iv = I.as_interval();
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_deg = 0;
    for (std::size_t N : degree_schedule(max_degree)) {
        auto nodes = chebyshev_nodes(iv, N);
        std::vector<Rational> vals;
        for (const auto& x : nodes) vals.push_back(g(x));
        RatPoly p = interpolate_exact(nodes, vals);
        // Exact agreement at a second node set means p reproduces g.
        bool reproduces = true;
        for (const auto& y : chebyshev_nodes(iv, N + 1))
            if (g(y) != p.eval(y)) {
                reproduces = false;
                break;
            }
        ExactEvaluator ev(p, interval_radius(iv));
        Errors e = grid_errors(I, [&](double x) {
            return std::fabs(ev.real(x) - to_double(g(rational_from_double(x))));
        });
        if (reproduces && e.verify <= 1e-25) e = {0.0, 0.0};
        if (e.verify < best) best = e.verify, best_deg = N;
        if (e.verify <= eps)
            return {p, e.verify, e.build, static_cast<std::size_t>(std::max(0L, p.degree())), I.density()};
    }
    throw ApproximationFailure("approximation did not reach " + std::to_string(eps) + " by degree " +
                                   std::to_string(max_degree),
                               best, best_deg);
}

template <>
ApproximationResult<Complex> approx_on_interval<Complex>(const std::function<Complex(const Complex&)>& g,
                                                         const CompactSet& I, double eps, std::size_t max_degree) {
    I.validate();
    const Interval& iv = I.as_interval();
    const Rational mid = (iv.a + iv.b) / 2;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_deg = 0;
    for (std::size_t N : degree_schedule(max_degree)) {
        auto nodes = chebyshev_nodes(iv, N);
        std::vector<Rational> re, im;
        for (const auto& x : nodes) {
            Complex v = g(Complex(to_double(x), 0.0));
            re.push_back(rational_from_double(v.real()));
            im.push_back(rational_from_double(v.imag()));
        }
        RatPoly pr = interpolate_exact(nodes, re).recentered(mid);
        RatPoly pi = interpolate_exact(nodes, im).recentered(mid);
        std::vector<Complex> c(std::max(pr.coeffs().size(), pi.coeffs().size()));
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = {to_double(pr.coeff(k)), to_double(pi.coeff(k))};
        CplxPoly p(std::move(c), Complex(to_double(mid), 0.0));
        Errors e = grid_errors(I, [&](double x) { return std::abs(p.eval(Complex(x, 0)) - g(Complex(x, 0))); });
        if (e.verify < best) best = e.verify, best_deg = N;
        if (e.verify <= eps)
            return {p, e.verify, e.build, static_cast<std::size_t>(std::max(0L, p.degree())), I.density()};
    }
    throw ApproximationFailure("approximation did not reach " + std::to_string(eps) + " by degree " +
                                   std::to_string(max_degree),
                               best, best_deg);
}

namespace {

// Chebyshev interpolant of g at n+1 first-kind nodes, coefficients computed in double and rounded,
// then expanded exactly in monomials of x. Avoids exact divided differences, whose sizes explode.
RatPoly chebyshev_fit(const std::function<double(double)>& g, const Interval& iv, std::size_t n) {
    const double a = to_double(iv.a), b = to_double(iv.b);
    const std::size_t m = n + 1;
    std::vector<double> fx(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double t = std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * m));
        fx[j] = g(0.5 * (a + b) + 0.5 * (b - a) * t);
    }
    std::vector<double> c(m);
    double cmax = 0;
    for (std::size_t k = 0; k < m; ++k) {
        double acc = 0;
        for (std::size_t j = 0; j < m; ++j) acc += fx[j] * std::cos(k * (2.0 * j + 1.0) * std::numbers::pi / (2.0 * m));
        c[k] = acc * (k == 0 ? 1.0 : 2.0) / static_cast<double>(m);
        cmax = std::max(cmax, std::fabs(c[k]));
    }
    // t = (2x - (a+b)) / (b-a), exactly.
    const RatPoly L({-(iv.a + iv.b) / (iv.b - iv.a), Rational(2) / (iv.b - iv.a)});
    const RatPoly two_L = L * RatPoly::constant(2);
    RatPoly prev = RatPoly::constant(1), cur = L;
    RatPoly out;
    for (std::size_t k = 0; k < m; ++k) {
        if (k >= 2) {
            RatPoly next = two_L * cur - prev;
            prev = std::move(cur);
            cur = std::move(next);
        }
        const RatPoly& Tk = k == 0 ? prev : cur;
        // Coefficients at rounding level are noise; keeping them would break exact parity.
        if (std::fabs(c[k]) > 1e-15 * cmax) out += Tk * RatPoly::constant(rational_from_double(c[k]));
    }
    return out;
}

}  // namespace

ApproximationResult<Rational> approx_real_on_interval(const std::function<double(double)>& g, const CompactSet& I,
                                                      double eps, std::size_t max_degree) {
    I.validate();
    const Interval& iv = I.as_interval();
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_deg = 0;
    for (std::size_t N : degree_schedule(max_degree)) {
        RatPoly p = chebyshev_fit(g, iv, N);
        ExactEvaluator ev(p, interval_radius(iv));
        Errors e = grid_errors(I, [&](double x) { return std::fabs(ev.real(x) - g(x)); });
        if (e.verify < best) best = e.verify, best_deg = N;
        if (e.verify <= eps)
            return {p, e.verify, e.build, static_cast<std::size_t>(std::max(0L, p.degree())), I.density()};
    }
    throw ApproximationFailure("approximation did not reach " + std::to_string(eps) + " by degree " +
                                   std::to_string(max_degree),
                               best, best_deg);
}

std::function<double(double)> blend_divide(const std::function<double(double)>& h, std::size_t p, double eta) {
    if (!(eta > 0)) throw DomainError("blend width must be positive");
    if (std::fabs(h(0.0)) > 1e-14) throw DomainError("blend_divide needs h(0) = 0");
    const double ep = std::pow(eta, static_cast<double>(p));
    return [h, p, eta, ep](double x) {
        if (x == 0.0) return 0.0;
        double ax = std::fabs(x);
        if (ax >= eta) return h(x) / std::pow(x, static_cast<double>(p));
        double s = (x < 0 && p % 2 == 1) ? -ep : ep;
        return (ax / eta) * h(x) / s;
    };
}

double default_blend_eta(const std::function<double(double)>& h, const CompactSet& I, double eps) {
    I.validate();
    std::vector<double> xs = I.real_samples();
    std::sort(xs.begin(), xs.end(), [](double a, double b) { return std::fabs(a) < std::fabs(b); });
    double eta = 0.0, run = 0.0;
    for (double x : xs) {
        run = std::max(run, std::fabs(h(x)));
        if (run > eps / 3) break;
        eta = std::fabs(x);
    }
    if (eta == 0.0) {
        // Even the nearest nonzero sample is too large; fall back to one grid step.
        const Interval& iv = I.as_interval();
        eta = std::fabs(to_double(iv.b) - to_double(iv.a)) / static_cast<double>(I.density());
    }
    return eta;
}

template <class T>
Polynomial<T> hermite_two_disc(const Polynomial<T>& h0, const T& c, std::size_t m) {
    using Tr = ScalarTraits<T>;
    if (Tr::is_zero(c)) throw DomainError("hermite_two_disc needs a nonzero center");
    if (m == 0) throw DomainError("hermite_two_disc needs m >= 1");
    Polynomial<T> h = Tr::is_zero(h0.center()) ? h0 : h0.recentered(T(0));
    const T inv_c = T(T(1) / c);
    std::vector<T> q(m, T(0));
    for (std::size_t j = 0; j < h.coeffs().size(); ++j) {
        const T& hj = h.coeffs()[j];
        if (Tr::is_zero(hj)) continue;
        const long e = static_cast<long>(j) - static_cast<long>(m);
        // c^e
        T ce(1);
        for (long i = 0; i < (e < 0 ? -e : e); ++i) ce = T(ce * (e < 0 ? inv_c : c));
        T binom(1), cpow = ce;  // C(e, k) and c^(e - k)
        for (std::size_t k = 0; k < m; ++k) {
            q[k] = T(q[k] + hj * binom * cpow);
            binom = T(binom * Tr::from_rational(ratio(e - static_cast<long>(k), static_cast<long>(k) + 1)));
            cpow = T(cpow * inv_c);
        }
    }
    Polynomial<T> Q(std::move(q), c);
    return Q.recentered(T(0)).shifted_up(m);
}

template RatPoly hermite_two_disc(const RatPoly&, const Rational&, std::size_t);
template CplxPoly hermite_two_disc(const CplxPoly&, const Complex&, std::size_t);

TaylorSource TaylorSource::from_polynomial(const CplxPoly& p) {
    if (p.center() != Complex(0, 0)) throw DomainError("Taylor source must be centered at 0");
    return {[p](std::size_t k) { return p.coeff(k); }, static_cast<std::size_t>(std::max(0L, p.degree()))};
}

TaylorSource TaylorSource::simple_pole(Complex a) {
    if (a == Complex(0, 0)) throw DomainError("pole at the expansion point");
    // 1/(z - a) = -sum z^k / a^(k+1)
    return {[a](std::size_t k) { return -std::pow(Complex(1.0, 0.0) / a, static_cast<double>(k + 1)); }, std::nullopt};
}

TaylorSource TaylorSource::exponential() {
    return {[](std::size_t k) { return Complex(std::exp(-std::lgamma(static_cast<double>(k) + 1.0)), 0.0); },
            std::nullopt};
}

RateReport bw_rate(const TaylorSource& f, const CompactSet& K, std::size_t n_max) {
    K.validate();
    const Disc& d = K.as_disc();
    if (d.center != Complex(0, 0)) throw DomainError("bw_rate expects a disc centered at the expansion point");
    const double R = d.radius;
    // Decide where the tail can be cut.
    std::size_t end = n_max + 1;
    bool divergent = false;
    if (f.degree) {
        end = std::max(end, *f.degree + 1);
    } else {
        double ref = std::abs(f.coefficient(n_max + 1)) * std::pow(R, static_cast<double>(n_max + 1));
        std::size_t tiny_run = 0;
        const std::size_t cap = n_max + 6000;
        for (end = n_max + 2; end < cap && tiny_run < 12; ++end) {
            double t = std::abs(f.coefficient(end)) * std::pow(R, static_cast<double>(end));
            tiny_run = (t <= 1e-18 * ref || t == 0.0) ? tiny_run + 1 : 0;
            if (!std::isfinite(t)) {
                divergent = true;
                break;
            }
        }
        if (end >= cap) divergent = true;
    }
    RateReport rep;
    rep.distances.assign(n_max + 1, 0.0);
    if (divergent) {
        std::fill(rep.distances.begin(), rep.distances.end(), std::numeric_limits<double>::infinity());
        rep.rate = std::numeric_limits<double>::infinity();
        return rep;
    }
    std::vector<Complex> coef(end + 1);
    for (std::size_t k = 0; k <= end; ++k) coef[k] = f.coefficient(k);
    for (const auto& z : K.samples()) {
        // Backward suffix sums: tail(n) = sum_{k > n} f_k z^k.
        std::vector<Complex> zp(end + 1);
        zp[0] = 1.0;
        for (std::size_t k = 1; k <= end; ++k) zp[k] = zp[k - 1] * z;
        Complex s = 0.0;
        for (std::size_t k = end; k >= 1; --k) {
            s += coef[k] * zp[k];
            if (k - 1 <= n_max) rep.distances[k - 1] = std::max(rep.distances[k - 1], std::abs(s));
        }
    }
    const std::size_t window = std::max<std::size_t>(3, n_max / 4);
    rep.window = window;
    double acc = 0.0;
    std::size_t used = 0;
    bool zero = false;
    for (std::size_t n = n_max + 1 - std::min(window, n_max); n <= n_max; ++n) {
        if (n == 0) continue;
        if (rep.distances[n] == 0.0) {
            zero = true;
            break;
        }
        acc += std::log(rep.distances[n]) / static_cast<double>(n);
        ++used;
    }
    rep.rate = zero || used == 0 ? 0.0 : std::exp(acc / static_cast<double>(used));
    return rep;
}

double green_disc(double R, Complex z) {
    if (!(R > 0)) throw DomainError("disc radius must be positive");
    double a = std::abs(z);
    return a <= R ? 0.0 : std::log(a / R);
}

BoundCheck bernstein_bound_check(const CplxPoly& P, const std::vector<Complex>& alpha, double r, double R,
                                 std::size_t density) {
    if (!(0 < r && r < R)) throw DomainError("bernstein_bound_check needs 0 < r < R");
    if (P.center() != Complex(0, 0)) throw DomainError("polynomial must be centered at 0");
    if (alpha.size() < P.coeffs().size()) throw DomainError("need one alpha per coefficient");
    std::vector<Complex> wc(P.coeffs().size());
    double amax = 0.0;
    for (std::size_t k = 0; k < wc.size(); ++k) {
        wc[k] = alpha[k] * P.coeffs()[k];
        amax = std::max(amax, std::abs(alpha[k]));
    }
    for (std::size_t k = wc.size(); k < alpha.size(); ++k) amax = std::max(amax, std::abs(alpha[k]));
    BoundCheck b;
    b.lhs = sup_norm(CplxPoly(wc), CompactSet::disc(0.0, r, density), density);
    b.rhs = std::sqrt(2.0 / (R - r)) * amax * sup_norm(P, CompactSet::disc(0.0, R, density), density);
    return b;
}

std::vector<Rational> muntz_projection(std::size_t m, const std::vector<std::size_t>& ex) {
    const std::size_t n = ex.size();
    for (std::size_t l : ex)
        if (l == m) throw DomainError("target power is among the admissible powers");
    mpz_class P = 1, Q = 1;
    for (std::size_t l : ex) {
        P *= mpz_class(static_cast<long>(l) - static_cast<long>(m));
        Q *= static_cast<unsigned long>(m + l + 1);
    }
    std::vector<Rational> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        mpz_class A = 1, B = 1;
        for (std::size_t i = 0; i < n; ++i) {
            A *= static_cast<unsigned long>(ex[k] + ex[i] + 1);
            if (i != k) B *= mpz_class(static_cast<long>(ex[i]) - static_cast<long>(ex[k]));
        }
        c[k] = ratio(mpz_class(P * A), mpz_class(Q * B * (static_cast<long>(ex[k]) - static_cast<long>(m))));
    }
    return c;
}

namespace {

// Low-order part of R replaced by L2-best combinations of x^l, l in [v, top], on a hull
// interval sigma*[0, c] or [-c, c].
RatPoly muntz_block(const RatPoly& R, const Interval& K, std::size_t v, std::size_t top) {
    bool symmetric = sgn(K.a) < 0 && sgn(K.b) > 0;
    Rational c, sigma = 1;
    if (symmetric)
        c = std::max(Rational(-K.a), K.b);
    else if (sgn(K.a) >= 0)
        c = K.b;
    else
        c = -K.a, sigma = -1;
    if (sgn(c) <= 0) throw DomainError("degenerate interval at 0");
    const Rational sc = sigma * c;

    std::vector<Rational> out(top + 1, Rational(0));
    for (std::size_t j = v; j < R.coeffs().size(); ++j) out[j] = R.coeffs()[j];

    // (sigma c)^j for j <= top
    std::vector<Rational> pw(top + 1);
    pw[0] = 1;
    for (std::size_t j = 1; j <= top; ++j) pw[j] = pw[j - 1] * sc;

    for (int parity = 0; parity < (symmetric ? 2 : 1); ++parity) {
        std::vector<std::size_t> ex;
        std::vector<std::size_t> js;
        for (std::size_t l = v; l <= top; ++l)
            if (!symmetric || static_cast<int>(l % 2) == parity) ex.push_back(l);
        for (std::size_t j = 0; j < std::min(v, R.coeffs().size()); ++j)
            if (sgn(R.coeffs()[j]) != 0 && (!symmetric || static_cast<int>(j % 2) == parity)) js.push_back(j);
        if (js.empty()) continue;
        if (ex.empty()) throw DomainError("no admissible powers of matching parity");
        const std::size_t n = ex.size();
        // c_{j,k} = P_j A_k / (Q_j (l_k - j) B_k)
        std::vector<Rational> AB(n);
        for (std::size_t k = 0; k < n; ++k) {
            mpz_class A = 1, B = 1;
            for (std::size_t i = 0; i < n; ++i) {
                A *= static_cast<unsigned long>(ex[k] + ex[i] + 1);
                if (i != k) B *= mpz_class(static_cast<long>(ex[i]) - static_cast<long>(ex[k]));
            }
            AB[k] = ratio(A, B);
        }
        std::vector<Rational> wj;  // R_j (sigma c)^j P_j / Q_j
        for (std::size_t j : js) {
            mpz_class P = 1, Q = 1;
            for (std::size_t l : ex) {
                P *= mpz_class(static_cast<long>(l) - static_cast<long>(j));
                Q *= static_cast<unsigned long>(j + l + 1);
            }
            wj.push_back(R.coeffs()[j] * pw[j] * ratio(P, Q));
        }
        for (std::size_t k = 0; k < n; ++k) {
            Rational s = 0;
            for (std::size_t t = 0; t < js.size(); ++t)
                s += wj[t] / Rational(static_cast<long>(ex[k]) - static_cast<long>(js[t]));
            out[ex[k]] += AB[k] * s / pw[ex[k]];
        }
    }
    return RatPoly(std::move(out));
}

}  // namespace

RatPoly valuation_constrained_approx(const RatPoly& R0, const Interval& K, std::size_t v, std::size_t top,
                                     bool one_minus_x) {
    const RatPoly R = sgn(R0.center()) == 0 ? R0 : R0.recentered(Rational(0));
    const std::size_t s = one_minus_x ? 1 : 0;
    if (top + 1 < v + s + 1) throw DomainError("top degree below the block valuation");
    const bool zero_in_K = sgn(K.a) <= 0 && sgn(K.b) >= 0;
    const bool one_in_K = K.a <= 1 && K.b >= 1;
    const bool weight_free = !((v > 0 && zero_in_K) || (s > 0 && one_in_K));
    if (weight_free) {
        const std::size_t N = top - v - s;
        auto nodes = chebyshev_nodes(K, N);
        std::vector<Rational> g;
        g.reserve(nodes.size());
        for (const auto& x : nodes) {
            Rational w = 1;
            for (std::size_t i = 0; i < v; ++i) w *= x;
            if (s) w *= Rational(1 - x);
            g.push_back(R.eval(x) / w);
        }
        RatPoly P = interpolate_exact(nodes, g).shifted_up(v);
        if (s) P = P * RatPoly({1, -1});
        return P;
    }
    if (s > 0) throw DomainError("weight (1-x) vanishes on the set; no valuation-constrained approximation");
    if (R.degree() > static_cast<long>(top))
        throw DomainError("residual degree exceeds the admissible top degree");
    return muntz_block(R, K, v, top);
}

}  // namespace uslab
