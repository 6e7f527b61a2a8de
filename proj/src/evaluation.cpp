#include "uslab/evaluation.hpp"

#include <cmath>

namespace uslab {

struct ExactEvaluator::Impl {
    std::vector<__mpf_struct> coeffs;
    mpf_t center;
    // scratch
    mutable mpf_t ar, ai, wr, wi, t1, t2;
    bool real_center_zero = false;

    explicit Impl(unsigned long bits, const RatPoly& p) {
        coeffs.resize(p.coeffs().size());
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            mpf_init2(&coeffs[k], bits);
            mpf_set_q(&coeffs[k], p.coeffs()[k].get_mpq_t());
        }
        mpf_init2(center, bits);
        mpf_set_q(center, p.center().get_mpq_t());
        for (mpf_t* v : {&ar, &ai, &wr, &wi, &t1, &t2}) mpf_init2(*v, bits);
    }
    ~Impl() {
        for (auto& c : coeffs) mpf_clear(&c);
        mpf_clear(center);
        for (mpf_t* v : {&ar, &ai, &wr, &wi, &t1, &t2}) mpf_clear(*v);
    }
};

ExactEvaluator::ExactEvaluator(const RatPoly& p, double radius) {
    // log2 of sum |c_k| radius^k, via log-sum-exp on per-term logs.
    double lr = radius > 0 ? std::log2(radius) : -1e300;
    double top = -1e300;
    std::vector<double> terms;
    terms.reserve(p.coeffs().size());
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
        const auto& c = p.coeffs()[k];
        if (sgn(c) == 0) continue;
        double t = log_abs(c) / std::log(2.0) + (k == 0 ? 0.0 : static_cast<double>(k) * lr);
        terms.push_back(t);
        top = std::max(top, t);
    }
    double mag = 0.0;
    if (!terms.empty()) {
        double s = 0.0;
        for (double t : terms) s += std::exp2(t - top);
        mag = top + std::log2(s);
    }
    double extra = std::max(0.0, mag);
    bits_ = 96 + static_cast<unsigned long>(std::ceil(extra)) + 8;
    impl_ = std::make_unique<Impl>(bits_, p);
}

ExactEvaluator::~ExactEvaluator() = default;

double ExactEvaluator::real(double x) const {
    auto& I = *impl_;
    mpf_set_d(I.wr, x);
    mpf_sub(I.wr, I.wr, I.center);
    mpf_set_ui(I.ar, 0);
    for (std::size_t k = I.coeffs.size(); k-- > 0;) {
        mpf_mul(I.ar, I.ar, I.wr);
        mpf_add(I.ar, I.ar, &I.coeffs[k]);
    }
    return mpf_get_d(I.ar);
}

Complex ExactEvaluator::operator()(Complex z) const {
    auto& I = *impl_;
    if (z.imag() == 0.0) return {real(z.real()), 0.0};
    mpf_set_d(I.wr, z.real());
    mpf_sub(I.wr, I.wr, I.center);
    mpf_set_d(I.wi, z.imag());
    mpf_set_ui(I.ar, 0);
    mpf_set_ui(I.ai, 0);
    for (std::size_t k = I.coeffs.size(); k-- > 0;) {
        // (ar + i ai)(wr + i wi)
        mpf_mul(I.t1, I.ar, I.wr);
        mpf_mul(I.t2, I.ai, I.wi);
        mpf_sub(I.t1, I.t1, I.t2);
        mpf_mul(I.t2, I.ar, I.wi);
        mpf_mul(I.ai, I.ai, I.wr);
        mpf_add(I.ai, I.ai, I.t2);
        mpf_add(I.ar, I.t1, &I.coeffs[k]);
    }
    return {mpf_get_d(I.ar), mpf_get_d(I.ai)};
}

namespace {

template <class T>
Complex center_of(const Polynomial<T>& p) {
    return ScalarTraits<T>::to_complex(p.center());
}

}  // namespace

template <class T>
double sup_norm(const Polynomial<T>& p, const CompactSet& K, std::size_t min_density) {
    K.validate(min_density);
    if (p.is_zero()) return 0.0;
    PolyEvaluator<T> ev(p, K.max_distance_from(center_of(p)));
    double m = 0.0;
    for (const auto& z : K.samples()) m = std::max(m, std::abs(ev(z)));
    return m;
}

template <class T>
double sup_distance(const Polynomial<T>& p, const ComplexFunction& h, const CompactSet& K,
                    std::size_t min_density) {
    K.validate(min_density);
    PolyEvaluator<T> ev(p, K.max_distance_from(center_of(p)));
    double m = 0.0;
    for (const auto& z : K.samples()) {
        double d = std::abs(ev(z) - h(z));
        if (std::isnan(d)) return std::numeric_limits<double>::infinity();
        m = std::max(m, d);
    }
    return m;
}

double sup_distance_exact(const RatPoly& p, const RatPoly& q, const CompactSet& K, std::size_t min_density) {
    RatPoly qq = q.center() == p.center() ? q : q.recentered(p.center());
    return sup_norm(p - qq, K, min_density);
}

double sup_of(const ComplexFunction& f, const CompactSet& K, std::size_t min_density) {
    K.validate(min_density);
    double m = 0.0;
    for (const auto& z : K.samples()) m = std::max(m, std::abs(f(z)));
    return m;
}

template double sup_norm<Rational>(const RatPoly&, const CompactSet&, std::size_t);
template double sup_norm<Complex>(const CplxPoly&, const CompactSet&, std::size_t);
template double sup_distance<Rational>(const RatPoly&, const ComplexFunction&, const CompactSet&, std::size_t);
template double sup_distance<Complex>(const CplxPoly&, const ComplexFunction&, const CompactSet&, std::size_t);

}  // namespace uslab
