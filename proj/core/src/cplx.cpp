#include "torsionlab/cplx.hpp"

namespace torsionlab {

Cplx operator/(const Cplx &a, const Cplx &b) {
    // Smith's algorithm keeps intermediate magnitudes tame.
    if (abs(b.re) >= abs(b.im)) {
        if (b.re.is_zero() && b.im.is_zero())
            throw DenominatorZero("complex division by zero");
        Real r = b.im / b.re;
        Real d = b.re + b.im * r;
        return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
    }
    Real r = b.re / b.im;
    Real d = b.im + b.re * r;
    return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
}

Cplx inv(const Cplx &a) {
    Cplx one = Cplx::from_long(1, 0, a.bits());
    return one / a;
}

Cplx sqrt(const Cplx &a) {
    mpfr_prec_t p = a.bits();
    if (a.im.is_zero()) {
        if (a.re.sign() >= 0) return {sqrt(a.re), Real(p)};
        return {Real(p), sqrt(-a.re)};
    }
    // w = sqrt((|a| + |re|)/2); assemble by sign to avoid cancellation.
    Real m = abs(a);
    Real w = sqrt(mul_2si(m + abs(a.re), -1));
    if (a.re.sign() >= 0) {
        Real im = mul_2si(a.im / w, -1);
        return {w, im};
    }
    Real im = (a.im.sign() >= 0) ? w : -w;
    Real re = mul_2si(abs(a.im) / w, -1);
    return {re, im};
}

Cplx exp(const Cplx &a) {
    Real e = exp(a.re);
    return {e * cos(a.im), e * sin(a.im)};
}

Cplx log(const Cplx &a) {
    if (a.is_zero()) throw PoleProximity("log of zero");
    return {log(abs(a)), atan2(a.im, a.re)};
}

Cplx sin(const Cplx &a) {
    return {sin(a.re) * cosh(a.im), cos(a.re) * sinh(a.im)};
}

Cplx cos(const Cplx &a) {
    return {cos(a.re) * cosh(a.im), -(sin(a.re) * sinh(a.im))};
}

Cplx Cplx::pow_long(long e) const {
    mpfr_prec_t p = bits();
    if (e == 0) return Cplx::from_long(1, 0, p);
    bool neg = e < 0;
    unsigned long k = neg ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Cplx base = *this, acc = Cplx::from_long(1, 0, p);
    while (k) {
        if (k & 1u) acc *= base;
        base *= base;
        k >>= 1u;
    }
    return neg ? inv(acc) : acc;
}

std::string Cplx::str(long digits) const {
    if (im.is_zero()) return re.str(digits);
    std::string i = im.str(digits);
    if (!i.empty() && i[0] == '-') return re.str(digits) + i + "*i";
    return re.str(digits) + "+" + i + "*i";
}

Cplx parse_cplx(const std::string &text, mpfr_prec_t bits) {
    std::string t;
    for (char c : text)
        if (!isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw UsageError("empty complex literal");
    // Split at the last top-level +/- that is not an exponent sign.
    auto is_exp_sign = [&](size_t i) {
        return i > 0 && (t[i - 1] == 'e' || t[i - 1] == 'E');
    };
    size_t split = std::string::npos;
    for (size_t i = t.size(); i-- > 1;) {
        if ((t[i] == '+' || t[i] == '-') && !is_exp_sign(i)) {
            split = i;
            break;
        }
    }
    auto parse_part = [&](std::string s) -> std::pair<Real, bool> {
        bool imag = false;
        if (auto pos = s.find("*i"); pos != std::string::npos) {
            imag = true;
            s = s.substr(0, pos);
        } else if (!s.empty() && s.back() == 'i') {
            imag = true;
            s.pop_back();
            if (s.empty() || s == "+") s = "1";
            else if (s == "-") s = "-1";
        }
        // exact fractions are accepted alongside decimal strings
        if (s.find('/') != std::string::npos)
            return {Real::from_rational(parse_rational(s), bits), imag};
        return {Real::from_string(s, bits), imag};
    };
    Real re(bits), im(bits);
    if (split == std::string::npos) {
        auto [v, imag] = parse_part(t);
        (imag ? im : re) = v;
    } else {
        auto [v1, i1] = parse_part(t.substr(0, split));
        auto [v2, i2] = parse_part(t.substr(split));
        if (i1 == i2) throw UsageError("cannot parse complex: " + text);
        (i1 ? im : re) = v1;
        (i2 ? im : re) = v2;
    }
    return {re, im};
}

} // namespace torsionlab
