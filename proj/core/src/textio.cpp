#include "torsionlab/textio.hpp"

#include <cctype>

namespace torsionlab {

namespace {

struct TermParser {
    std::string s;
    std::size_t pos = 0;
    char var;

    explicit TermParser(const std::string &text, char v) : var(v) {
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }

    bool done() const { return pos >= s.size(); }
    char peek() const { return pos < s.size() ? s[pos] : '\0'; }

    // one term: [sign] [coeff] ['*'] [var ['^' exp]]
    void term(std::vector<Rational> &coeffs) {
        int sign = 1;
        while (peek() == '+' || peek() == '-') {
            if (s[pos] == '-') sign = -sign;
            ++pos;
        }
        std::string num;
        while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '/' ||
               peek() == '.')
            num += s[pos++];
        if (!num.empty() && num.find('.') != std::string::npos)
            throw UsageError("decimal coefficients are not exact; use fractions: " + num);
        Rational c = num.empty() ? Rational(1) : parse_rational(num);
        if (sign < 0) c = -c;
        std::size_t exp = 0;
        if (peek() == '*') ++pos;
        if (peek() == var) {
            ++pos;
            exp = 1;
            if (peek() == '^') {
                ++pos;
                std::string e;
                while (std::isdigit(static_cast<unsigned char>(peek()))) e += s[pos++];
                if (e.empty()) throw UsageError("missing exponent after '^'");
                exp = std::stoul(e);
            }
        } else if (num.empty()) {
            throw UsageError("cannot parse polynomial term near position " +
                             std::to_string(pos));
        }
        if (coeffs.size() <= exp) coeffs.resize(exp + 1, Rational(0));
        coeffs[exp] += c;
    }
};

} // namespace

Poly<Rational> parse_poly(const std::string &text, char var) {
    TermParser tp(text, var);
    if (tp.s.empty()) throw UsageError("empty polynomial");
    std::vector<Rational> coeffs(1, Rational(0));
    while (!tp.done()) tp.term(coeffs);
    return Poly<Rational>::from_coeffs(coeffs);
}

std::string poly_str(const Poly<Rational> &p, char var) {
    if (p.is_zero()) return "0";
    std::string out;
    for (std::size_t i = p.size(); i-- > 0;) {
        const Rational &c = p.at(i);
        if (rat_is_zero(c)) continue;
        Rational a = abs(c);
        std::string mag;
        if (i == 0) {
            mag = rat_str(a);
        } else {
            std::string xs = (i == 1) ? std::string(1, var)
                                      : std::string(1, var) + "^" + std::to_string(i);
            mag = (a == 1) ? xs : rat_str(a) + "*" + xs;
        }
        if (out.empty())
            out = (sgn(c) < 0 ? "-" : "") + mag;
        else
            out += (sgn(c) < 0 ? "-" : "+") + mag;
    }
    return out;
}

NFElem parse_nf_elem(const std::string &text) {
    std::size_t sep = text.find(':');
    if (sep == std::string::npos) sep = text.find('@');
    if (sep == std::string::npos)
        throw UsageError("number-field element needs 'minpoly : element' form");
    auto mp = parse_poly(text.substr(0, sep), 't');
    auto el = parse_poly(text.substr(sep + 1), 't');
    auto nf = NumberField::make(mp);
    if (el.degree() >= static_cast<long>(nf->degree()))
        throw UsageError("element degree exceeds field degree");
    std::vector<Rational> coords(nf->degree(), Rational(0));
    for (std::size_t i = 0; i < el.size(); ++i) coords[i] = el.at(i);
    return nf->element(coords);
}

std::string nf_elem_str(const NFElem &e) {
    return poly_str(e.parent()->min_poly(), 't') + " : " +
           poly_str(Poly<Rational>::from_coeffs(e.coords()), 't');
}

std::string poly_str_nf(const Poly<NFElem> &p, char var) {
    if (p.is_zero()) return "0";
    std::string out;
    for (std::size_t i = p.size(); i-- > 0;) {
        const NFElem &c = p.at(i);
        if (c.is_zero()) continue;
        std::string cs = "(" + poly_str(Poly<Rational>::from_coeffs(c.coords()), 't') + ")";
        std::string xs = (i == 0) ? ""
                         : (i == 1) ? "*" + std::string(1, var)
                                    : "*" + std::string(1, var) + "^" + std::to_string(i);
        out += (out.empty() ? "" : "+") + cs + xs;
    }
    return out;
}

} // namespace torsionlab
