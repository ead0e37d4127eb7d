#include "slopelab/polygon.hpp"

#include <algorithm>
#include <sstream>

namespace slopelab {

Rational rat(long long num, long long den) {
    if (den == 0) throw PreconditionError("BadInput", "rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    return {num, den};
}

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return rat(std::stoll(text), 1);
        return rat(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw SchemaError("cannot parse rational: " + text);
    }
}

bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

Rational operator+(const Rational& a, const Rational& b) { return rat(a.num * b.den + b.num * a.den, a.den * b.den); }
Rational operator-(const Rational& a, const Rational& b) { return rat(a.num * b.den - b.num * a.den, a.den * b.den); }
Rational operator*(const Rational& a, const Rational& b) { return rat(a.num * b.num, a.den * b.den); }
Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw PreconditionError("BadInput", "rational: division by zero");
    return rat(a.num * b.den, a.den * b.num);
}

std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << r.num;
    if (r.den != 1) os << '/' << r.den;
    return os.str();
}

long polygon_rank(const Polygon& P) {
    long r = 0;
    for (const auto& part : P) r += part.mult;
    return r;
}

bool polygon_eq(const Polygon& a, const Polygon& b) { return a == b; }

Polygon normalize_polygon(std::vector<SlopePart> parts) {
    std::sort(parts.begin(), parts.end(),
              [](const SlopePart& x, const SlopePart& y) { return x.slope < y.slope; });
    Polygon out;
    for (const auto& part : parts) {
        if (part.mult == 0) continue;
        if (!out.empty() && out.back().slope == part.slope)
            out.back().mult += part.mult;
        else
            out.push_back(part);
    }
    return out;
}

Polygon merge_polygons(const Polygon& a, const Polygon& b) {
    std::vector<SlopePart> parts(a.begin(), a.end());
    parts.insert(parts.end(), b.begin(), b.end());
    return normalize_polygon(std::move(parts));
}

Polygon shift_polygon(const Polygon& P, long by) {
    Polygon out = P;
    for (auto& part : out) part.slope = part.slope + rat(by);
    return out;
}

std::string to_string(const Polygon& P) {
    std::ostringstream os;
    os << '{';
    for (size_t i = 0; i < P.size(); ++i) {
        if (i) os << ", ";
        os << '(' << to_string(P[i].slope) << ", " << P[i].mult << ')';
    }
    os << '}';
    return os.str();
}

bool lies_on_or_above(const Polygon& newton, const Polygon& hodge) {
    long r = polygon_rank(newton);
    if (r != polygon_rank(hodge)) return false;
    std::vector<Rational> ns, hs;
    for (const auto& part : newton)
        for (long i = 0; i < part.mult; ++i) ns.push_back(part.slope);
    for (const auto& part : hodge)
        for (long i = 0; i < part.mult; ++i) hs.push_back(part.slope);
    Rational cn = rat(0), ch = rat(0);
    for (long k = 0; k < r; ++k) {
        cn = cn + ns[static_cast<size_t>(k)];
        ch = ch + hs[static_cast<size_t>(k)];
        if (k + 1 < r && cn < ch) return false;
    }
    return cn == ch;
}

} // namespace slopelab
