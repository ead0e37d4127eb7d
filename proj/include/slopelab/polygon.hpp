#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "slopelab/errors.hpp"

namespace slopelab {

// Exact small rational, always reduced with den > 0. Magnitudes stay tiny
// (slopes and valuations at desk scale), so 64-bit is plenty.
struct Rational {
    long long num = 0;
    long long den = 1;
};

Rational rat(long long num, long long den = 1);
Rational parse_rational(const std::string& text); // "a/b" or "a"

inline bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
inline bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
bool operator<(const Rational& a, const Rational& b);
inline bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
inline bool operator>(const Rational& a, const Rational& b) { return b < a; }
inline bool operator>=(const Rational& a, const Rational& b) { return b <= a; }
Rational operator+(const Rational& a, const Rational& b);
Rational operator-(const Rational& a, const Rational& b);
Rational operator*(const Rational& a, const Rational& b);
Rational operator/(const Rational& a, const Rational& b);

std::string to_string(const Rational& r);

struct SlopePart {
    Rational slope;
    long mult = 0;
};

inline bool operator==(const SlopePart& a, const SlopePart& b) { return a.slope == b.slope && a.mult == b.mult; }

// Slopes strictly increasing; total multiplicity = rank.
using Polygon = std::vector<SlopePart>;

long polygon_rank(const Polygon& P);
bool polygon_eq(const Polygon& a, const Polygon& b);
Polygon normalize_polygon(std::vector<SlopePart> parts); // sort + merge equal slopes
Polygon merge_polygons(const Polygon& a, const Polygon& b);
Polygon shift_polygon(const Polygon& P, long by);
std::string to_string(const Polygon& P);

// Classical comparison: same rank, Newton on or above Hodge, equal endpoints.
bool lies_on_or_above(const Polygon& newton, const Polygon& hodge);

} // namespace slopelab
