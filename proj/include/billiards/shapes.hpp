#pragma once

#include "billiards/polygon.hpp"

namespace billiards::shapes {

Polygon unit_square();
Polygon rectangle(const Rational& width, const Rational& height);
Polygon equilateral_triangle();

// Parallelogram with sides a (horizontal) and 1, acute angle pi/3 at the origin.
Polygon pi3_parallelogram(const Rational& a);

// Rectangle [0,x2]x[0,y2] with the corner (x1,x2]x(y1,y2] removed.
// Traversal: (0,0) (x2,0) (x2,y1) (x1,y1) (x1,y2) (0,y2).
Polygon broken_rectangle(const Rational& x1, const Rational& x2, const Rational& y1, const Rational& y2);

// pi/3 parallelogram (sides 2 and 1) with a parallelogram bay of sides 1/2
// cut at its acute corner.
Polygon broken_parallelogram();

// Isosceles triangle with apex angle pi/5 and unit base.
Polygon pi5_triangle();

// Right triangle with acute angles (353/1000) pi and (147/1000) pi and unit first leg.
Polygon rationalized_right_triangle();

}  // namespace billiards::shapes
