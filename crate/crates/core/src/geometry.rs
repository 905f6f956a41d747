//! Exact rational points and segment predicates.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Self::new(q(x), q(y))
    }

    pub fn approx(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn to_f64(v: &Q) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

/// Sign of the cross product `(b - a) x (c - a)`.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    let lhs = (&b.x - &a.x) * (&c.y - &a.y);
    let rhs = (&b.y - &a.y) * (&c.x - &a.x);
    lhs.cmp(&rhs)
}

/// `p` lies strictly inside segment `ab`.
pub fn in_open_segment(p: &Point, a: &Point, b: &Point) -> bool {
    orient(a, b, p) == Ordering::Equal && p != a && p != b && {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        lo < p && p < hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentContact {
    Disjoint,
    /// Interiors cross at a single point.
    Proper(Point),
    /// Collinear with a common piece of positive length.
    Overlap,
    /// Some other contact: an endpoint lies on the other segment.
    Touch,
}

/// Classifies how segments `ab` and `cd` meet. Endpoints are assumed to be
/// four distinct points.
pub fn contact(a: &Point, b: &Point, c: &Point, d: &Point) -> SegmentContact {
    if !boxes_meet(a, b, c, d) {
        return SegmentContact::Disjoint;
    }
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    use Ordering::*;
    if o1 == Equal && o2 == Equal {
        // collinear: distinct endpoints mean any contact has positive length
        let (p0, p1) = minmax(a, b);
        let (q0, q1) = minmax(c, d);
        return if p0.max(q0) < p1.min(q1) {
            SegmentContact::Overlap
        } else {
            SegmentContact::Disjoint
        };
    }
    if o1 != Equal && o2 != Equal && o3 != Equal && o4 != Equal {
        if o1 != o2 && o3 != o4 {
            return SegmentContact::Proper(intersection(a, b, c, d));
        }
        return SegmentContact::Disjoint;
    }
    let touches = (o1 == Equal && in_open_segment(c, a, b))
        || (o2 == Equal && in_open_segment(d, a, b))
        || (o3 == Equal && in_open_segment(a, c, d))
        || (o4 == Equal && in_open_segment(b, c, d));
    if touches {
        SegmentContact::Touch
    } else {
        SegmentContact::Disjoint
    }
}

/// Segments sharing endpoint `s` overlap iff the other endpoints lie on the
/// same ray from `s`.
pub fn overlap_at_shared(s: &Point, a: &Point, b: &Point) -> bool {
    orient(s, a, b) == Ordering::Equal && {
        let dot = (&a.x - &s.x) * (&b.x - &s.x) + (&a.y - &s.y) * (&b.y - &s.y);
        dot.is_positive()
    }
}

fn minmax<'a>(a: &'a Point, b: &'a Point) -> (&'a Point, &'a Point) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn boxes_meet(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let span = |u: &Q, v: &Q| {
        if u <= v {
            (u.clone(), v.clone())
        } else {
            (v.clone(), u.clone())
        }
    };
    let (ax0, ax1) = span(&a.x, &b.x);
    let (cx0, cx1) = span(&c.x, &d.x);
    if ax1 < cx0 || cx1 < ax0 {
        return false;
    }
    let (ay0, ay1) = span(&a.y, &b.y);
    let (cy0, cy1) = span(&c.y, &d.y);
    !(ay1 < cy0 || cy1 < ay0)
}

/// Intersection of the supporting lines of two non-parallel segments.
pub fn intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> Point {
    let rx = &b.x - &a.x;
    let ry = &b.y - &a.y;
    let sx = &d.x - &c.x;
    let sy = &d.y - &c.y;
    let denom = &rx * &sy - &ry * &sx;
    debug_assert!(!denom.is_zero());
    let t = ((&c.x - &a.x) * &sy - (&c.y - &a.y) * &sx) / denom;
    Point::new(&a.x + &t * &rx, &a.y + &t * &ry)
}

/// Parameter of `p` along segment `ab`, for ordering points on it.
pub fn along(p: &Point, a: &Point, b: &Point) -> Q {
    if a.x != b.x {
        (&p.x - &a.x) / (&b.x - &a.x)
    } else {
        (&p.y - &a.y) / (&b.y - &a.y)
    }
}

/// Largest `1/2^k` strictly below `bound`.
pub fn dyadic_below(bound: &Q) -> Q {
    let mut eps = Q::one();
    while &eps >= bound {
        eps /= q(2);
    }
    eps
}

/// Serializes a rational as a `[numerator, denominator]` pair of decimal strings.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
        [v.numer().to_string(), v.denom().to_string()].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        use serde::de::Error;
        let [n, m] = <[String; 2]>::deserialize(d)?;
        let n: BigInt = n.parse().map_err(D::Error::custom)?;
        let m: BigInt = m.parse().map_err(D::Error::custom)?;
        if m.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Q::new(n, m))
    }
}

struct Rat<'a>(&'a Q);

impl Serialize for Rat<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        rational_serde::serialize(self.0, s)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Point", 2)?;
        st.serialize_field("x", &Rat(&self.x))?;
        st.serialize_field("y", &Rat(&self.y))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct P {
            #[serde(with = "rational_serde")]
            x: Q,
            #[serde(with = "rational_serde")]
            y: Q,
        }
        let p = P::deserialize(d)?;
        Ok(Point::new(p.x, p.y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_crossing() {
        let c = contact(
            &Point::int(0, 0),
            &Point::int(2, 2),
            &Point::int(0, 2),
            &Point::int(2, 0),
        );
        assert_eq!(c, SegmentContact::Proper(Point::int(1, 1)));
    }

    #[test]
    fn contact_kinds() {
        let p = Point::int;
        assert_eq!(
            contact(&p(0, 0), &p(2, 0), &p(0, 1), &p(2, 1)),
            SegmentContact::Disjoint
        );
        assert_eq!(
            contact(&p(0, 0), &p(2, 0), &p(1, 0), &p(3, 0)),
            SegmentContact::Overlap
        );
        assert_eq!(
            contact(&p(0, 0), &p(1, 0), &p(2, 0), &p(3, 0)),
            SegmentContact::Disjoint
        );
        assert_eq!(
            contact(&p(0, 0), &p(2, 0), &p(1, 0), &p(1, 5)),
            SegmentContact::Touch
        );
        assert_eq!(
            contact(&p(0, 0), &p(2, 0), &p(3, -1), &p(3, 1)),
            SegmentContact::Disjoint
        );
        assert!(overlap_at_shared(&p(0, 0), &p(1, 1), &p(3, 3)));
        assert!(!overlap_at_shared(&p(0, 0), &p(1, 1), &p(-3, -3)));
    }

    #[test]
    fn fractional_intersection() {
        let p = Point::int;
        let c = contact(&p(0, 0), &p(3, 1), &p(0, 1), &p(1, 0));
        assert_eq!(
            c,
            SegmentContact::Proper(Point::new(ratio(3, 4), ratio(1, 4)))
        );
    }

    #[test]
    fn point_json() {
        let p = Point::new(ratio(-3, 4), q(2));
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v, serde_json::json!({"x": ["-3", "4"], "y": ["2", "1"]}));
        assert_eq!(serde_json::from_value::<Point>(v).unwrap(), p);
    }

    #[test]
    fn dyadic() {
        assert_eq!(dyadic_below(&q(2)), q(1));
        assert_eq!(dyadic_below(&q(1)), ratio(1, 2));
        assert_eq!(dyadic_below(&ratio(1, 3)), ratio(1, 4));
    }
}
