//! Complex points, boundary points with a point at infinity, and real Möbius
//! self-maps of the upper half-plane.

use alloc::format;
use num_complex::Complex64;

use crate::{Error, Result};

/// A point of the closed upper half-plane.
pub type Point = Complex64;

/// A point of the extended real line `ℝ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(self) -> Option<f64> {
        match self {
            BoundaryPoint::Finite(x) => Some(x),
            BoundaryPoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }
}

impl From<f64> for BoundaryPoint {
    fn from(x: f64) -> Self {
        BoundaryPoint::Finite(x)
    }
}

/// `z ↦ (az + b)/(cz + d)` with real coefficients and `ad − bc > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MobiusMap {
    pub const IDENTITY: MobiusMap = MobiusMap { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    /// The inversion `z ↦ −1/z`.
    pub const INVERSION: MobiusMap = MobiusMap { a: 0.0, b: -1.0, c: 1.0, d: 0.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite Möbius coefficients ({a}, {b}, {c}, {d})"
            )));
        }
        if a * d - b * c <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "Möbius determinant {} is not positive",
                a * d - b * c
            )));
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn translation(x: f64) -> Self {
        MobiusMap { a: 1.0, b: x, c: 0.0, d: 1.0 }
    }

    /// `z ↦ rz + x` for `r > 0`.
    pub fn affine(r: f64, x: f64) -> Result<Self> {
        MobiusMap::new(r, x, 0.0, 1.0)
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Canonical map of ℍ onto itself sending `from` to 0 and `to` to ∞.
    ///
    /// The residual scaling is fixed as follows: for finite `a < b` the map is
    /// `(z − a)/(b − z)`, which sends the midpoint to 1; for finite `a > b` it
    /// is `(z − a)/(z − b)`, the mirror image of the previous case; for `b = ∞`
    /// it is `z − a` and for `a = ∞` it is `−1/(z − b)`.
    pub fn fixing(from: BoundaryPoint, to: BoundaryPoint) -> Result<Self> {
        use BoundaryPoint::*;
        match (from, to) {
            (Finite(a), Finite(b)) => {
                check_finite(a)?;
                check_finite(b)?;
                if a == b {
                    return Err(Error::InvalidInput(format!(
                        "cannot separate a boundary point from itself ({a})"
                    )));
                }
                if a < b {
                    Ok(MobiusMap { a: 1.0, b: -a, c: -1.0, d: b })
                } else {
                    Ok(MobiusMap { a: 1.0, b: -a, c: 1.0, d: -b })
                }
            }
            (Finite(a), Infinity) => {
                check_finite(a)?;
                Ok(MobiusMap::translation(-a))
            }
            (Infinity, Finite(b)) => {
                check_finite(b)?;
                Ok(MobiusMap { a: 0.0, b: -1.0, c: 1.0, d: -b })
            }
            (Infinity, Infinity) => Err(Error::InvalidInput(
                "cannot separate ∞ from itself".into(),
            )),
        }
    }

    pub fn apply(&self, z: Point) -> Point {
        if self.c == 0.0 {
            return (z * self.a + self.b) / self.d;
        }
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        match p {
            BoundaryPoint::Finite(x) => {
                let den = self.c * x + self.d;
                if den == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * x + self.b) / den)
                }
            }
            BoundaryPoint::Infinity => {
                if self.c == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        MobiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// True when the map is `z ↦ z + x`, which leaves half-plane capacity unchanged.
    pub fn is_translation(&self) -> bool {
        self.c == 0.0 && self.a == self.d && self.a != 0.0
    }
}

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("non-finite boundary point {x}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Point, b: Point, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn fixing_zero_one() {
        let m = MobiusMap::fixing(0.0.into(), 1.0.into()).unwrap();
        let z = Point::new(0.3, 0.7);
        assert!(close(m.apply(z), z / (Point::new(1.0, 0.0) - z), 1e-15));
        assert_eq!(m.apply_boundary(0.0.into()), BoundaryPoint::Finite(0.0));
        assert_eq!(m.apply_boundary(1.0.into()), BoundaryPoint::Infinity);
        assert_eq!(m.apply_boundary(0.5.into()), BoundaryPoint::Finite(1.0));
    }

    #[test]
    fn fixing_zero_infinity_is_identity() {
        let m = MobiusMap::fixing(0.0.into(), BoundaryPoint::Infinity).unwrap();
        let z = Point::new(3.0, 4.0);
        assert_eq!(m.apply(z), z);
    }

    #[test]
    fn fixing_infinity_zero_is_inversion() {
        let m = MobiusMap::fixing(BoundaryPoint::Infinity, 0.0.into()).unwrap();
        assert_eq!(m, MobiusMap::INVERSION);
        assert_eq!(m.apply_boundary(BoundaryPoint::Infinity), BoundaryPoint::Finite(0.0));
        assert_eq!(m.apply_boundary(0.0.into()), BoundaryPoint::Infinity);
        let z = Point::new(0.0, 2.0);
        assert!(close(m.apply(z), Point::new(0.0, 0.5), 1e-15));
    }

    #[test]
    fn fixing_same_point_fails() {
        assert!(MobiusMap::fixing(2.0.into(), 2.0.into()).is_err());
        assert!(MobiusMap::fixing(BoundaryPoint::Infinity, BoundaryPoint::Infinity).is_err());
    }

    #[test]
    fn apply_examples() {
        let m = MobiusMap::fixing(0.0.into(), 1.0.into()).unwrap();
        assert!(close(m.apply(Point::i()), Point::new(-0.5, 0.5), 1e-15));
        assert_eq!(MobiusMap::IDENTITY.apply(Point::new(3.0, 4.0)), Point::new(3.0, 4.0));
        assert_eq!(
            MobiusMap::INVERSION.apply_boundary(BoundaryPoint::Infinity),
            BoundaryPoint::Finite(0.0)
        );
    }

    #[test]
    fn descending_endpoints_keep_orientation() {
        let m = MobiusMap::fixing(1.0.into(), (-2.0).into()).unwrap();
        assert!(m.determinant() > 0.0);
        assert_eq!(m.apply_boundary(1.0.into()), BoundaryPoint::Finite(0.0));
        assert_eq!(m.apply_boundary((-2.0).into()), BoundaryPoint::Infinity);
        assert!(m.apply(Point::new(0.1, 0.2)).im > 0.0);
    }

    #[test]
    fn new_rejects_orientation_reversal() {
        assert!(MobiusMap::new(1.0, 0.0, 0.0, -1.0).is_err());
        assert!(MobiusMap::new(f64::NAN, 0.0, 0.0, 1.0).is_err());
    }

    fn endpoint() -> impl Strategy<Value = BoundaryPoint> {
        prop_oneof![
            9 => (-50.0..50.0f64).prop_map(BoundaryPoint::Finite),
            1 => Just(BoundaryPoint::Infinity),
        ]
    }

    proptest! {
        #[test]
        fn fixing_hits_zero_and_infinity(a in endpoint(), b in endpoint()) {
            prop_assume!(a != b);
            let m = MobiusMap::fixing(a, b).unwrap();
            prop_assert!(m.determinant() > 0.0);
            match m.apply_boundary(a) {
                BoundaryPoint::Finite(v) => {
                    let scale = a.finite().map_or(1.0, |x| 1.0 + x.abs());
                    prop_assert!(v.abs() <= 1e-12 * scale);
                }
                BoundaryPoint::Infinity => prop_assert!(false, "a mapped to ∞"),
            }
            prop_assert_eq!(m.apply_boundary(b), BoundaryPoint::Infinity);
        }

        #[test]
        fn upper_half_plane_is_preserved(a in endpoint(), b in endpoint(),
                                         re in -20.0..20.0f64, im in 1e-3..20.0f64) {
            prop_assume!(a != b);
            let m = MobiusMap::fixing(a, b).unwrap();
            prop_assert!(m.apply(Point::new(re, im)).im > 0.0);
        }

        #[test]
        fn composition_matches_matrix_product(a in endpoint(), b in endpoint(),
                                              c in endpoint(), d in endpoint(),
                                              re in -5.0..5.0f64, im in 0.1..5.0f64) {
            prop_assume!(a != b && c != d);
            let m1 = MobiusMap::fixing(a, b).unwrap();
            let m2 = MobiusMap::fixing(c, d).unwrap();
            let z = Point::new(re, im);
            let seq = m1.apply(m2.apply(z));
            let prod = m1.compose(&m2).apply(z);
            prop_assume!(seq.norm() < 1e6);
            prop_assert!((seq - prod).norm() <= 1e-8 * (1.0 + seq.norm()));
        }
    }
}
