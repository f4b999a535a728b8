//! Vertical-slit maps and their compositions.
//!
//! A slit of height `v` standing on the real point `u` is mapped out by
//! `z ↦ u + s(z − u)` with `s(w) = w·√(1 + v²/w²)`. The product form with the
//! principal square root picks the branch with `s(w) ≈ w` at infinity for every
//! `w` off the slit, so no branch bookkeeping is needed. The map expands as
//! `z + (v²/2)/z + …`, so the slit has half-plane capacity `v²/2` and advances
//! the `a_t = t` clock by `v²/4`.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::conformal::{BoundaryPoint, MobiusMap, Point};
use crate::{Error, Result};

/// Points closer than this to a slit are rejected.
pub const SLIT_TOLERANCE: f64 = 1e-10;

/// One vertical slit `{u + iy : 0 ≤ y ≤ v}` together with its mapping-out function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitElement {
    /// Base abscissa `u`, the driving value of this step.
    pub base: f64,
    /// Height `v > 0`.
    pub height: f64,
}

impl SlitElement {
    pub fn new(base: f64, height: f64) -> Result<Self> {
        if !base.is_finite() || !height.is_finite() || height <= 0.0 {
            return Err(Error::InvalidInput(alloc::format!(
                "slit needs finite base and positive height, got ({base}, {height})"
            )));
        }
        Ok(SlitElement { base, height })
    }

    /// Slit that advances the `a_t = t` clock by `dt`.
    pub fn from_duration(base: f64, dt: f64) -> Result<Self> {
        SlitElement::new(base, 2.0 * libm::sqrt(dt))
    }

    /// Half-plane capacity `v²/2`.
    pub fn hcap(&self) -> f64 {
        0.5 * self.height * self.height
    }

    /// Capacity time `v²/4` in the `a_t = t` clock.
    pub fn duration(&self) -> f64 {
        0.25 * self.height * self.height
    }

    pub fn tip(&self) -> Point {
        Point::new(self.base, self.height)
    }

    fn distance_to_slit(&self, z: Point) -> f64 {
        let dx = z.re - self.base;
        if z.im <= 0.0 {
            libm::hypot(dx, z.im)
        } else if z.im <= self.height {
            dx.abs()
        } else {
            libm::hypot(dx, z.im - self.height)
        }
    }

    /// Maps `z` out of the slit. Real points off the slit base stay real.
    pub fn apply(&self, z: Point) -> Result<Point> {
        if self.distance_to_slit(z) < SLIT_TOLERANCE * (1.0 + self.height) {
            return Err(Error::SingularPoint { re: z.re, im: z.im, base: self.base, height: self.height });
        }
        Ok(self.apply_unchecked(z))
    }

    #[inline]
    pub(crate) fn apply_unchecked(&self, z: Point) -> Point {
        let w = z - self.base;
        let v2 = self.height * self.height;
        let r = w * (Complex64::new(1.0, 0.0) + v2 / (w * w)).sqrt();
        // keep real inputs exactly real
        let im = if z.im == 0.0 { 0.0 } else { r.im.max(0.0) };
        Point::new(self.base + r.re, im)
    }

    /// Image of a real boundary point; the slit base itself is two-sided.
    pub fn apply_real(&self, x: f64) -> Result<f64> {
        let w = x - self.base;
        if w.abs() < SLIT_TOLERANCE * (1.0 + self.height) {
            return Err(Error::AmbiguousPrimeEnd(x));
        }
        Ok(self.base + w * libm::sqrt(1.0 + self.height * self.height / (w * w)))
    }

    /// Preimage of `w` in the closed upper half-plane minus the slit.
    ///
    /// The base `u` pulls back to the tip. Other real points inside
    /// `(u − v, u + v)` are prime ends on the two sides of the slit and give
    /// [`Error::AmbiguousPrimeEnd`].
    pub fn invert(&self, w: Point) -> Result<Point> {
        let x = w - self.base;
        if w.im == 0.0 {
            if x.re == 0.0 {
                return Ok(self.tip());
            }
            if x.re.abs() < self.height {
                return Err(Error::AmbiguousPrimeEnd(w.re));
            }
        }
        if w.im < 0.0 {
            return Err(Error::InvalidInput(alloc::format!(
                "cannot invert a slit map at a lower half-plane point {}+{}i",
                w.re, w.im
            )));
        }
        Ok(self.invert_unchecked(w))
    }

    #[inline]
    pub(crate) fn invert_unchecked(&self, w: Point) -> Point {
        let x = w - self.base;
        let v2 = self.height * self.height;
        let r = x * (Complex64::new(1.0, 0.0) - v2 / (x * x)).sqrt();
        Point::new(self.base + r.re, r.im.abs())
    }

    /// Inverse on a real point outside the collapsed interval.
    pub fn invert_real(&self, w: f64) -> Result<f64> {
        let x = w - self.base;
        if x.abs() <= self.height {
            return Err(Error::AmbiguousPrimeEnd(w));
        }
        Ok(self.base + x * libm::sqrt(1.0 - self.height * self.height / (x * x)))
    }
}

/// Ordered composition `post ∘ e_n ∘ … ∘ e_1 ∘ pre` of slit maps.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MapStack {
    pub pre: Option<MobiusMap>,
    pub elements: Vec<SlitElement>,
    pub post: Option<MobiusMap>,
}

impl MapStack {
    pub fn new() -> Self {
        MapStack::default()
    }

    pub fn from_elements(elements: Vec<SlitElement>) -> Self {
        MapStack { pre: None, elements, post: None }
    }

    pub fn with_pre(mut self, m: MobiusMap) -> Self {
        self.pre = Some(m);
        self
    }

    pub fn with_post(mut self, m: MobiusMap) -> Self {
        self.post = Some(m);
        self
    }

    pub fn push(&mut self, e: SlitElement) {
        self.elements.push(e);
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn apply(&self, z: Point) -> Result<Point> {
        let mut z = match &self.pre {
            Some(m) => m.apply(z),
            None => z,
        };
        for e in &self.elements {
            z = e.apply(z)?;
        }
        Ok(match &self.post {
            Some(m) => m.apply(z),
            None => z,
        })
    }

    /// Applies only the slit elements with index `from..`.
    pub fn apply_from(&self, from: usize, mut z: Point) -> Result<Point> {
        for e in &self.elements[from..] {
            z = e.apply(z)?;
        }
        Ok(z)
    }

    pub fn invert(&self, w: Point) -> Result<Point> {
        let mut w = match &self.post {
            Some(m) => m.inverse().apply(w),
            None => w,
        };
        for e in self.elements.iter().rev() {
            w = e.invert(w)?;
        }
        Ok(match &self.pre {
            Some(m) => m.inverse().apply(w),
            None => w,
        })
    }

    /// Image of a boundary point. Infinity is fixed by every slit map.
    pub fn apply_boundary(&self, p: BoundaryPoint) -> Result<BoundaryPoint> {
        let mut p = match &self.pre {
            Some(m) => m.apply_boundary(p),
            None => p,
        };
        if let BoundaryPoint::Finite(mut x) = p {
            for e in &self.elements {
                x = e.apply_real(x)?;
            }
            p = BoundaryPoint::Finite(x);
        }
        Ok(match &self.post {
            Some(m) => m.apply_boundary(p),
            None => p,
        })
    }

    /// Image of a finite real point under the slit elements only.
    pub fn apply_real(&self, mut x: f64) -> Result<f64> {
        for e in &self.elements {
            x = e.apply_real(x)?;
        }
        Ok(x)
    }

    /// Preimage of a real point under the slit elements only.
    pub fn invert_real(&self, mut w: f64) -> Result<f64> {
        for e in self.elements.iter().rev() {
            w = e.invert_real(w)?;
        }
        Ok(w)
    }

    /// Image of the tip of slit `index` under the elements that follow it.
    pub fn tip_image(&self, index: usize) -> Result<f64> {
        let e = self.elements.get(index).ok_or_else(|| {
            Error::InvalidInput(alloc::format!("no slit with index {index}"))
        })?;
        let mut x = e.base;
        for later in &self.elements[index + 1..] {
            x = later.apply_real(x)?;
        }
        Ok(x)
    }

    /// The tip of the last slit, pulled back to the original coordinates.
    pub fn last_tip(&self) -> Option<Result<Point>> {
        let last = self.elements.last()?;
        let n = self.elements.len();
        let mut z = last.tip();
        for e in self.elements[..n - 1].iter().rev() {
            z = match e.invert(z) {
                Ok(z) => z,
                Err(err) => return Some(Err(err)),
            };
        }
        Some(Ok(match &self.pre {
            Some(m) => m.inverse().apply(z),
            None => z,
        }))
    }

    /// `Σ v²/2` over the elements.
    pub fn hcap(&self) -> Result<f64> {
        let neutral = |m: &Option<MobiusMap>| m.is_none_or(|m| m.is_translation());
        if !neutral(&self.pre) || !neutral(&self.post) {
            return Err(Error::UnsupportedNormalization);
        }
        Ok(self.elements.iter().map(SlitElement::hcap).sum())
    }

    /// Total capacity time `Σ v²/4`, ignoring pre/post maps.
    pub fn duration(&self) -> f64 {
        self.elements.iter().map(SlitElement::duration).sum()
    }

    /// Driving value of the last slit, if any.
    pub fn final_driving(&self) -> Option<f64> {
        self.elements.last().map(|e| e.base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: Point, b: Point, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn imaginary_axis_maps_to_itself() {
        let e = SlitElement::new(0.0, 1.0).unwrap();
        let w = e.apply(Point::new(0.0, 2.0)).unwrap();
        assert!(close(w, Point::new(0.0, 3f64.sqrt()), 1e-15));
    }

    #[test]
    fn real_axis_arithmetic() {
        let e = SlitElement::new(0.0, 1.0).unwrap();
        let w = e.apply(Point::new(1.0, 0.0)).unwrap();
        assert!(close(w, Point::new(2f64.sqrt(), 0.0), 1e-15));
        assert_eq!(w.im, 0.0);
        assert!((e.apply_real(-1.0).unwrap() + 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn tip_maps_to_driving_value() {
        let e = SlitElement::new(3.0, 2.0).unwrap();
        let near = e.apply(Point::new(3.0, 2.0 + 1e-9)).unwrap();
        assert!((near - Point::new(3.0, 0.0)).norm() < 1e-3);
        assert_eq!(e.invert(Point::new(3.0, 0.0)).unwrap(), Point::new(3.0, 2.0));
    }

    #[test]
    fn points_on_the_slit_are_rejected() {
        let e = SlitElement::new(0.0, 1.0).unwrap();
        assert!(matches!(e.apply(Point::new(0.0, 0.5)), Err(Error::SingularPoint { .. })));
        assert!(matches!(e.apply(Point::new(1e-12, 1.0)), Err(Error::SingularPoint { .. })));
        assert!(e.apply(Point::new(1e-6, 0.5)).is_ok());
    }

    #[test]
    fn invert_examples() {
        let e = SlitElement::new(0.0, 1.0).unwrap();
        let z = e.invert(Point::new(0.0, 3f64.sqrt())).unwrap();
        assert!(close(z, Point::new(0.0, 2.0), 1e-15));
        assert_eq!(e.invert(Point::new(0.0, 0.0)).unwrap(), Point::new(0.0, 1.0));
        assert!(matches!(e.invert(Point::new(0.5, 0.0)), Err(Error::AmbiguousPrimeEnd(_))));
        assert!((e.invert(Point::new(2.0, 0.0)).unwrap().re - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn invert_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let e = SlitElement::new(rng.random_range(-2.0..2.0), rng.random_range(0.05..3.0)).unwrap();
            let z = Point::new(rng.random_range(-5.0..5.0), rng.random_range(0.01..5.0));
            if e.distance_to_slit(z) < 1e-3 {
                continue;
            }
            let back = e.invert(e.apply(z).unwrap()).unwrap();
            worst = worst.max((back - z).norm());
        }
        assert!(worst <= 1e-9, "worst round-trip error {worst}");
    }

    #[test]
    fn stack_basics() {
        let empty = MapStack::new();
        let z = Point::new(0.3, 0.4);
        assert_eq!(empty.apply(z).unwrap(), z);
        assert_eq!(empty.hcap().unwrap(), 0.0);

        let e = SlitElement::new(0.5, 0.7).unwrap();
        let one = MapStack::from_elements(vec![e]);
        assert_eq!(one.apply(z).unwrap(), e.apply(z).unwrap());

        let two = MapStack::from_elements(vec![SlitElement::new(0.0, 1.0).unwrap(); 2]);
        assert_eq!(two.hcap().unwrap(), 1.0);

        let mixed = MapStack::from_elements(vec![
            SlitElement::new(0.0, 1.0).unwrap(),
            SlitElement::new(4.0, 2.0).unwrap(),
        ]);
        assert_eq!(mixed.hcap().unwrap(), 2.5);
    }

    #[test]
    fn hcap_requires_neutral_normalization() {
        let s = MapStack::from_elements(vec![SlitElement::new(0.0, 1.0).unwrap()]);
        assert!(s.clone().with_pre(MobiusMap::translation(2.0)).hcap().is_ok());
        assert_eq!(
            s.with_post(MobiusMap::INVERSION).hcap(),
            Err(Error::UnsupportedNormalization)
        );
    }

    #[test]
    fn single_slit_hcap() {
        let h = 1.7;
        let s = MapStack::from_elements(vec![SlitElement::new(0.2, h).unwrap()]);
        assert_eq!(s.hcap().unwrap(), h * h / 2.0);
    }

    #[test]
    fn hydrodynamic_expansion() {
        let e = SlitElement::new(0.0, 1.0).unwrap();
        let z = Point::new(300.0, 400.0);
        let w = e.apply(z).unwrap();
        let expected = z + Complex64::new(0.5, 0.0) / z;
        assert!((w - expected).norm() < 1e-6);
    }

    #[test]
    fn last_tip_of_stack() {
        let s = MapStack::from_elements(vec![
            SlitElement::new(0.0, 1.0).unwrap(),
            SlitElement::new(0.0, 1.0).unwrap(),
        ]);
        // two stacked vertical slits at 0 form one slit of height √2
        let tip = s.last_tip().unwrap().unwrap();
        assert!(close(tip, Point::new(0.0, 2f64.sqrt()), 1e-14));
        assert_eq!(s.tip_image(1).unwrap(), 0.0);
    }

    fn slit() -> impl Strategy<Value = SlitElement> {
        (-1.0..1.0f64, 0.05..0.8f64).prop_map(|(u, v)| SlitElement::new(u, v).unwrap())
    }

    proptest! {
        #[test]
        fn stack_round_trip(elems in prop::collection::vec(slit(), 0..12),
                            re in -20.0..20.0f64, im in 3.0..20.0f64) {
            // points high above every slit are never near the hull
            let s = MapStack::from_elements(elems);
            let z = Point::new(re, im);
            let back = s.invert(s.apply(z).unwrap()).unwrap();
            prop_assert!((back - z).norm() <= 1e-8 * (1.0 + z.norm()));
        }

        #[test]
        fn scaling_multiplies_hcap_by_r_squared(elems in prop::collection::vec(slit(), 1..12),
                                                r in 0.1..10.0f64, x in -5.0..5.0f64) {
            let s = MapStack::from_elements(elems.clone());
            let scaled = MapStack::from_elements(
                elems.iter().map(|e| SlitElement::new(r * e.base + x, r * e.height).unwrap()).collect(),
            );
            let (h, hs) = (s.hcap().unwrap(), scaled.hcap().unwrap());
            prop_assert!((hs - r * r * h).abs() <= 1e-12 * hs);
        }

        #[test]
        fn image_stays_in_upper_half_plane(elems in prop::collection::vec(slit(), 0..12),
                                           re in -5.0..5.0f64, im in 2.0..10.0f64) {
            let s = MapStack::from_elements(elems);
            prop_assert!(s.apply(Point::new(re, im)).unwrap().im > 0.0);
        }
    }
}
