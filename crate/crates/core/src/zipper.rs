//! Chords, driving functions and the vertical-slit zipper.
//!
//! The zipper peels a polyline one vertex at a time: with `S` the composition
//! of the slits removed so far, the next vertex `z_k` is mapped to
//! `w = S(z_k)`, a slit of height `Im w` standing on `Re w` is appended to `S`,
//! and the sample `(t_k, λ_k) = (Σ v²/4, Re w)` is recorded.

use alloc::format;
use alloc::vec::Vec;

use crate::conformal::{BoundaryPoint, MobiusMap, Point};
use crate::slitstack::{MapStack, SlitElement};
use crate::{Error, Result};

/// Default closing tolerance as a fraction of `|start − end|`.
pub const DEFAULT_CLOSE_FRACTION: f64 = 1e-3;

/// Chords and segments with fewer vertices are flagged low-resolution.
pub const LOW_RESOLUTION_VERTICES: usize = 3;

/// An oriented polyline in ℍ joining two real points.
#[derive(Debug, Clone, PartialEq)]
pub struct Chord {
    pub start: f64,
    pub end: f64,
    /// Interior vertices, from `start` towards `end`.
    pub vertices: Vec<Point>,
}

impl Chord {
    /// Validates the vertex list and the polyline's simplicity.
    pub fn new(start: f64, end: f64, vertices: Vec<Point>) -> Result<Self> {
        if !start.is_finite() || !end.is_finite() {
            return Err(Error::Validation("chord endpoints must be finite".into()));
        }
        if start == end {
            return Err(Error::Validation(format!("chord endpoints coincide at {start}")));
        }
        check_vertices(&vertices)?;
        let mut path = Vec::with_capacity(vertices.len() + 2);
        path.push(Point::new(start, 0.0));
        path.extend_from_slice(&vertices);
        path.push(Point::new(end, 0.0));
        check_simple(&path)?;
        Ok(Chord { start, end, vertices })
    }

    /// Same chord traversed from `end` to `start`.
    pub fn reversed(&self) -> Chord {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Chord { start: self.end, end: self.start, vertices }
    }

    /// Reflection `z ↦ −z̄`, which keeps the orientation of ℍ's boundary reversed
    /// and the chord's direction of travel.
    pub fn mirrored(&self) -> Chord {
        Chord {
            start: -self.start,
            end: -self.end,
            vertices: self.vertices.iter().map(|z| Point::new(-z.re, z.im)).collect(),
        }
    }

    /// Image under `z ↦ rz + x` with `r > 0`.
    pub fn scaled(&self, r: f64, x: f64) -> Chord {
        Chord {
            start: r * self.start + x,
            end: r * self.end + x,
            vertices: self.vertices.iter().map(|z| z * r + x).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Largest distance between two points of the closed polyline.
    pub fn diameter(&self) -> f64 {
        diameter(&self.path())
    }

    /// Vertices with both endpoints attached.
    pub fn path(&self) -> Vec<Point> {
        let mut path = Vec::with_capacity(self.vertices.len() + 2);
        path.push(Point::new(self.start, 0.0));
        path.extend_from_slice(&self.vertices);
        path.push(Point::new(self.end, 0.0));
        path
    }

    /// Distance from the last interior vertex to `end`.
    pub fn closing_gap(&self) -> f64 {
        self.vertices
            .last()
            .map_or(f64::INFINITY, |z| (z - Point::new(self.end, 0.0)).norm())
    }

    pub fn as_segment(&self) -> CurveSegment {
        CurveSegment { base: self.start, vertices: self.vertices.clone() }
    }
}

/// An open curve growing from a real base point; the last vertex is the tip.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSegment {
    pub base: f64,
    pub vertices: Vec<Point>,
}

impl CurveSegment {
    pub fn new(base: f64, vertices: Vec<Point>) -> Result<Self> {
        if !base.is_finite() {
            return Err(Error::Validation("segment base must be finite".into()));
        }
        if !vertices.is_empty() {
            check_vertices(&vertices)?;
            let mut path = Vec::with_capacity(vertices.len() + 1);
            path.push(Point::new(base, 0.0));
            path.extend_from_slice(&vertices);
            check_simple(&path)?;
        }
        Ok(CurveSegment { base, vertices })
    }

    pub fn empty(base: f64) -> Self {
        CurveSegment { base, vertices: Vec::new() }
    }

    pub fn tip(&self) -> Option<Point> {
        self.vertices.last().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }
}

fn check_vertices(vertices: &[Point]) -> Result<()> {
    if vertices.is_empty() {
        return Err(Error::Validation("a chord needs at least one interior vertex".into()));
    }
    for (i, z) in vertices.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Geometry { index: i, reason: "not finite".into() });
        }
        if z.im <= 0.0 {
            return Err(Error::Geometry {
                index: i,
                reason: format!("{}+{}i is not in the upper half-plane", z.re, z.im),
            });
        }
    }
    Ok(())
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.re >= a.re.min(b.re) && p.re <= a.re.max(b.re) && p.im >= a.im.min(b.im) && p.im <= a.im.max(b.im)
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Fails if two non-adjacent segments of the polyline meet.
pub fn check_simple(path: &[Point]) -> Result<()> {
    if path.len() < 4 {
        return Ok(());
    }
    let boxes: Vec<[f64; 4]> = path
        .windows(2)
        .map(|w| {
            [w[0].re.min(w[1].re), w[0].re.max(w[1].re), w[0].im.min(w[1].im), w[0].im.max(w[1].im)]
        })
        .collect();
    let nseg = boxes.len();
    for i in 0..nseg {
        let bi = boxes[i];
        for j in i + 2..nseg {
            let bj = boxes[j];
            if bj[0] > bi[1] || bj[1] < bi[0] || bj[2] > bi[3] || bj[3] < bi[2] {
                continue;
            }
            if segments_intersect(path[i], path[i + 1], path[j], path[j + 1]) {
                return Err(Error::Validation(format!(
                    "polyline is not simple: segment {i} meets segment {j}"
                )));
            }
        }
    }
    Ok(())
}

pub(crate) fn diameter(points: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Capacity-parameterized samples `(t_i, λ_i)` with `t_0 = 0`, read as a
/// piecewise-linear function of `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct DrivingFunction {
    samples: Vec<(f64, f64)>,
}

impl DrivingFunction {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        let Some(&(t0, _)) = samples.first() else {
            return Err(Error::Validation("a driving function needs at least one sample".into()));
        };
        if t0 != 0.0 {
            return Err(Error::Validation(format!("first sample must be at t = 0, got {t0}")));
        }
        for (i, w) in samples.windows(2).enumerate() {
            if !w[1].0.is_finite() || !w[1].1.is_finite() {
                return Err(Error::Validation(format!("sample {} is not finite", i + 1)));
            }
            if w[1].0 <= w[0].0 {
                return Err(Error::Validation(format!(
                    "sample times must increase strictly: t[{}] = {} after t[{}] = {}",
                    i + 1,
                    w[1].0,
                    i,
                    w[0].0
                )));
            }
        }
        if !samples[0].1.is_finite() {
            return Err(Error::Validation("sample 0 is not finite".into()));
        }
        Ok(DrivingFunction { samples })
    }

    /// Samples a function on `n` equal steps of `[0, total]`.
    pub fn from_fn(total: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n == 0 || !(total > 0.0) {
            return Err(Error::Validation("need n ≥ 1 and a positive time span".into()));
        }
        let samples = (0..=n)
            .map(|i| {
                let t = if i == n { total } else { total * i as f64 / n as f64 };
                (t, f(t))
            })
            .collect();
        DrivingFunction::new(samples)
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn total_time(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.0)
    }

    pub fn start_value(&self) -> f64 {
        self.samples[0].1
    }

    pub fn final_value(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.1)
    }

    /// Index `k` with `t_k ≤ t < t_{k+1}` (clamped to the last interval).
    fn interval(&self, t: f64) -> usize {
        let k = self.samples.partition_point(|s| s.0 <= t);
        k.saturating_sub(1).min(self.samples.len().saturating_sub(2))
    }

    /// Piecewise-linear value at `t`, clamped to the sampled range.
    pub fn value_at(&self, t: f64) -> f64 {
        if self.samples.len() == 1 || t <= 0.0 {
            return self.samples[0].1;
        }
        if t >= self.total_time() {
            return self.final_value();
        }
        let k = self.interval(t);
        let (t0, l0) = self.samples[k];
        let (t1, l1) = self.samples[k + 1];
        l0 + (l1 - l0) * (t - t0) / (t1 - t0)
    }

    /// Restriction to `[0, t]`, closing with the interpolated value at `t`.
    pub fn truncate(&self, t: f64) -> Result<DrivingFunction> {
        if !(t > 0.0) || t > self.total_time() {
            return Err(Error::Validation(format!(
                "truncation time {t} outside (0, {}]",
                self.total_time()
            )));
        }
        let mut samples: Vec<(f64, f64)> =
            self.samples.iter().copied().take_while(|s| s.0 < t).collect();
        samples.push((t, self.value_at(t)));
        Ok(DrivingFunction { samples })
    }

    /// Restriction to `[from, to]`, shifted to start at time 0.
    pub fn window(&self, from: f64, to: f64) -> Result<DrivingFunction> {
        if !(from >= 0.0 && to > from && to <= self.total_time()) {
            return Err(Error::Validation(format!("bad window [{from}, {to}]")));
        }
        let mut samples = alloc::vec![(0.0, self.value_at(from))];
        samples.extend(
            self.samples.iter().filter(|s| s.0 > from && s.0 < to).map(|&(t, l)| (t - from, l)),
        );
        samples.push((to - from, self.value_at(to)));
        Ok(DrivingFunction { samples })
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> DrivingFunction {
        DrivingFunction { samples: self.samples.iter().map(|&(t, l)| (t, f(l))).collect() }
    }

    /// Slit stack of the discrete model: on each interval `(t_k, t_{k+1}]` a
    /// vertical slit on `λ_{k+1}` advancing the clock by `t_{k+1} − t_k`.
    pub fn slit_stack(&self) -> MapStack {
        MapStack::from_elements(
            self.samples
                .windows(2)
                .map(|w| SlitElement { base: w[1].1, height: 2.0 * libm::sqrt(w[1].0 - w[0].0) })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipOptions {
    /// Stop once an image vertex has modulus above this value.
    pub stop_modulus: Option<f64>,
    /// Closing tolerance for chords as a fraction of `|start − end|`.
    pub close_fraction: f64,
}

impl Default for ZipOptions {
    fn default() -> Self {
        ZipOptions { stop_modulus: None, close_fraction: DEFAULT_CLOSE_FRACTION }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZipperResult {
    pub driving: DrivingFunction,
    pub stack: MapStack,
    pub total_t: f64,
    /// Equal to `2 · total_t`.
    pub total_hcap: f64,
    /// Number of vertices turned into slits.
    pub consumed: usize,
    /// Capacity bound `(diam of the unzipped remainder)²` for chords, 0 for segments.
    pub tail_hcap_bound: f64,
    pub low_resolution: bool,
}

/// Zips the polyline `base → vertices[0] → …`.
pub fn compute_driving(segment: &CurveSegment, opts: &ZipOptions) -> Result<ZipperResult> {
    zip_points(segment.base, &segment.vertices, opts, None)
}

/// Zips a chord up to its last interior vertex; the gap to `end` is left as a tail.
pub fn zip_chord(chord: &Chord, opts: &ZipOptions) -> Result<ZipperResult> {
    let gap = chord.closing_gap();
    let mut result = zip_points(chord.start, &chord.vertices, opts, None)?;
    result.tail_hcap_bound = gap * gap;
    if gap > opts.close_fraction * (chord.start - chord.end).abs() {
        result.low_resolution = true;
    }
    Ok(result)
}

/// Zips `vertices` after mapping them through `pre`; the base point is mapped too.
pub(crate) fn zip_points(
    base: f64,
    vertices: &[Point],
    opts: &ZipOptions,
    pre: Option<&MobiusMap>,
) -> Result<ZipperResult> {
    let (base, mut images): (f64, Vec<Point>) = match pre {
        Some(m) => {
            let b = match m.apply_boundary(BoundaryPoint::Finite(base)) {
                BoundaryPoint::Finite(b) => b,
                BoundaryPoint::Infinity => {
                    return Err(Error::InvalidInput("base point mapped to infinity".into()))
                }
            };
            (b, vertices.iter().map(|&z| m.apply(z)).collect())
        }
        None => (base, vertices.to_vec()),
    };
    let mut samples = Vec::with_capacity(images.len() + 1);
    samples.push((0.0, base));
    let mut stack = MapStack::new();
    let mut t = 0.0;
    let n = images.len();
    for k in 0..n {
        let w = images[k];
        if let Some(r) = opts.stop_modulus {
            if w.norm() > r {
                break;
            }
        }
        if !(w.im > 0.0) || !w.re.is_finite() {
            return Err(Error::Geometry {
                index: k,
                reason: format!("image {}+{}i is not in the upper half-plane", w.re, w.im),
            });
        }
        let e = SlitElement { base: w.re, height: w.im };
        let t_next = t + e.duration();
        if !(t_next > t) {
            return Err(Error::Geometry {
                index: k,
                reason: format!("capacity increment {} vanished in rounding", e.duration()),
            });
        }
        t = t_next;
        samples.push((t, w.re));
        stack.push(e);
        for (j, z) in images.iter_mut().enumerate().skip(k + 1) {
            *z = e.apply(*z).map_err(|_| Error::Geometry {
                index: j,
                reason: format!("vertex lies on the slit of vertex {k}"),
            })?;
        }
    }
    let consumed = stack.len();
    Ok(ZipperResult {
        driving: DrivingFunction { samples },
        stack,
        total_t: t,
        total_hcap: 2.0 * t,
        consumed,
        tail_hcap_bound: 0.0,
        low_resolution: consumed < LOW_RESOLUTION_VERTICES,
    })
}

/// Uniform samples of the half-circle on `[a, b]`, endpoints excluded, traversed from `a`.
pub fn half_circle(a: f64, b: f64, n: usize) -> Vec<Point> {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a).abs();
    (1..=n)
        .map(|j| {
            let s = j as f64 / (n + 1) as f64;
            let theta = if a < b { core::f64::consts::PI * (1.0 - s) } else { core::f64::consts::PI * s };
            Point::new(c + r * libm::cos(theta), r * libm::sin(theta))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn vertical(h: f64, n: usize) -> CurveSegment {
        CurveSegment::new(0.0, (1..=n).map(|k| Point::new(0.0, h * k as f64 / n as f64)).collect()).unwrap()
    }

    #[test]
    fn single_vertex_is_one_slit() {
        let h = 1.3;
        let r = compute_driving(&CurveSegment::new(0.0, vec![Point::new(0.0, h)]).unwrap(), &ZipOptions::default())
            .unwrap();
        assert_eq!(r.driving.samples(), &[(0.0, 0.0), (h * h / 4.0, 0.0)]);
        assert!((r.total_hcap - h * h / 2.0).abs() < 1e-15);
        assert!(r.low_resolution);
    }

    #[test]
    fn subdivided_vertical_slit_keeps_zero_driving() {
        let r = compute_driving(&vertical(2.0, 50), &ZipOptions::default()).unwrap();
        assert!(r.driving.samples().iter().all(|s| s.1.abs() < 1e-12));
        assert!((r.total_hcap - 2.0).abs() < 1e-12);
        assert!(!r.low_resolution);
    }

    #[test]
    fn half_circle_capacity() {
        let chord = Chord::new(-1.0, 1.0, half_circle(-1.0, 1.0, 200)).unwrap();
        let r = zip_chord(&chord, &ZipOptions::default()).unwrap();
        assert!((r.total_hcap - 1.0).abs() <= 0.02, "hcap {}", r.total_hcap);
        assert_eq!(r.total_hcap, r.stack.hcap().unwrap());
        assert_eq!(r.consumed, 200);
        // the uniform-angle sampling leaves a gap of about π/201 at the end
        assert!(r.low_resolution);
    }

    #[test]
    fn half_circle_orientation() {
        let pts = half_circle(-1.0, 1.0, 5);
        let angles: Vec<f64> = pts.iter().map(|z| z.arg()).collect();
        for (j, a) in angles.iter().enumerate() {
            let expected = core::f64::consts::PI * (5 - j) as f64 / 6.0;
            assert!((a - expected).abs() < 1e-12);
            assert!((pts[j].norm() - 1.0).abs() < 1e-15);
        }
        let back = half_circle(1.0, -1.0, 5);
        assert!((back[0] - pts[4]).norm() < 1e-15);
    }

    #[test]
    fn chord_validation() {
        assert!(Chord::new(0.0, 0.0, vec![Point::new(0.0, 1.0)]).is_err());
        assert!(Chord::new(0.0, 1.0, vec![]).is_err());
        assert!(Chord::new(0.0, 1.0, vec![Point::new(0.5, -1.0)]).is_err());
        // figure-eight crossing
        let crossing = vec![Point::new(0.0, 1.0), Point::new(1.0, 2.0), Point::new(1.0, 1.0), Point::new(0.0, 2.0)];
        assert!(matches!(Chord::new(-1.0, 2.0, crossing), Err(Error::Validation(_))));
    }

    #[test]
    fn zipper_rejects_vertex_below_hull() {
        // second vertex hidden under a wide first slit
        let seg = CurveSegment { base: 0.0, vertices: vec![Point::new(0.0, 1.0), Point::new(0.0, 0.5)] };
        assert!(matches!(compute_driving(&seg, &ZipOptions::default()), Err(Error::Geometry { .. })));
    }

    #[test]
    fn driving_validation() {
        assert!(DrivingFunction::new(vec![(0.0, 0.0), (0.5, 1.0), (0.5, 2.0)]).is_err());
        assert!(DrivingFunction::new(vec![(0.1, 0.0)]).is_err());
        assert!(DrivingFunction::new(vec![]).is_err());
    }

    #[test]
    fn truncate_and_window() {
        let d = DrivingFunction::new(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 3.0)]).unwrap();
        assert_eq!(d.truncate(1.5).unwrap().samples(), &[(0.0, 0.0), (1.0, 1.0), (1.5, 2.0)]);
        assert_eq!(d.truncate(1.0).unwrap().samples(), &[(0.0, 0.0), (1.0, 1.0)]);
        assert!(d.truncate(2.5).is_err());
        assert_eq!(d.window(0.5, 1.5).unwrap().samples(), &[(0.0, 0.5), (0.5, 1.0), (1.0, 2.0)]);
    }

    fn wiggle() -> impl Strategy<Value = Chord> {
        (0.0..0.6f64, 1.0..4.0f64, 60usize..120).prop_map(|(amp, freq, n)| {
            let pts = half_circle(-1.0, 1.0, n)
                .into_iter()
                .map(|z| {
                    let r = 1.0 + amp * 0.2 * libm::sin(freq * z.arg());
                    z * r
                })
                .collect();
            Chord::new(-1.0, 1.0, pts).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn capacity_is_monotone(chord in wiggle()) {
            let r = zip_chord(&chord, &ZipOptions::default()).unwrap();
            for w in r.driving.samples().windows(2) {
                prop_assert!(w[1].0 > w[0].0);
            }
        }

        #[test]
        fn translation_shifts_driving(chord in wiggle(), x in -10.0..10.0f64) {
            let a = zip_chord(&chord, &ZipOptions::default()).unwrap();
            let b = zip_chord(&chord.scaled(1.0, x), &ZipOptions::default()).unwrap();
            for (p, q) in a.driving.samples().iter().zip(b.driving.samples()) {
                prop_assert!((q.1 - p.1 - x).abs() <= 1e-9 * (1.0 + x.abs()));
                prop_assert!((q.0 - p.0).abs() <= 1e-9 * p.0.max(1e-300));
            }
        }

        #[test]
        fn scaling_covariance(chord in wiggle(), r in 0.2..5.0f64) {
            let a = zip_chord(&chord, &ZipOptions::default()).unwrap();
            let b = zip_chord(&chord.scaled(r, 0.0), &ZipOptions::default()).unwrap();
            for (p, q) in a.driving.samples().iter().zip(b.driving.samples()) {
                prop_assert!((q.1 - r * p.1).abs() <= 1e-9 * r);
                prop_assert!((q.0 - r * r * p.0).abs() <= 1e-9 * r * r * p.0.max(1e-300));
            }
        }

        #[test]
        fn reflection_negates_driving(chord in wiggle()) {
            let a = zip_chord(&chord, &ZipOptions::default()).unwrap();
            let b = zip_chord(&chord.mirrored(), &ZipOptions::default()).unwrap();
            for (p, q) in a.driving.samples().iter().zip(b.driving.samples()) {
                prop_assert!((q.1 + p.1).abs() <= 1e-12);
                prop_assert!((q.0 - p.0).abs() <= 1e-12 * p.0.max(1e-300));
            }
        }
    }
}
