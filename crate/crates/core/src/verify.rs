//! Property checks for the capacity identities, the mapping-out estimates,
//! the energy cone and the diameter bounds, plus the named test chords they
//! run on.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conformal::{BoundaryPoint, MobiusMap, Point};
use crate::energy::{chord_energy, partial_energy, EnergyOptions, Target};
use crate::slitstack::MapStack;
use crate::surgery::{chord_from_driving, commutation_defect, far_field, hyperbolic_geodesic, GeodesicSpec, PrimeEnd};
use crate::tracer::{trace_curve, TraceOptions};
use crate::zipper::{compute_driving, half_circle, zip_chord, zip_points, Chord, CurveSegment, DrivingFunction, ZipOptions};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub relation: Relation,
    pub bound: f64,
    /// Enough of the input to replay the check.
    pub witness: String,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, observed: f64, relation: Relation, bound: f64, witness: impl Into<String>) -> Self {
        let passed = match relation {
            Relation::AtMost => observed <= bound,
            Relation::AtLeast => observed >= bound,
        };
        CheckResult { name: name.into(), passed, observed, relation, bound, witness: witness.into() }
    }

    pub fn at_most(name: impl Into<String>, observed: f64, bound: f64, witness: impl Into<String>) -> Self {
        Self::new(name, observed, Relation::AtMost, bound, witness)
    }

    pub fn at_least(name: impl Into<String>, observed: f64, bound: f64, witness: impl Into<String>) -> Self {
        Self::new(name, observed, Relation::AtLeast, bound, witness)
    }

    /// The group is the part of the name before the first `.`.
    pub fn group(&self) -> &str {
        self.name.split('.').next().unwrap_or("")
    }
}

fn hcap_of(chord: &Chord) -> Result<f64> {
    Ok(zip_chord(chord, &ZipOptions::default())?.total_hcap)
}

fn max_radius(chord: &Chord, reference: f64) -> f64 {
    chord.path().iter().map(|z| (z - reference).norm()).fold(0.0, f64::max)
}

/// Largest distance between the mapping-out functions of two chords on the
/// semicircle `|z − ref| = radius`, `ref` the midpoint of the shared endpoints.
pub fn map_distance(a: &Chord, b: &Chord, radius: f64, n: usize) -> Result<f64> {
    if n < 16 {
        return Err(Error::InvalidInput(format!("map_distance needs at least 16 points, got {n}")));
    }
    let same = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + x.abs());
    let shared = (same(a.start, b.start) && same(a.end, b.end)) || (same(a.start, b.end) && same(a.end, b.start));
    if !shared {
        return Err(Error::Validation("the chords do not share their endpoints".into()));
    }
    let reference = 0.5 * (a.start + a.end);
    let reach = max_radius(a, reference).max(max_radius(b, reference));
    if !(reach < 0.5 * radius) {
        return Err(Error::Validation(format!("hull radius {reach} is not below R/2 = {}", 0.5 * radius)));
    }
    let za = zip_chord(a, &ZipOptions::default())?.stack;
    let zb = zip_chord(b, &ZipOptions::default())?.stack;
    stack_distance(&za, &zb, &far_field(reference, radius, n))
}

fn stack_distance(a: &MapStack, b: &MapStack, points: &[Point]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &z in points {
        worst = worst.max((a.apply(z)? - b.apply(z)?).norm());
    }
    Ok(worst)
}

/// The half-circle from `a` to `b` as a chord.
pub fn geodesic_chord(a: f64, b: f64, n: usize) -> Result<Chord> {
    Chord::new(a, b, half_circle(a, b, n))
}

/// Chord of `driving` on `[0, total]`: three quarters of the `n` vertices are
/// traced, the rest close it along the hyperbolic geodesic to the point one
/// unit right of the base's image.
pub fn chord_of(total: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Chord> {
    let traced = 3 * n / 4;
    if traced < 1 || n - traced < 3 {
        return Err(Error::InvalidInput(format!("{n} vertices are too few for a driving chord")));
    }
    let driving = DrivingFunction::from_fn(total, traced, f)?;
    chord_from_driving(&driving, traced, 1.0, &GeodesicSpec::new(n - traced)?)
}

/// The chord generated by `sin(4t)` on `[0, 1]`.
pub fn g1(n: usize) -> Result<Chord> {
    chord_of(1.0, n, |t| libm::sin(4.0 * t))
}

/// The chord generated by `3t² − 2t` on `[0, 1]`.
pub fn polynomial_chord(n: usize) -> Result<Chord> {
    chord_of(1.0, n, |t| 3.0 * t * t - 2.0 * t)
}

pub const NAMED_CHORDS: [&str; 5] = ["geodesic", "g1", "poly", "g1-mirror", "poly-mirror"];

pub fn named_chord(name: &str, n: usize) -> Result<Chord> {
    match name {
        "geodesic" => geodesic_chord(-1.0, 1.0, n),
        "g1" => g1(n),
        "poly" => polynomial_chord(n),
        "g1-mirror" => Ok(g1(n)?.mirrored()),
        "poly-mirror" => Ok(polynomial_chord(n)?.mirrored()),
        other => Err(Error::InvalidInput(format!("unknown chord name {other:?}"))),
    }
}

/// The named chords at `n` vertices.
pub fn named_suite(n: usize) -> Result<Vec<(String, Chord)>> {
    NAMED_CHORDS.iter().map(|&name| Ok((String::from(name), named_chord(name, n)?))).collect()
}

/// `count` chords of drivings `a sin(wt) + ct` on `[0, 1]` with random
/// coefficients drawn from `seed`, each with `n` vertices.
pub fn random_chords(seed: u64, count: usize, n: usize) -> Result<Vec<(String, Chord)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let (a, w, c) = (rng.random_range(0.2..1.5), rng.random_range(1.0..6.0), rng.random_range(-1.0..1.0));
        let chord = chord_of(1.0, n, move |t| a * libm::sin(w * t) + c * t)?;
        out.push((format!("random{i}(a={a:.17e},w={w:.17e},c={c:.17e})"), chord));
    }
    Ok(out)
}

/// Named chords at 800 vertices plus three random chords at 400 drawn from `seed`.
pub fn default_suite(seed: u64) -> Result<Vec<(String, Chord)>> {
    let mut suite = named_suite(800)?;
    suite.extend(random_chords(seed, 3, 400)?);
    Ok(suite)
}

/// Scaling, additivity, subadditivity, monotonicity and the diameter and
/// height bounds of half-plane capacity.
pub fn check_hcap_identities(suite: &[(String, Chord)]) -> Result<Vec<CheckResult>> {
    if suite.is_empty() {
        return Err(Error::InvalidInput("empty suite".into()));
    }
    let mut out = Vec::new();
    for (name, chord) in suite {
        let hcap = hcap_of(chord)?;
        let diam = chord.diameter();
        let (r, x) = (3.0, -0.7);
        let scaled = hcap_of(&chord.scaled(r, x))?;
        out.push(CheckResult::at_most(
            "hcap.scaling",
            (scaled / (r * r * hcap) - 1.0).abs(),
            1e-12,
            format!("{name} r={r} x={x}"),
        ));
        out.push(CheckResult::at_most("hcap.diameter", hcap, diam * diam, name.clone()));
        let top = chord.vertices.iter().map(|z| z.im).fold(0.0, f64::max);
        out.push(CheckResult::at_least("hcap.height", hcap, 0.5 * top * top, name.clone()));

        // a vertical slit to the right of the chord
        let base = chord.start.max(chord.end) + 0.25 * diam;
        let height = 0.5 * diam;
        let slit: Vec<Point> = (1..=64).map(|j| Point::new(base, height * j as f64 / 64.0)).collect();
        let k1 = zip_chord(chord, &ZipOptions::default())?;
        let k2 = zip_points(base, &slit, &ZipOptions::default(), None)?;
        let k2_after = {
            let b = k1.stack.apply_real(base)?;
            let images = slit.iter().map(|&z| k1.stack.apply(z)).collect::<Result<Vec<_>>>()?;
            zip_points(b, &images, &ZipOptions::default(), None)?.total_hcap
        };
        let k1_after = {
            let b = k2.stack.apply_real(chord.start)?;
            let images = chord.vertices.iter().map(|&z| k2.stack.apply(z)).collect::<Result<Vec<_>>>()?;
            zip_points(b, &images, &ZipOptions::default(), None)?.total_hcap
        };
        let union_a = k1.total_hcap + k2_after;
        let union_b = k2.total_hcap + k1_after;
        out.push(CheckResult::at_most(
            "hcap.additivity",
            (union_a - union_b).abs() / union_a,
            0.01,
            format!("{name} + slit({base}, {height})"),
        ));
        let union = 0.5 * (union_a + union_b);
        out.push(CheckResult::at_most(
            "hcap.subadditivity",
            union / (k1.total_hcap + k2.total_hcap),
            1.01,
            format!("{name} + slit({base}, {height})"),
        ));
        out.push(CheckResult::at_most(
            "hcap.monotonicity",
            k1.total_hcap.max(k2.total_hcap) / union,
            1.01,
            format!("{name} + slit({base}, {height})"),
        ));
    }
    for h in [0.5, 2.0, 7.0] {
        let slit: Vec<Point> = (1..=50).map(|j| Point::new(1.0, h * j as f64 / 50.0)).collect();
        let hcap = zip_points(1.0, &slit, &ZipOptions::default(), None)?.total_hcap;
        out.push(CheckResult::at_most(
            "hcap.height_equality",
            (hcap / (0.5 * h * h) - 1.0).abs(),
            1e-12,
            format!("vertical slit height {h}"),
        ));
    }
    let hcap = hcap_of(&geodesic_chord(-1.0, 1.0, 200)?)?;
    out.push(CheckResult::at_most("hcap.half_disk", (hcap - 1.0).abs(), 0.02, "half-circle radius 1, n=200"));
    Ok(out)
}

/// A random hull: a traced random driving, a vertical slit, or a half-circle chord.
fn random_hull(rng: &mut ChaCha8Rng) -> Result<(Vec<Point>, MapStack, String)> {
    let x = rng.random_range(-2.0..2.0);
    match rng.random_range(0..3) {
        0 => {
            let (a, w, total) = (rng.random_range(-2.0..2.0), rng.random_range(0.5..8.0), rng.random_range(0.05..1.0));
            let d = DrivingFunction::from_fn(total, 40, |t| x + a * libm::sin(w * t))?;
            let c = trace_curve(&d, &TraceOptions::exact())?;
            let mut pts = vec![Point::new(x, 0.0)];
            pts.extend_from_slice(&c.vertices);
            Ok((pts, c.stack, format!("trace x={x} a={a} w={w} T={total}")))
        }
        1 => {
            let h = rng.random_range(0.05..2.0);
            let slit: Vec<Point> = (0..=8).map(|j| Point::new(x, h * j as f64 / 8.0)).collect();
            let stack = zip_points(x, &slit[1..], &ZipOptions::default(), None)?.stack;
            Ok((slit, stack, format!("slit x={x} h={h}")))
        }
        _ => {
            let r = rng.random_range(0.1..1.5);
            let chord = geodesic_chord(x - r, x + r, 60)?;
            let stack = zip_chord(&chord, &ZipOptions::default())?.stack;
            Ok((chord.path(), stack, format!("half-circle x={x} r={r}")))
        }
    }
}

fn diameter(pts: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

fn distance_to_polyline(z: Point, pts: &[Point]) -> f64 {
    pts.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let ab = b - a;
            let len2 = ab.norm_sqr();
            let s = if len2 > 0.0 { (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0) } else { 0.0 };
            (z - (a + ab * s)).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// `|g_K(z) − z| ≤ 3 diam(K)` on `hulls × points` random pairs, the far-field
/// expansion bound with ceiling `c ≤ 10`, and the comparison bound for pairs
/// of equal-capacity vertical slits.
pub fn check_map_bound(seed: u64, hulls: usize, points: usize) -> Result<Vec<CheckResult>> {
    const CEILING: f64 = 10.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let (mut worst_near, mut near_witness, mut violations, mut pairs) = (0.0f64, String::new(), 0usize, 0usize);
    let (mut worst_far, mut far_witness) = (0.0f64, String::new());
    for _ in 0..hulls {
        let (pts, stack, label) = random_hull(&mut rng)?;
        let diam = diameter(&pts);
        let hcap = stack.hcap()?;
        let x = pts[0].re;
        let rad = pts.iter().map(|z| (z - x).norm()).fold(0.0, f64::max);
        let mut taken = 0;
        while taken < points {
            let z = Point::new(x + rng.random_range(-3.0..3.0) * diam, rng.random_range(0.0..3.0) * diam);
            if !(z.im > 0.0) || distance_to_polyline(z, &pts) < 0.05 * diam {
                continue;
            }
            taken += 1;
            let g = match stack.apply(z) {
                Ok(g) => g,
                Err(_) => continue,
            };
            pairs += 1;
            let ratio = (g - z).norm() / diam;
            if ratio > 3.0 {
                violations += 1;
            }
            if ratio > worst_near {
                worst_near = ratio;
                near_witness = format!("{label} z={}{:+}i", z.re, z.im);
            }
        }
        for j in 0..16 {
            let theta = PI * (j as f64 + 0.5) / 16.0;
            for scale in [2.0, 5.0, 50.0] {
                let w = Point::from_polar(scale * rad, theta);
                let z = w + x;
                let g = stack.apply(z)?;
                let c = (g - z - hcap / w).norm() * w.norm_sqr() / (rad * hcap);
                if c > worst_far {
                    worst_far = c;
                    far_witness = format!("{label} |z-x|={}·rad", scale);
                }
            }
        }
    }
    out.push(CheckResult::at_most("map.displacement_violations", violations as f64, 0.0, format!("{pairs} pairs, seed {seed}")));
    out.push(CheckResult::at_most("map.displacement", worst_near, 3.0, near_witness));
    out.push(CheckResult::at_most("map.far_field", worst_far, CEILING, far_witness));

    let mut worst_pair = 0.0f64;
    let mut pair_witness = String::new();
    for (h, d) in [(1.0, 0.5), (1.0, 2.0), (0.3, 1.0), (2.0, 0.1)] {
        let a = MapStack::from_elements(vec![crate::SlitElement::new(0.0, h)?]);
        let b = MapStack::from_elements(vec![crate::SlitElement::new(d, h)?]);
        let r = libm::hypot(d, h);
        let hcap = 0.5 * h * h;
        for scale in [2.0, 10.0, 100.0] {
            let radius = scale * r;
            let dist = stack_distance(&a, &b, &far_field(0.0, radius, 64))?;
            let c = dist * radius * radius / (r * hcap);
            if c > worst_pair {
                worst_pair = c;
                pair_witness = format!("slits (0,{h}) and ({d},{h}) at R={scale}·r");
            }
        }
    }
    out.push(CheckResult::at_most("map.paired_slits", worst_pair, CEILING, pair_witness));
    Ok(out)
}

/// Angle `θ` of the energy cone for energy `rho`.
pub fn cone_angle(rho: f64) -> f64 {
    libm::asin(libm::exp(-rho / 8.0))
}

/// Smallest angle to ℝ of the chord's vertices after sending `start ↦ 0`, `end ↦ ∞`.
pub fn normalized_min_angle(chord: &Chord) -> Result<f64> {
    let m = MobiusMap::fixing(chord.start.into(), chord.end.into())?;
    Ok(chord
        .vertices
        .iter()
        .map(|&z| {
            let a = m.apply(z).arg();
            a.min(PI - a)
        })
        .fold(PI, f64::min))
}

/// Every normalized vertex lies in the cone `θ ≤ arg ≤ π − θ`, `θ = arcsin(e^{−ρ/8})`,
/// up to 0.01 rad.
pub fn check_energy_cone(name: &str, chord: &Chord) -> Result<CheckResult> {
    let rho = chord_energy(chord, &EnergyOptions::default())?.energy;
    let theta = cone_angle(rho);
    let observed = theta - normalized_min_angle(chord)?;
    Ok(CheckResult::at_most("cone.containment", observed, 0.01, format!("{name} energy={rho}")))
}

/// A chord whose normalized picture passes through a point at angle `θ₀`
/// carries energy at least `−8 log sin θ₀` (0.05 slack).
pub fn check_cone_witness(name: &str, chord: &Chord) -> Result<CheckResult> {
    let rho = chord_energy(chord, &EnergyOptions::default())?.energy;
    let theta0 = normalized_min_angle(chord)?;
    let bound = -8.0 * libm::log(libm::sin(theta0));
    Ok(CheckResult::at_least("cone.witness", rho, bound - 0.05, format!("{name} theta0={theta0}")))
}

/// Chords with linear driving `a·t`, whose normalized pictures lean toward ℝ as `a` grows.
pub fn cone_witnesses() -> Result<Vec<(String, Chord)>> {
    [0.5, 1.5, 3.0, 5.0]
        .iter()
        .map(|&a| Ok((format!("linear a={a}"), chord_of(1.0, 400, move |t| a * t)?)))
        .collect()
}

/// `diam/|x − y|` and `hcap/|x − y|²` of a chord.
pub fn dist_ratios(chord: &Chord) -> Result<(f64, f64)> {
    let span = (chord.end - chord.start).abs();
    Ok((chord.diameter() / span, hcap_of(chord)? / (span * span)))
}

/// `|x − y| ≤ diam ≤ …` and `hcap ≤ diam²`; the observed value is the larger of
/// `|x − y|/diam` and `hcap/diam²`, both at most 1.
pub fn check_dist_bounds(name: &str, chord: &Chord) -> Result<CheckResult> {
    let (diam_ratio, hcap_ratio) = dist_ratios(chord)?;
    let observed = (1.0 / diam_ratio).max(hcap_ratio / (diam_ratio * diam_ratio));
    let low = if chord.len() < crate::zipper::LOW_RESOLUTION_VERTICES { " low-resolution" } else { "" };
    Ok(CheckResult::at_most(
        "dist.bounds",
        observed,
        1.0,
        format!("{name} diam/|x-y|={diam_ratio} hcap/|x-y|^2={hcap_ratio}{low}"),
    ))
}

fn vertical(base: f64, h: f64, n: usize) -> Result<CurveSegment> {
    CurveSegment::new(base, (1..=n).map(|k| Point::new(base, h * k as f64 / n as f64)).collect())
}

/// Both sides of the commutation identity for two slits of height 0.3
/// (one vertical, one slanted) and for a mirror-symmetric pair.
pub fn check_commutation(n: usize) -> Result<Vec<CheckResult>> {
    let opts = EnergyOptions::default();
    let gamma = vertical(0.0, 0.3, n)?;
    let eta = CurveSegment::new(
        1.0,
        (1..=n).map(|k| {
            let s = k as f64 / n as f64;
            Point::new(1.0 - 0.2 * s, 0.3 * s)
        }).collect(),
    )?;
    let (l, r) = commutation_defect(&gamma, &eta, &opts)?;
    let mut out = vec![CheckResult::at_most("commutation.two_slits", (l - r).abs(), 0.01, format!("n={n} lhs={l} rhs={r}"))];
    let bent = CurveSegment::new(
        0.0,
        (1..=n).map(|k| {
            let s = k as f64 / n as f64;
            Point::new(0.15 * libm::sin(3.0 * s), 0.3 * s)
        }).collect(),
    )?;
    let mirror = CurveSegment {
        base: 1.0,
        vertices: bent.vertices.iter().map(|z| Point::new(1.0 - z.re, z.im)).collect(),
    };
    let (l, r) = commutation_defect(&bent, &mirror, &opts)?;
    out.push(CheckResult::at_most("commutation.mirror", (l - r).abs(), 1e-9, format!("n={n} lhs={l} rhs={r}")));
    Ok(out)
}

/// Energies of generated geodesics: in ℍ, and in three slit domains between
/// two real points and from a real point to the slit's tip.
pub fn check_geodesics(n: usize) -> Result<Vec<CheckResult>> {
    let opts = EnergyOptions::default();
    let spec = GeodesicSpec::new(n)?;
    let mut out = Vec::new();
    let free = chord_energy(&geodesic_chord(-1.0, 1.0, n)?, &opts)?.energy;
    out.push(CheckResult::at_most("geodesic.half_plane", free, 0.01, format!("n={n}")));
    let domains: [(&str, Vec<Point>); 3] = [
        ("vertical slit", vec![Point::new(0.0, 0.5), Point::new(0.0, 1.0)]),
        ("slanted slit", vec![Point::new(0.2, 0.4), Point::new(0.5, 0.9)]),
        ("curved slit", (1..=40).map(|k| {
            let s = k as f64 / 40.0;
            Point::new(0.3 * libm::sin(4.0 * s), s)
        }).collect()),
    ];
    for (label, pts) in domains {
        let stack = compute_driving(&CurveSegment::new(0.0, pts)?, &ZipOptions::default())?.stack;
        let across = hyperbolic_geodesic(&stack, PrimeEnd::Boundary(-1.5), PrimeEnd::Boundary(2.0), &spec)?;
        let e = partial_energy(
            &CurveSegment { base: -1.5, vertices: across },
            Target::Boundary(BoundaryPoint::Finite(2.0)),
            Some(&stack),
            &opts,
        )?;
        out.push(CheckResult::at_most("geodesic.slit_domain", e, 0.01, format!("{label}, -1.5 to 2, n={n}")));
        let to_tip = hyperbolic_geodesic(&stack, PrimeEnd::Boundary(2.0), PrimeEnd::Tip, &spec)?;
        let e = partial_energy(&CurveSegment { base: 2.0, vertices: to_tip }, Target::AmbientTip, Some(&stack), &opts)?;
        out.push(CheckResult::at_most("geodesic.slit_tip", e, 0.01, format!("{label}, 2 to tip, n={n}")));
    }
    Ok(out)
}

/// Sup-norm distance between `f` and the driving recovered by zipping the
/// curve traced from `f` with `steps` sub-steps on `[0, total]`, the
/// recovered driving read as a step function (constant on each `(t_k, t_{k+1}]`).
pub fn round_trip_error(total: f64, steps: usize, f: impl Fn(f64) -> f64) -> Result<f64> {
    let d = DrivingFunction::from_fn(total, steps, &f)?;
    let curve = trace_curve(&d, &TraceOptions::exact())?.into_segment();
    let recovered = compute_driving(&curve, &ZipOptions::default())?.driving;
    let mut worst: f64 = 0.0;
    for w in recovered.samples().windows(2) {
        let ((t0, _), (t1, l1)) = (w[0], w[1]);
        for j in 0..=8 {
            let t = t0 + (t1 - t0) * j as f64 / 8.0;
            worst = worst.max((f(t) - l1).abs());
        }
    }
    Ok(worst)
}

/// Round-trip error for `sin(4t)` at `steps` and `2·steps`, and the halving ratio.
pub fn check_round_trip(steps: usize) -> Result<Vec<CheckResult>> {
    let f = |t: f64| libm::sin(4.0 * t);
    let e1 = round_trip_error(1.0, steps, f)?;
    let e2 = round_trip_error(1.0, 2 * steps, f)?;
    let ratio = e2 / e1;
    Ok(vec![
        CheckResult::at_most("roundtrip.error", e1, 0.02, format!("sin(4t), {steps} steps")),
        CheckResult::at_most("roundtrip.halving", (ratio - 0.5).abs(), 0.1, format!("error ratio {ratio} from {steps} to {} steps", 2 * steps)),
    ])
}

pub const GROUPS: [&str; 8] = ["hcap", "map", "cone", "dist", "commutation", "geodesic", "roundtrip", "all"];

/// Runs every check on the default suite; `only` restricts to one group name.
pub fn run_suite(seed: u64, only: Option<&str>) -> Result<Vec<CheckResult>> {
    check_group(only)?;
    let needs_suite = matches!(only, None | Some("all" | "hcap" | "cone" | "dist"));
    let suite = if needs_suite { default_suite(seed)? } else { Vec::new() };
    run_checks(seed, &suite, only)
}

fn check_group(only: Option<&str>) -> Result<()> {
    match only {
        Some(g) if !GROUPS.contains(&g) => Err(Error::InvalidInput(format!("unknown check group {g:?}"))),
        _ => Ok(()),
    }
}

/// Like [`run_suite`] with the chord-based checks run on `suite`.
pub fn run_checks(seed: u64, suite: &[(String, Chord)], only: Option<&str>) -> Result<Vec<CheckResult>> {
    check_group(only)?;
    let wants = |g: &str| matches!(only, None | Some("all")) || only == Some(g);
    let mut out = Vec::new();
    if wants("hcap") {
        out.extend(check_hcap_identities(suite)?);
    }
    if wants("map") {
        out.extend(check_map_bound(seed, 200, 50)?);
    }
    if wants("cone") {
        for (name, chord) in suite {
            out.push(check_energy_cone(name, chord)?);
        }
        for (name, chord) in cone_witnesses()? {
            out.push(check_cone_witness(&name, &chord)?);
        }
    }
    if wants("dist") {
        for (name, chord) in suite {
            out.push(check_dist_bounds(name, chord)?);
        }
    }
    if wants("commutation") {
        out.extend(check_commutation(800)?);
    }
    if wants("geodesic") {
        out.extend(check_geodesics(200)?);
    }
    if wants("roundtrip") {
        out.extend(check_round_trip(2000)?);
    }
    Ok(out)
}
