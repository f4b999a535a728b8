//! Hyperbolic geodesics in slit domains and chord reversal by local surgery.
//!
//! A chord `γ` from `x` to `y` with capacity time `T` is reversed in `k`
//! steps of `ε = T/k`. The state after reversing `γ[t, T]` is the prefix
//! `γ_t` together with a curve `η` from `y` to `γ(t)`. One step maps out the
//! shorter prefix `γ_{t−ε}` in a frame that sends `y` to 0 and `γ(t−ε)` to ∞,
//! maps out the image of `η`, and appends to `η` the pullback of the vertical
//! ray over the resulting driving value: the hyperbolic geodesic from `γ(t)`
//! to `γ(t−ε)` in the complement of `γ_{t−ε} ∪ η`. The curve obtained at
//! `t = 0` is the reversed chord.
//!
//! The ledger quantities (`x`, `y`, capacities and the far-field distance) are
//! read in the standard picture, where `g` maps out `γ_{t−ε}` and `h` maps out
//! `g(η)`.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::conformal::{MobiusMap, Point};
use crate::energy::{dirichlet_energy, energy_in_frame, partial_energy, EnergyOptions, Target};
use crate::slitstack::MapStack;
use crate::tracer::{trace_curve, TraceOptions};
use crate::zipper::{
    check_simple, half_circle, zip_chord, zip_points, Chord, CurveSegment, DrivingFunction, ZipOptions,
};
use crate::conformal::BoundaryPoint;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSpec {
    /// Interior samples per geodesic, at least 3.
    pub n_samples: usize,
}

impl Default for GeodesicSpec {
    fn default() -> Self {
        GeodesicSpec { n_samples: 16 }
    }
}

impl GeodesicSpec {
    pub fn new(n_samples: usize) -> Result<Self> {
        if n_samples < 3 {
            return Err(Error::InvalidInput(format!("geodesics need at least 3 samples, got {n_samples}")));
        }
        Ok(GeodesicSpec { n_samples })
    }
}

/// A prime end of the domain `ℍ ∖ hull(stack)`, resolved to a real image point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrimeEnd {
    /// A real boundary point in the stack's source coordinates.
    Boundary(f64),
    /// Tip of the slit with this index; it maps to the slit's driving value.
    SlitTip(usize),
    /// Tip of the last slit.
    Tip,
}

impl PrimeEnd {
    fn resolve(self, stack: &MapStack) -> Result<f64> {
        match self {
            PrimeEnd::Boundary(x) => match stack.apply_boundary(BoundaryPoint::Finite(x))? {
                BoundaryPoint::Finite(w) => Ok(w),
                BoundaryPoint::Infinity => Err(Error::InvalidInput(format!("prime end {x} maps to ∞"))),
            },
            PrimeEnd::SlitTip(i) => stack.tip_image(i),
            PrimeEnd::Tip => stack
                .final_driving()
                .ok_or_else(|| Error::InvalidInput("the stack has no slit tip".into())),
        }
    }
}

/// Hyperbolic geodesic of `ℍ ∖ hull(stack)` from `from` to `to`.
///
/// The image geodesic is the half-circle over the two image points, sampled
/// uniformly in angle with the endpoints left out, and pulled back through
/// the stack.
pub fn hyperbolic_geodesic(
    stack: &MapStack,
    from: PrimeEnd,
    to: PrimeEnd,
    spec: &GeodesicSpec,
) -> Result<Vec<Point>> {
    let a = from.resolve(stack)?;
    let b = to.resolve(stack)?;
    pull_back_half_circle(stack, a, b, spec.n_samples)
}

fn pull_back_half_circle(stack: &MapStack, a: f64, b: f64, n: usize) -> Result<Vec<Point>> {
    if a == b {
        return Err(Error::InvalidInput(format!("geodesic endpoints coincide at {a}")));
    }
    pull_back(stack, &half_circle(a, b, n))
}

fn pull_back(stack: &MapStack, pts: &[Point]) -> Result<Vec<Point>> {
    pts.iter()
        .map(|&w| {
            let z = stack.invert(w)?;
            if z.im > 0.0 && z.re.is_finite() {
                Ok(z)
            } else {
                Err(Error::Resolution(format!("geodesic sample {w} pulled back to {z}")))
            }
        })
        .collect()
}

/// Closes the curve of `driving` into a chord: traces it with `trace_steps`
/// equal sub-steps and appends the hyperbolic geodesic from its tip to the
/// real point lying `offset` to the right of the image of the base's right side.
///
/// The geodesic adds no energy toward that endpoint, so the chord's energy is
/// the partial energy of the traced curve toward the same point.
pub fn chord_from_driving(
    driving: &DrivingFunction,
    trace_steps: usize,
    offset: f64,
    spec: &GeodesicSpec,
) -> Result<Chord> {
    if !(offset > 0.0) {
        return Err(Error::InvalidInput(format!("closing offset must be positive, got {offset}")));
    }
    let total = driving.total_time();
    let traced = trace_curve(
        driving,
        &TraceOptions { steps_per_sample: 1, max_step_t: Some(total / trace_steps.max(1) as f64) },
    )?;
    let stack = &traced.stack;
    let first = stack.elements.first().ok_or_else(|| Error::InvalidInput("empty driving".into()))?;
    let right_side = stack.apply_from(1, Point::new(first.base + first.height, 0.0))?.re;
    let target = right_side + offset;
    let end = stack.invert_real(target)?;
    let closing = pull_back_half_circle(stack, stack.final_driving().unwrap_or(0.0), target, spec.n_samples)?;
    let mut vertices = traced.vertices;
    vertices.extend(closing);
    Chord::new(traced.base, end, vertices)
}

/// Mapping-out function of the half-disk over `[c − r, c + r]`.
fn half_disk_map(c: f64, r: f64, z: Point) -> Point {
    let w = z - c;
    w + r * r / w + c
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerRecord {
    pub step: usize,
    /// Capacity time still to be reversed after this step.
    pub t_cursor: f64,
    /// Image of `γ(t−ε)`.
    pub x: f64,
    /// Image of `γ(t)`.
    pub y: f64,
    /// Capacity of the inserted half-circle, `|x − y|²/4`.
    pub geodesic_hcap: f64,
    /// Capacity of `γ_{t−ε} ∪ η̃`.
    pub joint_hcap: f64,
    pub energy_prefix: f64,
    pub energy_eta: f64,
    pub energy_total: f64,
    /// Far-field distance between the mapping-out functions of the current
    /// configuration and of the original chord.
    pub cara_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReversalLedger {
    /// Energy of the chord before the first step.
    pub initial_energy: f64,
    /// Capacity time `T` of the chord.
    pub total_t: f64,
    pub records: Vec<LedgerRecord>,
}

impl ReversalLedger {
    /// Largest increase of `energy_total` from one step to the next
    /// (the first step is compared with the initial energy).
    pub fn max_energy_increase(&self) -> f64 {
        let mut prev = self.initial_energy;
        let mut worst = f64::NEG_INFINITY;
        for r in &self.records {
            worst = worst.max(r.energy_total - prev);
            prev = r.energy_total;
        }
        worst
    }

    /// Largest `geodesic_hcap / (2ε)`: the inserted geodesic's capacity
    /// relative to the capacity of the piece it replaces.
    pub fn max_geodesic_ratio(&self, eps: f64) -> f64 {
        self.records.iter().map(|r| r.geodesic_hcap / (2.0 * eps)).fold(0.0, f64::max)
    }

    /// Smallest `C` with `joint_hcap ≤ 2T + C(T − t)` at every step.
    pub fn fitted_joint_constant(&self) -> f64 {
        let t_total = self.total_t;
        self.records
            .iter()
            .map(|r| (r.joint_hcap - 2.0 * t_total) / (t_total - r.t_cursor))
            .fold(0.0, f64::max)
    }
}

/// Options shared by the reversal steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReversalOptions {
    pub geodesic: GeodesicSpec,
    pub energy: EnergyOptions,
    /// Far-field radius for `cara_distance` as a multiple of the chord's radius.
    pub cara_radius_factor: f64,
    pub cara_points: usize,
    /// Check that the configuration stays a simple polyline after every step.
    pub validate: bool,
}

impl Default for ReversalOptions {
    fn default() -> Self {
        ReversalOptions {
            geodesic: GeodesicSpec::default(),
            energy: EnergyOptions::default(),
            cara_radius_factor: DEFAULT_CARA_RADIUS_FACTOR,
            cara_points: 64,
            validate: true,
        }
    }
}

pub const DEFAULT_CARA_RADIUS_FACTOR: f64 = 4.0;

/// Induction state of the reversal: the prefix is `γ_{t_cursor}`, and `eta`
/// runs from `chord_end` to `γ(t_cursor)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversalState {
    pub chord_start: f64,
    pub chord_end: f64,
    pub gamma_driving: DrivingFunction,
    pub t_cursor: f64,
    pub eta: Vec<Point>,
    pub ledger: ReversalLedger,
    pub options: ReversalOptions,
    gamma_vertices: Vec<Point>,
    gamma_stack: MapStack,
    reference: f64,
    far_radius: f64,
}

impl ReversalState {
    pub fn new(chord: &Chord, options: ReversalOptions) -> Result<Self> {
        let zipped = zip_chord(chord, &ZipOptions::default())?;
        let reference = 0.5 * (chord.start + chord.end);
        let radius = chord.path().iter().map(|z| (z - reference).norm()).fold(0.0, f64::max);
        let frame = MobiusMap::fixing(chord.start.into(), chord.end.into())?;
        let vertices = chord.vertices[..zipped.consumed].to_vec();
        let (initial_energy, _, _) = energy_in_frame(chord.start, &vertices, &frame, &options.energy)?;
        Ok(ReversalState {
            chord_start: chord.start,
            chord_end: chord.end,
            t_cursor: zipped.total_t,
            eta: Vec::new(),
            ledger: ReversalLedger { initial_energy, total_t: zipped.total_t, records: Vec::new() },
            options,
            gamma_vertices: vertices,
            gamma_stack: zipped.stack,
            gamma_driving: zipped.driving,
            reference,
            far_radius: options.cara_radius_factor * radius,
        })
    }

    pub fn total_t(&self) -> f64 {
        self.ledger.total_t
    }

    /// Sample points on the far-field semicircle used for `cara_distance`.
    pub fn far_field_points(&self) -> Vec<Point> {
        far_field(self.reference, self.far_radius, self.options.cara_points)
    }

    /// Mapping-out function of the original chord, evaluated at `z`.
    pub fn reference_map(&self, z: Point) -> Result<Point> {
        self.gamma_stack.apply(z)
    }

    /// The chord traversed so far in reverse: from `end` along `eta`.
    pub fn eta_segment(&self) -> CurveSegment {
        CurveSegment { base: self.chord_end, vertices: self.eta.clone() }
    }
}

pub(crate) fn far_field(reference: f64, radius: f64, n: usize) -> Vec<Point> {
    (0..n)
        .map(|j| {
            let theta = core::f64::consts::PI * (j as f64 + 0.5) / n as f64;
            Point::new(reference + radius * libm::cos(theta), radius * libm::sin(theta))
        })
        .collect()
}

/// Frame for the continuation of `η`: maps out `γ_{t−ε}` with the prefix
/// zipped in the chord's own frame (`start ↦ 0`, `end ↦ ∞`), then sends `end`
/// to 0 and the prefix tip to ∞.
///
/// Slits zipped in this frame are geodesics toward the next target, so a
/// geodesic continuation of `η` is a vertical ray.
fn continuation_frame(start: f64, end: f64, prefix: &[Point]) -> Result<MapStack> {
    let phi = MobiusMap::fixing(start.into(), end.into())?;
    let (elements, tip) = if prefix.is_empty() {
        (Vec::new(), 0.0)
    } else {
        let z = zip_points(start, prefix, &ZipOptions::default(), Some(&phi))?;
        let tip = z.driving.final_value();
        (z.stack.elements, tip)
    };
    let psi = MobiusMap::fixing(BoundaryPoint::Infinity, tip.into())?;
    Ok(MapStack { pre: Some(phi), elements, post: Some(psi) })
}

fn energy_of_images(base: f64, images: &[Point], opts: &EnergyOptions) -> Result<f64> {
    if images.is_empty() {
        return Ok(0.0);
    }
    let zip_opts = ZipOptions { stop_modulus: Some(opts.stop_modulus), ..ZipOptions::default() };
    Ok(dirichlet_energy(&zip_points(base, images, &zip_opts, None)?.driving))
}

/// One local reversal: replaces `γ(t−ε, t)` by the hyperbolic geodesic from
/// `γ(t)` to `γ(t−ε)` in the complement of `γ_{t−ε} ∪ η`.
///
/// The geodesic is built in the frame of [`continuation_frame`], where it is
/// the vertical ray over the driving value of `η`'s tip. Its samples are the
/// images of the half-circle samples of the standard picture: a Möbius map
/// between the two pictures sends the half-circle's angle fraction `u` to
/// height `α·tan(πu/2)`, with `α` fixed by where ∞ lands.
pub fn local_reversal_step(state: ReversalState, eps: f64) -> Result<ReversalState> {
    let step = state.ledger.records.len();
    let fail = |e: Error| match e {
        Error::Step { .. } => e,
        other => Error::Step { step, reason: other.to_string() },
    };
    let touching = |i: usize| Error::Step {
        step,
        reason: format!("reversed vertex {i} touches the prefix hull; use a smaller step or more geodesic samples"),
    };
    let t = state.t_cursor;
    if !(eps > 0.0) || eps > t * (1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!("step {eps} outside (0, {t}]")));
    }
    // cut at the sample time nearest to t − ε, so that γ(t−ε) is a chord vertex
    let times = state.gamma_driving.samples();
    let below = times.partition_point(|&(time, _)| time < t).max(1);
    let cut = (0..below)
        .min_by(|&i, &j| (times[i].0 - (t - eps)).abs().total_cmp(&(times[j].0 - (t - eps)).abs()))
        .unwrap_or(0);
    let s = times[cut].0;

    // g: maps out the prefix γ_{t−ε} in the standard normalization
    let g = if cut > 0 { state.gamma_driving.truncate(s).map_err(fail)?.slit_stack() } else { MapStack::new() };
    let prefix: Vec<Point> = state.gamma_vertices[..cut].to_vec();

    // the new piece, built in the continuation frame
    let frame = continuation_frame(state.chord_start, state.chord_end, &prefix).map_err(fail)?;
    let mut framed_eta = Vec::with_capacity(state.eta.len());
    for (i, &z) in state.eta.iter().enumerate() {
        framed_eta.push(frame.apply(z).map_err(|_| touching(i))?);
    }
    let zipped_eta = zip_points(0.0, &framed_eta, &ZipOptions::default(), None).map_err(fail)?;
    let ray_base = zipped_eta.driving.final_value();
    let infinity = match frame.apply_boundary(BoundaryPoint::Infinity).map_err(fail)? {
        BoundaryPoint::Finite(p) => zipped_eta.stack.apply_real(p).map_err(fail)?,
        BoundaryPoint::Infinity => return Err(fail(Error::Resolution("∞ is fixed by the continuation frame".into()))),
    };
    let alpha = (ray_base - infinity).abs();
    let n = state.options.geodesic.n_samples;
    let ray: Vec<Point> = (1..=n)
        .map(|j| {
            let u = j as f64 / (n + 1) as f64;
            Point::new(ray_base, alpha * libm::tan(0.5 * core::f64::consts::PI * u))
        })
        .collect();
    let piece = pull_back(&zipped_eta.stack, &ray)
        .and_then(|w| pull_back(&frame, &w))
        .map_err(fail)?;

    let mut eta = state.eta.clone();
    eta.extend_from_slice(&piece);
    if s > 0.0 {
        eta.push(*prefix.last().expect("non-empty prefix"));
    }

    if state.options.validate {
        let mut path = Vec::with_capacity(prefix.len() + eta.len() + 2);
        path.push(Point::new(state.chord_start, 0.0));
        path.extend_from_slice(&prefix);
        path.extend(eta.iter().rev().skip(usize::from(s > 0.0)));
        path.push(Point::new(state.chord_end, 0.0));
        check_simple(&path).map_err(|e| Error::Step {
            step,
            reason: format!("the geodesic crosses the configuration ({e}); use more geodesic samples or a smaller step"),
        })?;
    }

    // energies, measured in the frames the construction used
    let chord_frame = MobiusMap::fixing(state.chord_start.into(), state.chord_end.into()).map_err(fail)?;
    let energy_prefix = energy_in_frame(state.chord_start, &prefix, &chord_frame, &state.options.energy)
        .map_err(fail)?
        .0;
    // the tip of η̃ is the target prime end itself
    let toward_tip = if s > 0.0 { &eta[..eta.len() - 1] } else { &eta[..] };
    let mut images = Vec::with_capacity(toward_tip.len());
    for (i, &z) in toward_tip.iter().enumerate() {
        images.push(frame.apply(z).map_err(|_| touching(i))?);
    }
    let energy_eta = energy_of_images(0.0, &images, &state.options.energy).map_err(fail)?;

    // standard picture: h maps out g(η)
    let end_image = g.apply_real(state.chord_end).map_err(fail)?;
    let mut g_eta = Vec::with_capacity(state.eta.len());
    for (i, &z) in state.eta.iter().enumerate() {
        g_eta.push(g.apply(z).map_err(|_| touching(i))?);
    }
    let h = zip_points(end_image, &g_eta, &ZipOptions::default(), None).map_err(fail)?.stack;
    let mut joint = g.clone();
    joint.elements.extend_from_slice(&h.elements);
    let x = if s > 0.0 {
        joint.tip_image(g.len() - 1).map_err(fail)?
    } else {
        joint.apply_real(state.chord_start).map_err(fail)?
    };
    let y = h.final_driving().unwrap_or(end_image);

    let centre = 0.5 * (x + y);
    let radius = 0.5 * (x - y).abs();
    let geodesic_hcap = radius * radius;
    let joint_hcap = g.hcap().map_err(fail)? + h.hcap().map_err(fail)? + geodesic_hcap;
    let mut cara_distance: f64 = 0.0;
    for z in state.far_field_points() {
        let config = half_disk_map(centre, radius, joint.apply(z).map_err(fail)?);
        let reference = state.reference_map(z).map_err(fail)?;
        cara_distance = cara_distance.max((config - reference).norm());
    }

    let mut ledger = state.ledger.clone();
    ledger.records.push(LedgerRecord {
        step,
        t_cursor: s,
        x,
        y,
        geodesic_hcap,
        joint_hcap,
        energy_prefix,
        energy_eta,
        energy_total: energy_prefix + energy_eta,
        cara_distance,
    });
    Ok(ReversalState { t_cursor: s, eta, ledger, ..state })
}

/// A failed reversal together with the ledger of the steps that succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversalFailure {
    pub error: Error,
    pub ledger: ReversalLedger,
}

impl core::fmt::Display for ReversalFailure {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} (after {} completed steps)", self.error, self.ledger.records.len())
    }
}

impl core::error::Error for ReversalFailure {}

/// Applies `k` local reversal steps of size `T/k`; returns the reversed chord
/// from `end` to `start` and the step ledger.
pub fn reverse_chord(
    chord: &Chord,
    k: usize,
    options: &ReversalOptions,
) -> core::result::Result<(Chord, ReversalLedger), ReversalFailure> {
    let no_ledger = |error| ReversalFailure { error, ledger: ReversalLedger::default() };
    if k == 0 {
        return Err(no_ledger(Error::InvalidInput("k must be at least 1".into())));
    }
    let mut state = ReversalState::new(chord, *options).map_err(no_ledger)?;
    let total = state.total_t();
    let eps = total / k as f64;
    for i in 0..k {
        let target = total - (i + 1) as f64 * eps;
        let step = if i + 1 == k { state.t_cursor } else { (state.t_cursor - target).max(f64::MIN_POSITIVE) };
        let ledger = state.ledger.clone();
        state = local_reversal_step(state, step).map_err(|error| ReversalFailure { error, ledger })?;
    }
    let reversed = Chord::new(chord.end, chord.start, state.eta.clone())
        .map_err(|error| ReversalFailure { error, ledger: state.ledger.clone() })?;
    Ok((reversed, state.ledger))
}

/// Both sides of the commutation identity for disjoint segments `γ` from `a`
/// and `η` from `b`:
///
/// `lhs = I(γ; a → b) + I(η in ℍ∖γ; b → γ tip)`,
/// `rhs = I(η; b → a) + I(γ in ℍ∖η; a → η tip)`.
pub fn commutation_defect(
    gamma: &CurveSegment,
    eta: &CurveSegment,
    opts: &EnergyOptions,
) -> Result<(f64, f64)> {
    if gamma.base == eta.base {
        return Err(Error::Validation("the two segments must start at distinct points".into()));
    }
    check_disjoint(gamma, eta)?;
    let side = |first: &CurveSegment, second: &CurveSegment| -> Result<f64> {
        let alone = partial_energy(first, Target::Boundary(second.base.into()), None, opts)?;
        let after = if first.is_empty() {
            partial_energy(second, Target::Boundary(first.base.into()), None, opts)?
        } else {
            let stack = zip_points(first.base, &first.vertices, &ZipOptions::default(), None)?.stack;
            partial_energy(second, Target::AmbientTip, Some(&stack), opts)?
        };
        Ok(alone + after)
    };
    Ok((side(gamma, eta)?, side(eta, gamma)?))
}

fn check_disjoint(a: &CurveSegment, b: &CurveSegment) -> Result<()> {
    let path = |s: &CurveSegment| {
        let mut p = Vec::with_capacity(s.len() + 1);
        p.push(Point::new(s.base, 0.0));
        p.extend_from_slice(&s.vertices);
        p
    };
    let (pa, pb) = (path(a), path(b));
    if pa.len() == 1 || pb.len() == 1 {
        return Ok(());
    }
    // joined tip to tip, the two paths form one polyline that is simple iff they are disjoint
    let mut joined = pa;
    joined.extend(pb.iter().rev());
    check_simple(&joined).map_err(|_| Error::Validation("the two segments intersect".into()))?;
    Ok(())
}
