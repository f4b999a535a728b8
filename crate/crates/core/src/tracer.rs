//! Forward Loewner transform: from a sampled driving function back to a curve.

use alloc::vec::Vec;

use crate::conformal::Point;
use crate::slitstack::{MapStack, SlitElement};
use crate::zipper::{zip_chord, Chord, CurveSegment, DrivingFunction, ZipOptions};
use crate::{Error, Result};

/// Tips closer to ℝ than this abort the trace.
pub const MIN_TIP_HEIGHT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Sub-steps per sample interval, at least 1.
    pub steps_per_sample: usize,
    /// Upper bound for a sub-step; `None` means `1e-3 × total_t`.
    pub max_step_t: Option<f64>,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { steps_per_sample: 4, max_step_t: None }
    }
}

impl TraceOptions {
    /// One slit per sample interval: reproduces the zipper's discrete model exactly.
    pub fn exact() -> Self {
        TraceOptions { steps_per_sample: 1, max_step_t: Some(f64::INFINITY) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TracedCurve {
    pub base: f64,
    /// Tip after every sub-step.
    pub vertices: Vec<Point>,
    /// Capacity time of each vertex.
    pub times: Vec<f64>,
    /// Slits of the sub-steps, in growth order.
    pub stack: MapStack,
}

impl TracedCurve {
    pub fn tip(&self) -> Option<Point> {
        self.vertices.last().copied()
    }

    pub fn into_segment(self) -> CurveSegment {
        CurveSegment { base: self.base, vertices: self.vertices }
    }
}

fn sub_steps(driving: &DrivingFunction, opts: &TraceOptions) -> Result<Vec<SlitElement>> {
    if opts.steps_per_sample == 0 {
        return Err(Error::Validation("steps_per_sample must be at least 1".into()));
    }
    let total = driving.total_time();
    let max_step = opts.max_step_t.unwrap_or(1e-3 * total);
    if !(max_step > 0.0) {
        return Err(Error::Validation("max_step_t must be positive".into()));
    }
    let samples = driving.samples();
    let mut elements = Vec::new();
    for w in samples.windows(2) {
        let (t0, l0) = w[0];
        let (t1, l1) = w[1];
        let dt = t1 - t0;
        let by_size = if max_step.is_finite() { libm::ceil(dt / max_step - 1e-9) as usize } else { 1 };
        let m = opts.steps_per_sample.max(by_size).max(1);
        let mut prev = t0;
        for j in 1..=m {
            let (s, u) = if j == m {
                (t1, l1)
            } else {
                let f = j as f64 / m as f64;
                (t0 + f * dt, l0 + f * (l1 - l0))
            };
            elements.push(SlitElement::from_duration(u, s - prev)?);
            prev = s;
        }
    }
    Ok(elements)
}

/// Grows the curve of a driving function out of vertical slits.
///
/// Each sub-step `[t, t + Δt]` contributes a slit of height `2√Δt` on the
/// driving value at its right endpoint; the curve vertex is that slit's tip
/// pulled back through all earlier slits.
pub fn trace_curve(driving: &DrivingFunction, opts: &TraceOptions) -> Result<TracedCurve> {
    let elements = sub_steps(driving, opts)?;
    let mut vertices = Vec::with_capacity(elements.len());
    let mut times = Vec::with_capacity(elements.len());
    let mut t = 0.0;
    for (j, e) in elements.iter().enumerate() {
        t += e.duration();
        let mut z = e.tip();
        for prev in elements[..j].iter().rev() {
            z = prev.invert_unchecked(z);
        }
        if !(z.im >= MIN_TIP_HEIGHT) || !z.re.is_finite() {
            return Err(Error::StepSize { t });
        }
        vertices.push(z);
        times.push(t);
    }
    Ok(TracedCurve {
        base: driving.start_value(),
        vertices,
        times,
        stack: MapStack::from_elements(elements),
    })
}

/// Prefix of `chord` up to capacity time `t` and its tip `γ(t)`.
pub fn slice_by_capacity(chord: &Chord, t: f64) -> Result<(CurveSegment, Point)> {
    let zipped = zip_chord(chord, &ZipOptions::default())?;
    if !(t > 0.0 && t < zipped.total_t) {
        return Err(Error::Validation(alloc::format!(
            "slice time {t} outside (0, {})",
            zipped.total_t
        )));
    }
    let prefix = trace_curve(&zipped.driving.truncate(t)?, &TraceOptions::exact())?;
    let tip = prefix.tip().ok_or_else(|| Error::Validation("empty prefix".into()))?;
    Ok((prefix.into_segment(), tip))
}
