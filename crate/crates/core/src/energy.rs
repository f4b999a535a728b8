//! Loewner energy: the Dirichlet energy `½∫|λ̇|² dt` of a driving function,
//! measured after a Möbius normalization that sends the curve's base to 0 and
//! its target to ∞.

use crate::conformal::{BoundaryPoint, MobiusMap, Point};
use crate::slitstack::MapStack;
use crate::zipper::{zip_points, Chord, CurveSegment, DrivingFunction, ZipOptions, DEFAULT_CLOSE_FRACTION};
use crate::{Error, Result};

/// Zipping toward ∞ stops once an image vertex is farther out than this.
pub const DEFAULT_STOP_MODULUS: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyOptions {
    pub stop_modulus: f64,
}

impl Default for EnergyOptions {
    fn default() -> Self {
        EnergyOptions { stop_modulus: DEFAULT_STOP_MODULUS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub energy: f64,
    /// Capacity time consumed in the normalized picture.
    pub t_used: f64,
    /// `(closing gap)²` in the chord's own coordinates.
    pub tail_hcap_bound: f64,
    /// Number of vertices that entered the estimate.
    pub resolution: usize,
    pub low_resolution: bool,
}

/// Exact Dirichlet energy of the piecewise-linear interpolation.
pub fn dirichlet_energy(driving: &DrivingFunction) -> f64 {
    driving
        .samples()
        .windows(2)
        .map(|w| {
            let dl = w[1].1 - w[0].1;
            0.5 * dl * dl / (w[1].0 - w[0].0)
        })
        .sum()
}

/// Dirichlet energy of raw samples, validating the time grid first.
pub fn dirichlet_energy_of(samples: &[(f64, f64)]) -> Result<f64> {
    Ok(dirichlet_energy(&DrivingFunction::new(samples.to_vec())?))
}

/// Energy of the polyline `base → vertices` in the frame given by `frame`,
/// which must send `base` to 0.
pub fn energy_in_frame(
    base: f64,
    vertices: &[Point],
    frame: &MobiusMap,
    opts: &EnergyOptions,
) -> Result<(f64, usize, f64)> {
    if vertices.is_empty() {
        return Ok((0.0, 0, 0.0));
    }
    let zip_opts = ZipOptions { stop_modulus: Some(opts.stop_modulus), close_fraction: DEFAULT_CLOSE_FRACTION };
    let zipped = zip_points(base, vertices, &zip_opts, Some(frame))?;
    Ok((dirichlet_energy(&zipped.driving), zipped.consumed, zipped.total_t))
}

/// Loewner energy of a chord between its two real endpoints.
pub fn chord_energy(chord: &Chord, opts: &EnergyOptions) -> Result<EnergyReport> {
    let frame = MobiusMap::fixing(chord.start.into(), chord.end.into())?;
    let (energy, resolution, t_used) = energy_in_frame(chord.start, &chord.vertices, &frame, opts)?;
    let gap = chord.closing_gap();
    Ok(EnergyReport {
        energy,
        t_used,
        tail_hcap_bound: gap * gap,
        resolution,
        low_resolution: resolution < 3 || gap > DEFAULT_CLOSE_FRACTION * (chord.end - chord.start).abs(),
    })
}

/// Where a curve segment is headed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    /// A boundary point of the segment's domain, given in the same coordinates as the segment.
    Boundary(BoundaryPoint),
    /// The tip of the last slit of the ambient stack, which maps to that slit's driving value.
    AmbientTip,
}

/// Partial Loewner energy of `segment` in `ℍ ∖ hull(ambient)` toward `target`.
pub fn partial_energy(
    segment: &CurveSegment,
    target: Target,
    ambient: Option<&MapStack>,
    opts: &EnergyOptions,
) -> Result<f64> {
    if segment.is_empty() {
        return Ok(0.0);
    }
    let empty = MapStack::new();
    let ambient = ambient.unwrap_or(&empty);
    let base = match ambient.apply_boundary(BoundaryPoint::Finite(segment.base))? {
        BoundaryPoint::Finite(x) => x,
        BoundaryPoint::Infinity => return Err(Error::InvalidInput("segment base maps to ∞".into())),
    };
    let target = match target {
        Target::Boundary(p) => ambient.apply_boundary(p)?,
        Target::AmbientTip => BoundaryPoint::Finite(ambient.final_driving().ok_or_else(|| {
            Error::InvalidInput("target is the ambient tip but the ambient stack is empty".into())
        })?),
    };
    let mut images = alloc::vec::Vec::with_capacity(segment.len());
    for (i, &z) in segment.vertices.iter().enumerate() {
        images.push(ambient.apply(z).map_err(|_| Error::Geometry {
            index: i,
            reason: "segment touches the ambient hull".into(),
        })?);
    }
    let frame = MobiusMap::fixing(BoundaryPoint::Finite(base), target)?;
    Ok(energy_in_frame(base, &images, &frame, opts)?.0)
}
