//! Energies checked against integrals that do not go through slit maps.
//!
//! For a curve grown by `W` and measured toward a real point `y`, the energy
//! toward `y` is `½∫ (Ẇ + 6/(W − V))² dt` where `V̇ = 2/(V − W)`, `V(0) = y`.

use loewner_core::verify::g1;
use loewner_core::{chord_energy, partial_energy, BoundaryPoint, CurveSegment, EnergyOptions, Point, Target};

/// Classical fourth-order Runge–Kutta for a system of two equations.
fn rk4(f: impl Fn(f64, [f64; 2]) -> [f64; 2], from: f64, to: f64, y0: [f64; 2], steps: usize) -> [f64; 2] {
    let h = (to - from) / steps as f64;
    let add = |y: [f64; 2], k: [f64; 2], s: f64| [y[0] + s * k[0], y[1] + s * k[1]];
    let mut y = y0;
    for i in 0..steps {
        let t = from + i as f64 * h;
        let k1 = f(t, y);
        let k2 = f(t + h / 2.0, add(y, k1, h / 2.0));
        let k3 = f(t + h / 2.0, add(y, k2, h / 2.0));
        let k4 = f(t + h, add(y, k3, h));
        y = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
    }
    y
}

/// Endpoint and energy of the `sin(4t)` chord closed one unit right of the base's image.
fn g1_oracle() -> (f64, f64) {
    let w = |t: f64| (4.0 * t).sin();
    let w_dot = |t: f64| 4.0 * (4.0 * t).cos();
    // right side of the base, in u = √t where the flow is regular
    let u0 = 1e-6;
    let right = rk4(|u, v| [4.0 * u / (v[0] - w(u * u)), 0.0], u0, 1.0, [2.0 * u0, 0.0], 200_000)[0];
    let y = rk4(|t, v| [2.0 / (v[0] - w(t)), 0.0], 1.0, 0.0, [right + 1.0, 0.0], 200_000)[0];
    let energy = rk4(
        |t, v| {
            let drift = w_dot(t) + 6.0 / (w(t) - v[0]);
            [2.0 / (v[0] - w(t)), 0.5 * drift * drift]
        },
        0.0,
        1.0,
        [y, 0.0],
        200_000,
    )[1];
    (y, energy)
}

fn vertical(h: f64, n: usize) -> CurveSegment {
    CurveSegment::new(0.0, (1..=n).map(|k| Point::new(0.0, h * k as f64 / n as f64)).collect()).unwrap()
}

fn toward_one(seg: &CurveSegment) -> f64 {
    partial_energy(seg, Target::Boundary(BoundaryPoint::Finite(1.0)), None, &EnergyOptions::default()).unwrap()
}

/// `chord_energy` of the 6400-vertex G1, stored when first computed.
const G1_AT_6400: f64 = 7.976_188_209_730_081;

#[test]
fn slit_toward_one_matches_the_closed_form() {
    // W = 0, V = √(1 + 4t), h = 2√t: the integral is 4.5 ln(1 + h²)
    let exact = 4.5 * (1.0f64 + 0.09).ln();
    let coarse = toward_one(&vertical(0.3, 800));
    let fine = toward_one(&vertical(0.3, 6400));
    assert!((coarse - exact).abs() <= 0.03 * exact, "{coarse} vs {exact}");
    assert!((coarse - fine).abs() <= 0.03 * fine, "{coarse} vs {fine}");
    assert!((fine - exact).abs() < (coarse - exact).abs());
}

#[test]
fn g1_energy_matches_the_drift_integral() {
    let (y, exact) = g1_oracle();
    let chord = g1(800).unwrap();
    assert_eq!(chord.start, 0.0);
    assert!((chord.end - y).abs() <= 1e-3, "end {} vs {y}", chord.end);
    let e = chord_energy(&chord, &EnergyOptions::default()).unwrap().energy;
    assert!((e - exact).abs() <= 0.03 * exact, "{e} vs {exact}");
    assert!((G1_AT_6400 - exact).abs() <= 0.2 * (e - exact).abs(), "{G1_AT_6400} vs {exact}");
}

#[test]
fn g1_at_800_is_near_the_6400_reference() {
    let e = chord_energy(&g1(800).unwrap(), &EnergyOptions::default()).unwrap().energy;
    assert!((e - G1_AT_6400).abs() <= 0.03 * G1_AT_6400, "{e}");
}

#[test]
fn g1_reference_is_reproducible() {
    let e = chord_energy(&g1(6400).unwrap(), &EnergyOptions::default()).unwrap().energy;
    assert!((e - G1_AT_6400).abs() <= 1e-9 * G1_AT_6400, "{e}");
}
