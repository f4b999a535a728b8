use loewner_core::verify::{g1, geodesic_chord, map_distance};
use loewner_core::{chord_energy, local_reversal_step, reverse_chord, EnergyOptions, ReversalOptions, ReversalState};

#[test]
fn geodesic_reverses_to_itself() {
    let chord = geodesic_chord(-1.0, 1.0, 200).unwrap();
    let (reversed, ledger) = reverse_chord(&chord, 8, &ReversalOptions::default()).unwrap();
    assert_eq!((reversed.start, reversed.end), (1.0, -1.0));
    assert_eq!(ledger.records.len(), 8);
    let e = chord_energy(&reversed, &EnergyOptions::default()).unwrap().energy;
    assert!(e <= 0.01, "{e}");
    assert!(reversed.vertices.iter().all(|z| (z.norm() - 1.0).abs() < 1e-9));
    assert!(map_distance(&reversed, &chord.reversed(), 8.0, 64).unwrap() < 0.01);
}

#[test]
fn first_step_on_g1_keeps_the_energy() {
    let state = ReversalState::new(&g1(800).unwrap(), ReversalOptions::default()).unwrap();
    let before = state.ledger.initial_energy;
    let eps = state.total_t() / 16.0;
    let after = local_reversal_step(state, eps).unwrap();
    let r = after.ledger.records.last().unwrap();
    assert!(r.energy_total <= before + 1e-3, "{} after {before}", r.energy_total);
}

#[test]
fn failed_reversals_keep_their_ledger() {
    let chord = geodesic_chord(-1.0, 1.0, 50).unwrap();
    let err = reverse_chord(&chord, 0, &ReversalOptions::default()).unwrap_err();
    assert!(err.ledger.records.is_empty());
}
