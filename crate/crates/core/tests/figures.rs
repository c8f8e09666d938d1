use pslet::qdot::{scan_spectrum, ScanAxis};
use pslet::tables::{figure, grid};
use pslet::{DotSolver, Level};

fn solver_for(coulomb: bool) -> DotSolver {
    if coulomb {
        DotSolver::default()
    } else {
        DotSolver::without_coulomb()
    }
}

fn curves(id: u8) -> (Vec<Level>, Vec<f64>, Vec<Vec<f64>>) {
    let spec = figure(id).unwrap();
    let (a, b, s) = spec.grid;
    let g = grid(a, b, s);
    let r = scan_spectrum(&solver_for(spec.coulomb), &spec.levels, spec.axis, &g);
    let n = g.len();
    let e = (0..spec.levels.len())
        .map(|l| (0..n).map(|i| r.energy(l, i, n).unwrap()).collect())
        .collect();
    (spec.levels, g, e)
}

#[test]
fn free_ion_curves_have_minima_only_for_negative_m() {
    let (levels, _, e) = curves(1);
    for (level, ys) in levels.iter().zip(&e) {
        let Level::Ion(st) = level else { unreachable!() };
        let interior_min = ys.windows(3).any(|w| w[1] < w[0] && w[1] < w[2]);
        assert_eq!(interior_min, st.m < 0, "{}", st.tuple());
    }
}

#[test]
fn interaction_curves_rise_with_confinement() {
    let (levels, g, e) = curves(5);
    assert!(matches!(figure(5).unwrap().axis, ScanAxis::BigGamma));
    assert_eq!(g.len(), 100);
    for (level, ys) in levels.iter().zip(&e) {
        assert!(ys.windows(2).all(|w| w[1] > w[0]), "{}", level.label());
    }
}

#[test]
fn interacting_ground_state_changes_symmetry() {
    let spec = figure(7).unwrap();
    let g = grid(0.0, 0.2, 0.01);
    let r = scan_spectrum(&solver_for(true), &spec.levels, spec.axis, &g);
    let label = |i: usize| spec.levels[i].label();
    assert!(r
        .crossings
        .iter()
        .any(|c| label(c.a) == "(0,0;0,0;0)" && label(c.b) == "(0,-1;0,0;1)" && c.lo > 0.05 && c.hi < 0.1));
}
