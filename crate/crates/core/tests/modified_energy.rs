mod common;

use common::{lambda4_oracle, smooth_field};
use hartree::dynamics::advance;
use hartree::iop::{e1, ThetaParams};
use hartree::modified_energy::{
    de1_dt_direct, de2_dt_terms, e2, lambda4, lambda4_complex, m4, resonant_zero_audit, M4Params,
    Quadruplet, ResonanceParams, ResonanceRule,
};
use hartree::spectral::{make_grid, make_potential, Mode, PotentialPreset, SpectralField};
use proptest::prelude::*;

fn torus_params(k: usize, n_cut: f64, s: f64, preset: PotentialPreset) -> M4Params {
    let g = make_grid(k).unwrap();
    M4Params::new(
        ThetaParams::new(n_cut, s).unwrap(),
        ResonanceParams::for_cutoff(ResonanceRule::Torus, n_cut, 1.0).unwrap(),
        make_potential(preset, &g).unwrap(),
    )
}

#[test]
fn lambda4_matches_quadruple_loop_oracle() {
    let g = make_grid(8).unwrap();
    for seed in 0..20u64 {
        let n_cut = [2, 3][seed as usize % 2];
        let sigma = 1.0 + 0.25 * seed as f64;
        let p = torus_params(8, n_cut as f64, 2.0, PotentialPreset::Gaussian { sigma });
        let f = smooth_field(&g, 1.0, 1.0, seed);
        let got = lambda4_complex(&p, &f).unwrap();
        let want = lambda4_oracle(&f, n_cut, 2.0, sigma);
        let err = (got - want).norm() / want.norm();
        assert!(err < 1e-12, "seed {seed}: {got} vs {want} ({err:e})");
    }
}

#[test]
fn lambda4_is_real() {
    let g = make_grid(16).unwrap();
    let p = torus_params(16, 4.0, 2.0, PotentialPreset::Delta);
    for seed in 0..3 {
        let f = smooth_field(&g, 1.0, 2.0, seed);
        let z = lambda4_complex(&p, &f).unwrap();
        assert!(z.im.abs() < 1e-12 * z.re.abs(), "{z}");
    }
}

#[test]
fn lambda4_vanishes_when_data_lies_below_the_cutoff() {
    let g = make_grid(8).unwrap();
    // Every K = 8 mode has |n| ≤ 3√2 < 5, so θ ≡ 1 on the support.
    let p = torus_params(8, 5.0, 2.0, PotentialPreset::Delta);
    let f = smooth_field(&g, 1.0, 1.0, 3);
    assert_eq!(lambda4(&p, &f).unwrap(), 0.0);
    assert_eq!(e2(&f, &p).unwrap(), e1(&f, &p.theta));
}

#[test]
fn resonant_quadruplets_carry_no_multiplier() {
    let g = make_grid(8).unwrap();
    for (n_cut, s) in [(2.0, 2.0), (3.0, 1.5), (1.5, 3.0)] {
        let p = torus_params(8, n_cut, s, PotentialPreset::Gaussian { sigma: 2.0 });
        let r = resonant_zero_audit(&g, &p).unwrap();
        assert!(r.resonant_checked > 0);
    }
}

fn mode() -> impl Strategy<Value = Mode> {
    (-6i64..=6, -6i64..=6).prop_map(|(x, y)| Mode::new(x, y))
}

proptest! {
    #[test]
    fn m4_is_invariant_under_pair_swap(n1 in mode(), n2 in mode(), n3 in mode()) {
        let n4 = -(n1 + n2 + n3);
        let p = torus_params(16, 2.0, 2.0, PotentialPreset::Gaussian { sigma: 3.0 });
        let a = m4(&Quadruplet::new(n1, n2, n3, n4).unwrap(), &p);
        let b = m4(&Quadruplet::new(n3, n4, n1, n2).unwrap(), &p);
        prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(1.0));
    }

    #[test]
    fn m4_is_even(n1 in mode(), n2 in mode(), n3 in mode()) {
        let n4 = -(n1 + n2 + n3);
        let p = torus_params(16, 2.0, 1.5, PotentialPreset::Delta);
        let a = m4(&Quadruplet::new(n1, n2, n3, n4).unwrap(), &p);
        let b = m4(&Quadruplet::new(-n1, -n2, -n3, -n4).unwrap(), &p);
        prop_assert_eq!(a, b);
    }
}

/// Centered difference of a functional along one Strang step of ±h.
fn along_flow(
    f: &SpectralField,
    preset: PotentialPreset,
    h: f64,
    functional: impl Fn(&SpectralField) -> f64,
) -> f64 {
    let v = make_potential(preset, f.grid()).unwrap();
    let plus = advance(f, &v, h, 1).unwrap();
    let minus = advance(f, &v, -h, 1).unwrap();
    (functional(&plus) - functional(&minus)) / (2.0 * h)
}

#[test]
fn de1_dt_matches_finite_difference() {
    let preset = PotentialPreset::Gaussian { sigma: 2.5 };
    for seed in [11u64, 12] {
        let f = smooth_field(&make_grid(8).unwrap(), 1.0, 2.0, seed);
        let p = torus_params(8, 2.0, 2.0, preset);
        let direct = de1_dt_direct(&f, &p).unwrap();
        let big = f.embed(&make_grid(32).unwrap()).unwrap();
        let fd = along_flow(&big, preset, 1e-4, |u| e1(u, &p.theta));
        let err = (fd - direct).abs() / direct.abs();
        assert!(err < 1e-6, "seed {seed}: {direct} vs {fd} ({err:e})");
    }
}

#[test]
fn de2_dt_splits_into_resonant_and_sextic_parts() {
    let preset = PotentialPreset::Delta;
    for seed in [21u64, 22] {
        let f = smooth_field(&make_grid(4).unwrap(), 1.0, 1.0, seed);
        let p = M4Params::new(
            ThetaParams::new(1.0, 1.0).unwrap(),
            ResonanceParams::fixed(0.5).unwrap(),
            make_potential(preset, f.grid()).unwrap(),
        );
        let terms = de2_dt_terms(&f, &p).unwrap();
        assert!(terms.imag[0].abs() < 1e-12 && terms.imag[1].abs() < 1e-12);
        assert!(terms.resonant != 0.0 && terms.sextic != 0.0);

        let big = f.embed(&make_grid(16).unwrap()).unwrap();
        let mut p_big = p.clone();
        p_big.potential = make_potential(preset, big.grid()).unwrap();
        let fd = along_flow(&big, preset, 1e-4, |u| e2(u, &p_big).unwrap());
        let err = (fd - terms.total()).abs() / terms.total().abs();
        assert!(err < 1e-4, "seed {seed}: {terms:?} vs {fd} ({err:e})");
    }
}

#[test]
fn correction_shrinks_as_cutoff_grows() {
    let g = make_grid(16).unwrap();
    let f = smooth_field(&g, 1.0, 4.0, 7);
    let ratios: Vec<f64> = [4.0, 8.0, 16.0, 32.0]
        .iter()
        .map(|&n| {
            let p = torus_params(16, n, 2.0, PotentialPreset::Gaussian { sigma: 2.0 });
            lambda4(&p, &f).unwrap().abs() / e1(&f, &p.theta)
        })
        .collect();
    for w in ratios.windows(2) {
        assert!(w[1] <= 1.05 * w[0], "{ratios:?}");
    }
    assert!(ratios[3] <= 0.5 * ratios[0], "{ratios:?}");
}
