use std::f64::consts::PI;

use diffuse_born::forward::{
    born_iterate, convergence_radius, data_function, first_born, tmatrix_direct, tmatrix_symmetric,
    BornOptions, DivergenceReason,
};
use diffuse_born::geometry::{
    build_cube, build_embedded, build_sandwich, build_two_cubes, enclosing_ball, enclosing_radius,
    Medium, ProbeLayout, VoxelGrid,
};
use diffuse_born::green::{ball_integral, born_bound, f_shape, q_self};
use diffuse_born::linalg::{eig_general_all, eig_sym_all, power_max_shifted, solve_linear};
use diffuse_born::operators::{
    assemble_w, assemble_wc, assemble_wc_with_roots, incident_field, polarizabilities,
};
use diffuse_born::spectral::{spectrum_w, SpectralOptions};
use diffuse_born::{Complex64, DenseMatrixR};

use crate::support::{heavy, random_grid, rng, with_kappas};

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn sandwich_signed_count() {
    let g = build_sandwich(0.75, 0.05, 1.0).unwrap();
    assert_eq!(g.len(), 3375);
    let total: f64 = g.kappas().iter().sum();
    assert_eq!(total, 225.0);
}

#[test]
fn embedded_shell_count() {
    let g = build_embedded(1.05, 0.55, 0.05, 1.0, -1.0).unwrap();
    assert_eq!(g.len(), 9261);
    let inner = g.kappas().iter().filter(|&&k| k == -1.0).count();
    assert_eq!(inner, 1331);
    assert_eq!(g.len() - inner, 7930);
}

#[test]
fn two_cube_enclosing_ball_covers_every_corner() {
    let g = build_two_cubes(0.5, 0.05, 1.0, 1.0, 1.0).unwrap();
    let half = g.h() / 2.0;
    let (center, a) = enclosing_ball(&g).unwrap();
    let mut reach: f64 = 0.0;
    let mut diameter: f64 = 0.0;
    let corners: Vec<[f64; 3]> = g
        .centers()
        .iter()
        .flat_map(|c| {
            (0..8).map(move |b| {
                let s = |bit: usize| if b >> bit & 1 == 1 { half } else { -half };
                [c[0] + s(0), c[1] + s(1), c[2] + s(2)]
            })
        })
        .collect();
    let dist = |p: &[f64; 3], q: &[f64; 3]| {
        ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
    };
    for c in &corners {
        reach = reach.max(dist(c, &center));
    }
    // extreme corners are enough for the diameter of a union of boxes
    let (lo, hi) = corners
        .iter()
        .fold(([f64::MAX; 3], [f64::MIN; 3]), |(mut lo, mut hi), c| {
            for d in 0..3 {
                lo[d] = lo[d].min(c[d]);
                hi[d] = hi[d].max(c[d]);
            }
            (lo, hi)
        });
    for c in &corners {
        diameter = diameter.max(dist(c, &lo)).max(dist(c, &hi));
    }
    assert!(reach <= a * (1.0 + 1e-12), "{reach} {a}");
    // padding the center ball costs at most the voxel half-diagonal
    assert!(a >= diameter / 2.0 * (1.0 - 1e-12));
    assert!(a <= diameter / 2.0 + g.h() * 3f64.sqrt() / 2.0);
    let lambda = g.medium().lambda_d();
    let box_half_diagonal = (1.5f64.powi(2) + 0.25 + 0.25).sqrt() * lambda / 2.0;
    assert!((diameter / 2.0 / box_half_diagonal - 1.0).abs() < 1e-12);
}

#[test]
fn cube_enclosing_radius_is_half_diagonal() {
    let g = build_cube(0.5, 0.05, 1.0).unwrap();
    let expected = 3f64.sqrt() * 0.5 * g.medium().lambda_d() / 2.0;
    assert!(relative(enclosing_radius(&g).unwrap(), expected) < 1e-12);
}

#[test]
fn w_trace_vanishes_on_cube() {
    let g = build_cube(0.5, 0.05, 1.0).unwrap();
    let pol = polarizabilities(&g, true).unwrap();
    let w = assemble_w(&g, &pol).unwrap();
    assert_eq!(w.trace(), 0.0);
    let s = eig_sym_all(&w).unwrap();
    assert!(s.sum().abs() < 1e-10 * 1000.0 * s.max_abs());
}

#[test]
fn power_iteration_handles_degenerate_top_pair() {
    let _guard = heavy();
    let g = build_two_cubes(0.5, 0.05, 1.0, 1.0, 1.0).unwrap();
    let pol = polarizabilities(&g, true).unwrap();
    let w = assemble_w(&g, &pol).unwrap();
    let full = eig_sym_all(&w).unwrap();
    let power = power_max_shifted(&w, 1.0, 1e-10, 200_000).unwrap();
    assert!((power.value - full.max().unwrap()).abs() < 1e-8);
}

#[test]
fn strong_contrast_polarizability() {
    let m = Medium::unit();
    let g = build_cube(0.05, 0.05, 4.0).unwrap();
    let pol = polarizabilities(&g, true).unwrap();
    let h = m.lambda_d() / 20.0;
    let v = h * h * h;
    let x = (3.0 / (4.0 * PI)).cbrt() * h;
    let f = 1.0 - (1.0 + x) * (-x).exp();
    let chi = -v * 4.0 / (1.0 + 4.0 * f);
    assert!(relative(pol.chis[0], chi) < 1e-13);
    assert!(relative(pol.q_f, q_self(h, &m)) < 1e-15);
}

#[test]
fn two_voxel_kernel_eigenvalues() {
    let m = Medium::unit();
    let h = 0.3;
    let d = 1.7;
    let g = VoxelGrid::new(m, h, vec![[0.0, 0.0, 0.0], [d, 0.0, 0.0]], vec![0.8, 0.8]).unwrap();
    let pol = polarizabilities(&g, true).unwrap();
    let s = eig_sym_all(&assemble_w(&g, &pol).unwrap()).unwrap();
    let expected = pol.chis[0].abs() * (-d).exp() / (4.0 * PI * d);
    assert!(relative(s.values[0], expected) < 1e-12);
    assert!(relative(s.values[1], -expected) < 1e-12);
}

#[test]
fn w_ignores_contrast_sign_without_self_energy() {
    let mut r = rng(0x51);
    for _ in 0..5 {
        let g = random_grid(&mut r, 4);
        let flipped = with_kappas(&g, g.kappas().iter().map(|k| -k).collect());
        let w = assemble_w(&g, &polarizabilities(&g, false).unwrap()).unwrap();
        let wf = assemble_w(&flipped, &polarizabilities(&flipped, false).unwrap()).unwrap();
        assert_eq!(w, wf);
    }
}

#[test]
fn wc_flips_with_contrast_sign_without_self_energy() {
    let mut r = rng(0x52);
    for _ in 0..5 {
        let g = random_grid(&mut r, 4);
        let flipped = with_kappas(&g, g.kappas().iter().map(|k| -k).collect());
        let pol = polarizabilities(&g, false).unwrap();
        let wc = assemble_wc(&g, &pol).unwrap();
        // the branch sqrt(-chi(-kappa)) = i sqrt(-chi(kappa))
        let rotated: Vec<Complex64> = pol.sqrt_neg().iter().map(|z| Complex64::i() * z).collect();
        let wf = assemble_wc_with_roots(&flipped, &rotated);
        let scale = wc.max_abs();
        for (a, b) in wc.data().iter().zip(wf.data()) {
            assert!((a + b).norm() <= 1e-14 * scale, "{a} {b}");
        }
        // principal roots differ by per-voxel signs, which leave the spectrum alone
        let principal = assemble_wc(&flipped, &polarizabilities(&flipped, false).unwrap()).unwrap();
        let a = eig_general_all(&wc).unwrap();
        let b = eig_general_all(&principal).unwrap();
        let negated = diffuse_born::SpectrumC::new(b.values.iter().map(|w| -w).collect());
        assert!(a.matching_distance(&negated) < 1e-12 * a.max_abs());
    }
}

#[test]
fn wc_sign_flip_with_self_energy_is_approximate() {
    // with Q_F on, |chi(kappa)| and |chi(-kappa)| differ at relative order
    // Q_F |delta alpha|
    let g = build_cube(0.25, 0.05, 1.0).unwrap();
    let flipped = g.scaled(-1.0).unwrap();
    let a =
        eig_general_all(&assemble_wc(&g, &polarizabilities(&g, true).unwrap()).unwrap()).unwrap();
    let b = eig_general_all(
        &assemble_wc(&flipped, &polarizabilities(&flipped, true).unwrap()).unwrap(),
    )
    .unwrap();
    let negated = diffuse_born::SpectrumC::new(b.values.iter().map(|w| -w).collect());
    let d = a.matching_distance(&negated);
    assert!(d > 0.0);
    assert!(d < 3.0 * g.q_f() * a.max_abs(), "{d}");
}

#[test]
fn wc_global_branch_flip_is_invisible() {
    let mut r = rng(0x53);
    let g = random_grid(&mut r, 4);
    let pol = polarizabilities(&g, true).unwrap();
    let roots = pol.sqrt_neg();
    let flipped: Vec<Complex64> = roots.iter().map(|z| -z).collect();
    assert_eq!(
        assemble_wc_with_roots(&g, &roots),
        assemble_wc_with_roots(&g, &flipped)
    );
}

#[test]
fn probe_kernel_decays_along_detector_line() {
    let g = build_cube(0.25, 0.05, 1.0).unwrap();
    let detectors: Vec<[f64; 3]> = (0..12).map(|i| [0.5 + 0.1 * i as f64, 0.0, 0.0]).collect();
    let probes = ProbeLayout::from_wavelengths(g.medium(), vec![[-0.5, 0.0, 0.0]], detectors);
    let pol = polarizabilities(&g, true).unwrap();
    let data = data_function(&g, &pol, &probes).unwrap();
    for i in 1..12 {
        assert!(data.g0_ds.get(i, 0) < data.g0_ds.get(i - 1, 0));
        assert!(data.delta.get(i, 0).abs() < data.delta.get(i - 1, 0).abs());
    }
}

#[test]
fn weaker_contrast_smaller_w_max() {
    let opts = SpectralOptions::default();
    let half = spectrum_w(&build_cube(0.5, 0.05, 0.5).unwrap(), &opts)
        .unwrap()
        .w_max;
    let full = spectrum_w(&build_cube(0.5, 0.05, 1.0).unwrap(), &opts)
        .unwrap()
        .w_max;
    assert!(half < full);
}

#[test]
fn cube_tmatrix_is_symmetric_and_matches_symmetric_form() {
    let _guard = heavy();
    let g = build_cube(0.5, 0.05, 1.0).unwrap();
    let pol = polarizabilities(&g, true).unwrap();
    let t = tmatrix_direct(&g, &pol).unwrap();
    let scale = t.max_abs();
    assert!(t.symmetry_defect() < 1e-10 * scale);
    let ts = tmatrix_symmetric(&g, &pol).unwrap();
    assert!(t.sub(&ts).unwrap().max_abs() < 1e-10 * scale);
}

#[test]
fn positive_contrast_tmatrix_from_identity_plus_w() {
    let g = build_cube(0.25, 0.05, 0.7).unwrap();
    let pol = polarizabilities(&g, true).unwrap();
    let n = g.len();
    let s = pol.sqrt_abs();
    let w = assemble_w(&g, &pol).unwrap();
    let k = DenseMatrixR::from_fn(n, n, |i, j| w.get(i, j) + if i == j { 1.0 } else { 0.0 });
    let inv = solve_linear(&k, &DenseMatrixR::identity(n)).unwrap().x;
    let expected = DenseMatrixR::from_fn(n, n, |i, j| -s[i] * inv.get(i, j) * s[j]);
    let t = tmatrix_direct(&g, &pol).unwrap();
    assert!(t.sub(&expected).unwrap().max_abs() < 1e-12 * t.max_abs());
}

#[test]
fn eight_voxel_mixed_tmatrix() {
    let m = Medium::unit();
    let h = 0.4;
    let mut centers = Vec::new();
    let mut kappas = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                centers.push([i as f64 * h, j as f64 * h, k as f64 * h]);
                kappas.push(if (i + j + k) % 2 == 0 { 1.3 } else { -0.6 });
            }
        }
    }
    let g = VoxelGrid::new(m, h, centers, kappas).unwrap();
    let pol = polarizabilities(&g, true).unwrap();
    let a = tmatrix_direct(&g, &pol).unwrap();
    let b = tmatrix_symmetric(&g, &pol).unwrap();
    assert!(a.sub(&b).unwrap().max_abs() < 1e-10);
}

#[test]
fn isolated_voxel_born_is_one_step() {
    let g = build_cube(0.05, 0.05, 2.0).unwrap();
    let pol = polarizabilities(&g, true).unwrap();
    let u = DenseMatrixR::from_fn(1, 1, |_, _| 0.37);
    let rep = born_iterate(&g, &pol, &u, &BornOptions::default()).unwrap();
    assert!(rep.converged);
    assert_eq!(rep.iterations, 1);
    assert_eq!(rep.dipoles.unwrap().get(0, 0), pol.chis[0] * 0.37);
}

#[test]
fn strong_contrast_born_diverges() {
    let opts = SpectralOptions::default();
    let cube = build_cube(0.5, 0.05, 1.0).unwrap();
    let w1 = spectrum_w(&cube, &opts).unwrap().w_max;
    let g = cube.scaled(1.5 / w1).unwrap();
    let pol = polarizabilities(&g, true).unwrap();
    assert!(convergence_radius(&g, &pol).unwrap() > 1.0);
    let probes = ProbeLayout::from_wavelengths(g.medium(), vec![[1.0, 0.0, 0.0]], vec![]);
    let u = incident_field(&g, &probes).unwrap();
    let rep = born_iterate(&g, &pol, &u, &BornOptions::default()).unwrap();
    assert!(!rep.converged);
    assert_eq!(rep.divergence, DivergenceReason::ResidualGrowth);
}

#[test]
fn absorber_reduces_transmission() {
    let g = build_cube(0.25, 0.05, 1.0).unwrap();
    let pol = polarizabilities(&g, true).unwrap();
    let probes = ProbeLayout::from_wavelengths(
        g.medium(),
        vec![[-0.6, 0.0, 0.0], [-0.6, 0.2, 0.1]],
        vec![[0.6, 0.0, 0.0], [0.6, -0.1, 0.2], [0.7, 0.3, 0.0]],
    );
    let data = data_function(&g, &pol, &probes).unwrap();
    assert!(data.delta.data().iter().all(|&x| x < 0.0));
    let born1 = first_born(&g, &probes).unwrap();
    assert!(born1.data().iter().all(|&x| x < 0.0));
}

#[test]
fn data_function_is_reciprocal() {
    let mut r = rng(0x54);
    let g = random_grid(&mut r, 4);
    let lambda = g.medium().lambda_d();
    let probes = ProbeLayout::new(
        vec![[-0.7 * lambda, 0.1, 0.0], [-0.6 * lambda, -0.2, 0.3]],
        vec![
            [1.2 * lambda, 0.0, 0.0],
            [1.1 * lambda, 0.4, 0.1],
            [0.9 * lambda, 0.0, 1.5],
        ],
    );
    let pol = polarizabilities(&g, true).unwrap();
    let forward = data_function(&g, &pol, &probes).unwrap().g_ds;
    let backward = data_function(&g, &pol, &probes.swapped()).unwrap().g_ds;
    let scale = forward.max_abs();
    assert!(forward.sub(&backward.transpose()).unwrap().max_abs() < 1e-12 * scale);
}

#[test]
fn weak_contrast_data_approaches_first_born() {
    let probes = |g: &VoxelGrid| {
        ProbeLayout::from_wavelengths(g.medium(), vec![[-0.6, 0.0, 0.0]], vec![[0.6, 0.1, 0.0]])
    };
    let mut previous = f64::INFINITY;
    for kappa in [1e-1, 1e-2, 1e-3] {
        let g = build_cube(0.25, 0.05, kappa).unwrap();
        let pol = polarizabilities(&g, true).unwrap();
        let p = probes(&g);
        let exact = data_function(&g, &pol, &p).unwrap().delta.get(0, 0);
        let born1 = first_born(&g, &p).unwrap().get(0, 0);
        let err = relative(born1, exact);
        assert!(err < 2.0 * kappa, "kappa={kappa}: {err}");
        assert!(err < previous);
        previous = err;
    }
}

#[test]
fn definite_weak_cube_converges() {
    let g = build_cube(0.5, 0.05, 1.0).unwrap();
    let pol = polarizabilities(&g, true).unwrap();
    assert!(convergence_radius(&g, &pol).unwrap() < 1.0);
    let probes = ProbeLayout::from_wavelengths(g.medium(), vec![[0.0, 0.0, 1.0]], vec![]);
    let u = incident_field(&g, &probes).unwrap();
    assert!(
        born_iterate(&g, &pol, &u, &BornOptions::default())
            .unwrap()
            .converged
    );
}

#[test]
fn eigenvalues_of_half_wavelength_cube_inside_unit_interval() {
    let s = spectrum_w(
        &build_cube(0.5, 0.05, 1.0).unwrap(),
        &SpectralOptions::default(),
    )
    .unwrap();
    let spectrum = s.spectrum.as_real().unwrap();
    assert!(spectrum.values.iter().all(|w| w.abs() < 1.0));
}

#[test]
fn ball_integral_center_and_bound_constants() {
    let m = Medium::unit();
    for a in [0.1, 1.0, 4.0] {
        let center = ball_integral(0.0, a, &m).unwrap();
        assert!(relative(center, f_shape(a).unwrap()) < 1e-14);
    }
    let t = born_bound(1.0, &m).unwrap().threshold;
    assert!((t - 1.0 / (1.0 - 2.0 * (-1.0f64).exp())).abs() < 1e-12);
    assert!((t - 3.78442).abs() < 1e-4);
}
