use criterion::{criterion_group, criterion_main, Criterion};
use eup_coulomb::oracle::ShootOptions;
use eup_coulomb::verify::{self, Grid};
use eup_coulomb::{dirac, kg, wavefn, DeformationParams, DiracState, KgState, SpaceKind, State, UnitSystem};
use std::hint::black_box;

fn closed_forms(c: &mut Criterion) {
    let mu = eup_coulomb::sommerfeld_mu();
    let states = KgState::all_up_to(6);
    c.bench_function("kg closed form, N ≤ 6", |b| {
        b.iter(|| {
            states
                .iter()
                .map(|s| kg::energy_ratio(s, black_box(20.0 * mu), black_box(-1e-4)).unwrap())
                .sum::<f64>()
        })
    });
    let u = UnitSystem::physical();
    let def = dirac::reference_deformation(&u).unwrap();
    c.bench_function("hydrogen table", |b| {
        b.iter(|| dirac::hydrogen_table(black_box(&u), black_box(&def)))
    });
}

fn root_finding(c: &mut Criterion) {
    let grid = Grid {
        charges: vec![20],
        etas: vec![1e-4],
        spaces: SpaceKind::BOTH.to_vec(),
        equations: vec![eup_coulomb::EquationKind::KleinGordon, eup_coulomb::EquationKind::Dirac],
        max_principal: 3,
    };
    c.bench_function("rootfind grid, 32 cases", |b| {
        b.iter(|| verify::run_rootfind(black_box(&grid), 1e-9))
    });
}

fn shooting(c: &mut Criterion) {
    let mu = eup_coulomb::sommerfeld_mu();
    let d = DeformationParams::from_eta(SpaceKind::AntiDeSitter, 1e-2, &UnitSystem::natural()).unwrap();
    let s = State::Dirac(DiracState::new(3, -2).unwrap());
    let opts = ShootOptions::default();
    let mut g = c.benchmark_group("shooting");
    g.sample_size(20);
    g.bench_function("dirac 3p_3/2, Z = 20", |b| {
        b.iter(|| s.shoot(black_box(20.0 * mu), &d, &opts).unwrap())
    });
    g.finish();
}

fn wavefunctions(c: &mut Criterion) {
    let mu = eup_coulomb::sommerfeld_mu();
    let d = DeformationParams::from_eta(SpaceKind::AntiDeSitter, 1e-4, &UnitSystem::natural()).unwrap();
    let s = KgState::new(4, 1).unwrap();
    c.bench_function("kg radial function, normalized", |b| {
        b.iter(|| wavefn::radial_kg(black_box(&s), 20, &d, mu).unwrap())
    });
}

criterion_group!(benches, closed_forms, root_finding, shooting, wavefunctions);
criterion_main!(benches);
