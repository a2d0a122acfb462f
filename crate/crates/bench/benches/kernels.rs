use std::hint::black_box;

use compactnet_core::spaces::{ap_constant, CubeFamily};
use compactnet_core::{
    build_certificate, sample, translation_modulus, Family, Grid, Primitive, Region, Variant,
    WeightSpec, WeightedSpace,
};
use criterion::{criterion_group, criterion_main, Criterion};

fn gaussians(grid: &Grid, count: usize) -> Family {
    let members = (0..count)
        .map(|k| {
            let c = -2.0 + 4.0 * k as f64 / count as f64;
            sample(
                &Primitive::Gaussian {
                    center: vec![c; grid.dim()],
                    sigma: 0.5,
                    amplitude: 1.0,
                },
                grid,
            )
            .unwrap()
        })
        .collect();
    Family::unlabeled(members).unwrap()
}

fn norms(c: &mut Criterion) {
    let grid = Grid::new(1, 2, -12).unwrap();
    let space = WeightedSpace::from_spec(2.0, &WeightSpec::Power(0.5), &grid).unwrap();
    let family = gaussians(&grid, 1);
    let f = &family.members()[0];
    c.bench_function("weighted_norm_1d_2^15_cells", |b| {
        b.iter(|| space.norm(black_box(f)).unwrap())
    });
}

fn translation(c: &mut Criterion) {
    let grid = Grid::new(2, 2, -4).unwrap();
    let space = WeightedSpace::lebesgue(2.0, grid).unwrap();
    let family = gaussians(&grid, 4);
    let r = 4.0 * grid.cell_side();
    c.bench_function("translation_modulus_2d_box_4h", |b| {
        b.iter(|| translation_modulus(black_box(&family), &space, r, Region::Box).unwrap())
    });
}

fn muckenhoupt(c: &mut Criterion) {
    let grid = Grid::new(2, 0, -6).unwrap();
    let w = WeightSpec::Power(0.5).sample(&grid).unwrap();
    c.bench_function("ap_constant_2d_all_cubes", |b| {
        b.iter(|| ap_constant(black_box(&w), 2.0, CubeFamily::all(&grid)).unwrap())
    });
}

fn certificate(c: &mut Criterion) {
    let grid = Grid::new(1, 2, -8).unwrap();
    let space = WeightedSpace::from_spec(2.0, &WeightSpec::Power(0.5), &grid).unwrap();
    let family = gaussians(&grid, 20);
    let eps = 0.1 * compactnet_core::bound_modulus(&family, &space).unwrap();
    let mut group = c.benchmark_group("certificate");
    group.sample_size(10);
    group.bench_function("build_20_gaussians_1d", |b| {
        b.iter(|| build_certificate(black_box(&family), &space, eps, Variant::Banach).unwrap())
    });
    group.finish();
}

criterion_group!(benches, norms, translation, muckenhoupt, certificate);
criterion_main!(benches);
