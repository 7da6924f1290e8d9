use criterion::{black_box, criterion_group, criterion_main, Criterion};
use gqweyl_core::lightcone::{
    build_nodes, random_probes, weyl_residual, GradientMethod, QuadratureSpec, SpacetimeField, TransformedField,
};
use gqweyl_core::polarization::{PolarizedMomentum, Profile};
use gqweyl_core::prequantum::project_wy;
use gqweyl_core::rng::{normal3, stream};
use gqweyl_core::spin::sample_sigma_with;
use gqweyl_core::symplectic::sigma_rank;
use gqweyl_core::{GroupPoint, Helicity, MinkowskiVector, ModelParams};

fn group_point(k: u64) -> GroupPoint {
    let mut rng = stream(5, "bench", k);
    let zeta = sample_sigma_with(&mut rng).expect("sample");
    GroupPoint::new(zeta, MinkowskiVector::from_space_time(normal3(&mut rng), 0.4))
}

fn quadrature(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    c.bench_function("build_nodes default", |b| b.iter(|| build_nodes(black_box(&spec)).unwrap()));

    let params = ModelParams::default();
    let psi = PolarizedMomentum::new(Profile::default(), Helicity::Negative);
    let field = TransformedField::from_spec(&psi, &spec, &params).unwrap();
    let r = MinkowskiVector::new(0.3, -0.2, 0.1, 0.5);
    c.bench_function("transform eval default", |b| b.iter(|| field.eval(black_box(&r))));

    let light = TransformedField::from_spec(&psi, &QuadratureSpec::new(0.5, 2.5, 12, 8), &params).unwrap();
    let grid = random_probes(3, "bench", 20, 1.0);
    c.bench_function("weyl residual fd 20 probes", |b| {
        b.iter(|| weyl_residual(&light, black_box(&grid), GradientMethod::FiniteDifference(1e-3)).unwrap())
    });
}

fn geometry(c: &mut Criterion) {
    let params = ModelParams::default();
    let pt = group_point(0);
    c.bench_function("project_wy", |b| b.iter(|| project_wy(black_box(&pt), &params).unwrap()));
    c.bench_function("sigma_rank", |b| b.iter(|| sigma_rank(black_box(&pt), &params, 1e-9).unwrap()));
}

criterion_group!(benches, quadrature, geometry);
criterion_main!(benches);
