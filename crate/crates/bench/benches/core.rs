use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use snbound_core::casson_gordon::{
    satellite_sigma_eta, Companion, Curve, InfectionSite, PatternBaseTable, PatternNode,
};
use snbound_core::ccomplex_link::build_hermitian;
use snbound_core::exact_algebra::hermitian_signature;
use snbound_core::seifert_knot::{alexander_polynomial, lt_form};
use snbound_core::{CComplexData, IntegerMatrix, LinkingForm, RootOfUnity, SatelliteTree, SeifertMatrix};

fn left_torus_2(n: usize) -> SeifertMatrix {
    let k = n - 1;
    let rows: Vec<Vec<i64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        1
                    } else if i == j + 1 {
                        -1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    SeifertMatrix::from_rows(&rows).unwrap()
}

fn signatures(c: &mut Criterion) {
    let k = left_torus_2(13);
    let h = lt_form(&k, &RootOfUnity::new(2, 15)).unwrap();
    c.bench_function("lt signature T(2,13) at 2/15", |b| {
        b.iter(|| hermitian_signature(black_box(&h)))
    });

    let a = IntegerMatrix::from_rows(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]]);
    let cc = CComplexData::constant(3, vec![0, 0, 1, 1, 2, 2], a).unwrap();
    let w = [RootOfUnity::new(1, 3), RootOfUnity::new(1, 4), RootOfUnity::new(2, 5)];
    c.bench_function("c-complex signature, 3 colors", |b| {
        b.iter(|| hermitian_signature(&build_hermitian(black_box(&cc), &w).unwrap()))
    });
}

fn alexander(c: &mut Criterion) {
    let k = left_torus_2(17).connected_sum(&SeifertMatrix::from_rows(&[[0, 1], [2, 0]]).unwrap());
    c.bench_function("alexander polynomial, genus 9", |b| {
        b.iter(|| alexander_polynomial(black_box(&k)))
    });
}

fn metabolizers(c: &mut Criterion) {
    let k = SeifertMatrix::from_rows(&[[0, 1], [2, 0]]).unwrap();
    let k = k.connected_sum(&k).connected_sum(&k);
    let lf = LinkingForm::from_seifert(&k).unwrap();
    c.bench_function("metabolizers of (Z3)^6", |b| {
        b.iter(|| black_box(&lf).enumerate_metabolizers().unwrap())
    });
}

fn satellite(c: &mut Criterion) {
    let table = Arc::new(
        PatternBaseTable::zero(
            "R",
            vec!["e".into(), "f".into()],
            IntegerMatrix::from_rows(&[[0, 3], [3, 0]]),
        )
        .unwrap(),
    );
    let j = left_torus_2(9);
    let sites = vec![
        InfectionSite::new("a", Curve::label("e"), Companion::knot(j.clone())),
        InfectionSite::new("b", Curve::label("f"), Companion::knot(j)),
    ];
    let seifert = SeifertMatrix::from_rows(&[[0, 1], [2, 0]]).unwrap();
    let tree = SatelliteTree::Pattern(PatternNode::new("R", vec![table], sites, Some(seifert)).unwrap());
    let chars = tree.characters();
    c.bench_function("satellite sum over all characters", |b| {
        b.iter(|| {
            for chi in &chars {
                black_box(satellite_sigma_eta(&tree, chi, 2).unwrap());
            }
        })
    });
}

criterion_group!(benches, signatures, alexander, metabolizers, satellite);
criterion_main!(benches);
