use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use hodgewitt::cohomology::{cohomology_length, ComplexSpec, DegreeWindow};
use hodgewitt::pushforward::FiniteCover;
use hodgewitt::witt::beta;
use hodgewitt::{HowellMatrix, LaurentPoly, LogForm, Modulus, PoleVector, VarRoster};

fn howell(c: &mut Criterion) {
    let m = Modulus::new(2, 4).unwrap();
    let rows: Vec<Vec<u64>> = (0..24).map(|i| (0..24).map(|j| ((i * 7 + j * 13 + i * j) % 16) as u64).collect()).collect();
    c.bench_function("howell 24x24 over Z/16", |b| b.iter(|| HowellMatrix::from_residues(m, 24, black_box(rows.clone()))));
}

fn cohomology(c: &mut Criterion) {
    let r = VarRoster::parse("t:log, s:plain").unwrap();
    let spec = ComplexSpec::log_poles(&r, &PoleVector::new(&r, &[("t", 4)]).unwrap(), 2, 2).unwrap();
    let w = DegreeWindow::uniform(&r, -8, 8).unwrap();
    c.bench_function("H^1 of t^-4 Omega(log) over Z/4", |b| b.iter(|| cohomology_length(black_box(&spec), 1, &w).unwrap()));
}

fn witt(c: &mut Criterion) {
    let r = VarRoster::parse("t:log, s:plain").unwrap();
    let m = Modulus::new(3, 6).unwrap();
    let f = LaurentPoly::parse("t^-27 + 9*s*t^-9 + 27*s^2", &r, m).unwrap();
    c.bench_function("beta over Z/27", |b| b.iter(|| beta(black_box(&f), 3).unwrap()));
}

fn trace(c: &mut Criterion) {
    let r = VarRoster::parse("t:log, s:plain").unwrap();
    let m = Modulus::new(2, 2).unwrap();
    let src = r.renamed(0, "t'").unwrap();
    let u = LaurentPoly::parse("1 + 2*s", &src, m).unwrap();
    let f = FiniteCover::new(&r, "t", "t'", &u, 4).unwrap();
    let w = LogForm::parse("t'^-7 * s * dlog(t') w d(s) + t'^3 * dlog(t') w d(s)", &src, m).unwrap();
    c.bench_function("pushforward along t = (1+2s) t'^4", |b| b.iter(|| f.pushforward(black_box(&w)).unwrap()));
}

criterion_group!(benches, howell, cohomology, witt, trace);
criterion_main!(benches);
