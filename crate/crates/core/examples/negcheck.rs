use qct_core::matrix::{hermitian_eigenvalues, C64, ComplexMatrix};

fn main() {
    let bell = qct_core::channel::DensityState::maximally_entangled(2);
    let dep = qct_core::channel::depolarizing(0.5).unwrap();
    let joint = dep.tensor(&dep);
    let out = joint.apply(&bell).unwrap().with_factors(&[2, 2]).unwrap();
    let m = out.matrix();
    let (da, db) = (2usize, 2usize);
    let pt = ComplexMatrix::from_fn(da * db, da * db, |row, col| {
        let (a, b) = (row / db, row % db);
        let (ap, bp) = (col / db, col % db);
        m.at(a * db + bp, ap * db + b)
    });
    let eigs = hermitian_eigenvalues(&pt).unwrap();
    println!("PT eigenvalues: {eigs:?}");
    let neg: f64 = eigs.iter().filter(|&&v| v < 0.0).map(|v| -v).sum();
    println!("neg = {neg:?}");
    let _ = C64::new(0.0, 0.0);
}
