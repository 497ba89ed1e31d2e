use enriques_ihc::groebner::{smoothness_certificate, CellDecomposition, DEFAULT_BUDGET};
use enriques_ihc::paperlab::build_instance;

fn main() {
    let inst = build_instance(101, 1).unwrap();
    let minors = inst.special_matrix_mod_p().minors(2).unwrap();
    let d = CellDecomposition::of_ring(inst.ring_p()).unwrap();
    let start = std::time::Instant::now();
    let report = smoothness_certificate(&minors, 2, &d, DEFAULT_BUDGET);
    println!("total {:?}", start.elapsed());
    for c in &report.cells {
        println!("{:<12} {} steps={} millis={}", c.label, c.status, c.steps, c.millis);
    }
}
