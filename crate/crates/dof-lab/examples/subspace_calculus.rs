//! Subspace calculus on a worked 3-D instance.
//!
//! Builds the two planes L1 = span{[1,1,0],[2,0,3]} and
//! L2 = span{[2,-1,4],[-2,-3,1]}, then walks through complement,
//! intersection and set-minus on the exact rational backend.
//!
//! Run with: `cargo run --example subspace_calculus`

use dof_lab::subspace::RSubspace;

fn show(label: &str, s: &RSubspace) {
    let cols: Vec<String> = (0..s.dim())
        .map(|j| {
            let entries: Vec<String> = (0..s.ambient_dim())
                .map(|i| s.basis().get(i, j).to_string())
                .collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    println!("{label}: dim {} = span{{{}}}", s.dim(), cols.join(", "));
}

fn main() {
    let l1 = RSubspace::from_int_columns(3, &[vec![1, 1, 0], vec![2, 0, 3]]).unwrap();
    let l2 = RSubspace::from_int_columns(3, &[vec![2, -1, 4], vec![-2, -3, 1]]).unwrap();
    show("L1", &l1);
    show("L2", &l2);

    let c1 = l1.complement();
    let c2 = l2.complement();
    show("L1 orthogonal complement", &c1);
    show("L2 orthogonal complement", &c2);

    // The intersection is the complement of the span of the two complements.
    let meet = l1.intersect(&l2).unwrap();
    show("L1 ∩ L2", &meet);
    let expect = RSubspace::from_int_columns(3, &[vec![4, 2, 3]]).unwrap();
    println!(
        "  equals span{{[4, 2, 3]}}: {}",
        meet.span_eq(&expect).unwrap()
    );

    let diff = l1.subtract(&l2).unwrap();
    show("L1 \\ L2", &diff);
    let expect = RSubspace::from_int_columns(3, &[vec![5, 17, -18]]).unwrap();
    println!(
        "  equals span{{[5, 17, -18]}}: {}",
        diff.span_eq(&expect).unwrap()
    );

    // (L1 ∩ L2) ⊕ (L1 \ L2) restores L1 orthogonally.
    let rebuilt = meet.union_span(&diff).unwrap();
    println!(
        "(L1 ∩ L2) ⊕ (L1 \\ L2) spans L1 again: {}",
        rebuilt.span_eq(&l1).unwrap()
    );

    // The modular rank law, on a couple of generic float draws.
    let a = dof_lab::subspace::FSubspace::random_generic(5, 3, 1).unwrap();
    let b = dof_lab::subspace::FSubspace::random_generic(5, 3, 2).unwrap();
    println!(
        "generic 3-planes in R^5: dim(a ∩ b) = {}, dim(a ∪ b) = {} (law: {} + {} = {} + {})",
        a.intersect(&b).unwrap().dim(),
        a.union_span(&b).unwrap().dim(),
        a.intersect(&b).unwrap().dim(),
        a.union_span(&b).unwrap().dim(),
        a.dim(),
        b.dim(),
    );
}
