//! Concise reduction of a padded tensor, then one elimination step between two sections.

use slicegap::format::write_tensor;
use slicegap::tensor::{concise_reduce, eliminate_section_point, make_tensor};

fn main() {
    // 3x3x3 over F_3 whose third slice along axis 0 is the sum of the first two (mod 3).
    let v = make_tensor(
        3,
        3,
        &[3, 3, 3],
        &[
            (vec![1, 1, 1], 1),
            (vec![1, 2, 2], 1),
            (vec![2, 1, 1], 2),
            (vec![2, 3, 3], 1),
            (vec![3, 2, 2], 1),
            (vec![3, 3, 3], 1),
        ],
    )
    .unwrap();
    println!("input shape {:?}, flattening ranks {:?}", v.shape(), v.flattening_ranks());

    let (c, steps) = concise_reduce(&v).unwrap();
    println!("concise shape {:?} after {} basis steps", c.shape(), steps.len());
    print!("{}", write_tensor(&c));

    // undoing the steps recovers the input
    let mut back = c.clone();
    for s in steps.iter().rev() {
        back = back.undo_step(s).unwrap();
    }
    println!("recovered: {}", back == v);

    // clear (2, 1, 1) out of section 2 on axis 0, using section 1 as pivot
    let (w, t) = eliminate_section_point(&c, 0, 1, 2, &[1, 1]).unwrap();
    println!("axis transform on axis {}:\n{:?}", t.axis(), t.matrix());
    println!("support before {:?}", c.support().points());
    println!("support after  {:?}", w.support().points());
    println!("class unchanged: {:?} -> {:?}", c.slice_class(), w.slice_class());
}
