//! Product orderings, maximal elements and the best section of a small support set.

use slicegap::entropy::is_entropy_zero;
use slicegap::order::{
    cartesian_check, maximal_elements, section, section_entropy_scan, small_witness, witness_section, ProductOrdering,
    ScanConfig,
};
use slicegap::support::SupportSet;

fn main() {
    let g = SupportSet::new(
        3,
        vec![vec![1, 1, 1], vec![1, 2, 2], vec![2, 1, 2], vec![2, 2, 1], vec![2, 2, 2]],
    )
    .unwrap();
    let natural = ProductOrdering::natural(&g);
    let top = maximal_elements(&g, &natural).unwrap();
    println!("natural ordering {:?}: maximal elements {:?}", natural.per_axis(), top.points());

    let w = small_witness(&g).unwrap();
    println!("small witness {:?} (zero entropy: {})", w.points(), is_entropy_zero(&w).unwrap());

    match cartesian_check(&g).unwrap() {
        Some(cw) => {
            let (spec, o) = witness_section(&g, &cw).unwrap();
            let sec = section(&g, &spec).unwrap();
            let anti = maximal_elements(&sec, &o).unwrap();
            println!(
                "not a product: axis {} x={:?} z={:?}; section {:?}={:?} has antichain {:?}",
                cw.axis,
                cw.x,
                cw.z,
                spec.axes,
                spec.values,
                anti.points()
            );
        }
        None => println!("support is a product set"),
    }

    let hit = section_entropy_scan(&g, &ScanConfig::default()).unwrap();
    println!(
        "best section: fixed axes {:?} values {:?}, dimension {}, ordering {:?}",
        hit.section.axes,
        hit.section.values,
        hit.dimension,
        hit.ordering.per_axis()
    );
    println!(
        "antichain {:?}, H={:.6}, exp(H)={:.6}, exhaustive={}",
        hit.antichain.points(),
        hit.h_value,
        hit.h_value.exp(),
        hit.exhaustive
    );
}
