//! Runs the witness engine on a few tensors and prints the asymptotic slice-rank window.

use slicegap::field::PrimeField;
use slicegap::tensor::{make_tensor, DenseTensor};
use slicegap::witness::{witness_and_bounds, EngineConfig};

fn main() {
    let f3 = PrimeField::new(3).unwrap();
    let cases: Vec<(&str, DenseTensor)> = vec![
        ("diagonal 2x2x2 / F_2", make_tensor(3, 2, &[2, 2, 2], &[(vec![1, 1, 1], 1), (vec![2, 2, 2], 1)]).unwrap()),
        (
            "W state / F_3",
            make_tensor(3, 3, &[2, 2, 2], &[(vec![2, 1, 1], 1), (vec![1, 2, 1], 1), (vec![1, 1, 2], 1)]).unwrap(),
        ),
        ("all ones 2x2x2 / F_3", DenseTensor::outer(f3, &[vec![1, 1], vec![1, 1], vec![1, 1]]).unwrap()),
        (
            "3x3x3 diagonal / F_3",
            make_tensor(3, 3, &[3, 3, 3], &[(vec![1, 1, 1], 1), (vec![2, 2, 2], 2), (vec![3, 3, 3], 1)]).unwrap(),
        ),
        (
            "matrix multiplication 2x2 / F_3",
            {
                // <2,2,2>: e_{ij} ⊗ e_{jk} ⊗ e_{ki}, flattened to 4x4x4
                let mut e = Vec::new();
                for i in 0..2 {
                    for j in 0..2 {
                        for k in 0..2 {
                            e.push((vec![2 * i + j + 1, 2 * j + k + 1, 2 * k + i + 1], 1));
                        }
                    }
                }
                make_tensor(3, 3, &[4, 4, 4], &e).unwrap()
            },
        ),
    ];
    let cfg = EngineConfig::default();
    for (name, v) in cases {
        match witness_and_bounds(&v, &cfg) {
            Ok((w, b)) => println!(
                "{name:<32} {:?}  H={:.6}  window [{:.6}, {:.6}]  steps={} rounds={} {:?}",
                w.slice_class,
                w.h_value,
                b.lower_base,
                b.upper_base,
                w.transforms.len(),
                w.iterations,
                w.certificate
            ),
            Err(e) => println!("{name:<32} {e}"),
        }
    }
}
