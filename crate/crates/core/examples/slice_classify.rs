//! Classifies every nonzero 2x2x2 tensor over F_2 two ways: by flattening ranks and by
//! brute-force search for a slice decomposition.

use std::collections::BTreeMap;

use slicegap::field::PrimeField;
use slicegap::slice_rank::{slice_rank_bruteforce, SliceRank, DEFAULT_BUDGET};
use slicegap::tensor::DenseTensor;

fn main() {
    let f2 = PrimeField::new(2).unwrap();
    let mut table: BTreeMap<(String, String), usize> = BTreeMap::new();
    for mask in 1u32..256 {
        let data = (0..8).map(|i| (mask >> i) & 1).collect();
        let v = DenseTensor::from_dense(f2, &[2, 2, 2], data).unwrap();
        let rank = match slice_rank_bruteforce(&v, 3, DEFAULT_BUDGET).unwrap() {
            SliceRank::Exact(r) => r.to_string(),
            SliceRank::AboveThreshold => ">3".into(),
        };
        *table.entry((format!("{:?}", v.slice_class()), rank)).or_default() += 1;
    }
    for ((class, rank), n) in &table {
        println!("{class:<9} slice rank {rank}: {n} tensors");
    }

    let diag = DenseTensor::from_dense(f2, &[2, 2, 2], vec![1, 0, 0, 0, 0, 0, 0, 1]).unwrap();
    println!("diagonal: flattening ranks {:?}, class {:?}", diag.flattening_ranks(), diag.slice_class());
}
