//! H of the unit-bump sets against the closed form, then a small random gap scan.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slicegap::cli::random_support;
use slicegap::entropy::{gamma_entropy, unit_bump_set, xi, EntropyConfig};
use slicegap::order::{gap_assert, ProductOrdering};

fn main() {
    let cfg = EntropyConfig::default();
    for k in 2..=6 {
        let r = gamma_entropy(&unit_bump_set(k), &cfg).unwrap();
        let x = xi(k).unwrap();
        println!(
            "k={k}  H={:.9}  xi={:.9}  exp(H)={:.6}  |H-xi|={:.1e}  iters={}",
            r.value,
            x,
            r.exponent_base,
            (r.value - x).abs(),
            r.iterations
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 2..=4 {
        let (mut zero, mut min_h) = (0, f64::INFINITY);
        for _ in 0..200 {
            let g = random_support(k, &mut rng);
            let s = ProductOrdering::random(&g, &mut rng);
            let r = gap_assert(&g, &s, 1e-4, &cfg).unwrap();
            assert!(r.passed, "gap violated on {:?}", g.points());
            if r.zero {
                zero += 1;
            } else {
                min_h = min_h.min(r.h_value);
            }
        }
        println!("k={k}: 200 random antichains, {zero} with H=0, smallest positive H {min_h:.6} >= xi {:.6}", xi(k).unwrap());
    }
}
