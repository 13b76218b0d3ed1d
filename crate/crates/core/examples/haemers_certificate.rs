//! Haemers certificates for the maximum trifferent codes of length 1 to 3, and the
//! evaluation matrix breaking down on a set that is not trifferent.

use slicegap::eisenstein::EisensteinInt;
use slicegap::trifference::{haemers_certify, haemers_f, max_trifferent, parse_word, DEFAULT_SEARCH_BUDGET};

fn main() {
    for n in 1..=3 {
        let (_, a) = max_trifferent(n, DEFAULT_SEARCH_BUDGET).unwrap();
        let c = haemers_certify(&a).unwrap();
        println!(
            "n={n} |A|={} pairs={} <= 3^n={}  monomials={}  cap {:.3}  (sqrt 3)^n={:.3}  {}",
            c.size,
            c.pairs,
            c.dimension,
            c.monomials,
            c.implied_cap,
            3f64.sqrt().powi(n as i32),
            if c.passed { "pass" } else { "FAIL" }
        );
    }

    // no coordinate separates 00, 01, 10
    let bad: Vec<_> = ["00", "01", "10"].iter().map(|s| parse_word(s).unwrap()).collect();
    for x in 0..3 {
        for y in x + 1..3 {
            let row: Vec<EisensteinInt> = (0..3)
                .flat_map(|z| (z + 1..3).map(move |t| (z, t)))
                .map(|(z, t)| haemers_f(&bad[x], &bad[y], &bad[z], &bad[t]).unwrap())
                .collect();
            let row: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            println!("f_({x},{y}) row: {}", row.join("  "));
        }
    }
    println!("certify on that set: {:?}", haemers_certify(&bad).unwrap_err());
}
