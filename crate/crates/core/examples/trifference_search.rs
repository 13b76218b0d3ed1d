//! Exact maximum trifferent codes for short lengths, next to the inductive bound.

use std::time::Instant;

use slicegap::trifference::{format_word, inductive_bound, is_trifferent, max_trifferent, DEFAULT_SEARCH_BUDGET};

fn main() {
    let top: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    for n in 1..=top {
        let start = Instant::now();
        let (size, witness) = max_trifferent(n, DEFAULT_SEARCH_BUDGET).expect("search within budget");
        let words: Vec<String> = witness.iter().map(|w| format_word(w)).collect();
        println!(
            "n={n}  T(n)={size}  2(3/2)^n={:.3}  trifferent={}  [{}]  {:?}",
            inductive_bound(n),
            is_trifferent(&witness).unwrap(),
            words.join(" "),
            start.elapsed()
        );
    }
}
