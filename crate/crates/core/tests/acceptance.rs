//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slicegap::cli::random_support;
use slicegap::entropy::{gamma_entropy, is_entropy_zero, unit_bump_set, xi, EntropyConfig};
use slicegap::field::PrimeField;
use slicegap::order::{
    cartesian_check, gap_assert, maximal_elements, section, section_entropy_scan, small_witness, witness_section,
    OrderError, ProductOrdering, ScanConfig,
};
use slicegap::slice_rank::{slice_rank_bruteforce, SliceRank, DEFAULT_BUDGET};
use slicegap::support::SupportSet;
use slicegap::tensor::{eliminate_section_point, DenseTensor, SliceClass};
use slicegap::trifference::{
    all_words, haemers_certify, inductive_bound, is_trifferent, max_trifferent, DEFAULT_SEARCH_BUDGET,
};
use slicegap::witness::{asymptotic_bounds, EngineConfig};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gap_constant() -> Check {
    let e3 = xi(3).unwrap().exp();
    let e2 = xi(2).unwrap().exp();
    ensure((e3 - 1.8899).abs() <= 1e-3, || format!("exp(xi_3) = {e3}"))?;
    ensure((e2 - 2.0).abs() <= 1e-9, || format!("exp(xi_2) = {e2}"))?;
    Ok(format!("exp(xi_3) = {e3:.6}, exp(xi_2) = {e2:.12}"))
}

fn entropy_attainment() -> Check {
    let cfg = EntropyConfig::default();
    let mut worst: f64 = 0.0;
    for k in 2..=5 {
        let h = gamma_entropy(&unit_bump_set(k), &cfg).map_err(|e| e.to_string())?.value;
        let err = (h - xi(k).unwrap()).abs();
        ensure(err <= 1e-4, || format!("k={k}: H={h}"))?;
        worst = worst.max(err);
    }
    Ok(format!("k=2..5, max |H - xi_k| = {worst:.1e}"))
}

fn gap_suite() -> Check {
    let cfg = EntropyConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut parts = Vec::new();
    for k in 2..=4 {
        let (mut zero, mut min_h) = (0, f64::INFINITY);
        for _ in 0..500 {
            let g = random_support(k, &mut rng);
            let s = ProductOrdering::random(&g, &mut rng);
            let r = gap_assert(&g, &s, 1e-4, &cfg).map_err(|e| e.to_string())?;
            let expect_zero = is_entropy_zero(&maximal_elements(&g, &s).unwrap()).unwrap();
            ensure(r.passed && r.zero == expect_zero, || {
                format!("k={k} {:?} {:?}: H={}", g.points(), s.per_axis(), r.h_value)
            })?;
            if r.zero {
                zero += 1;
            } else {
                min_h = min_h.min(r.h_value);
            }
        }
        parts.push(format!("k={k}: {zero} zero, min positive H {min_h:.6} vs xi {:.6}", xi(k).unwrap()));
    }
    Ok(parts.join("; "))
}

fn binary_cube(code: u32) -> DenseTensor {
    let data = (0..8).map(|i| (code >> i) & 1).collect();
    DenseTensor::from_dense(PrimeField::new(2).unwrap(), &[2, 2, 2], data).unwrap()
}

fn check_dichotomy(v: &DenseTensor, cfg: &EngineConfig, floor: f64) -> Result<bool, String> {
    let b = asymptotic_bounds(v, cfg).map_err(|e| format!("{:?}: {e}", v.entries()))?;
    match v.slice_class() {
        SliceClass::Slice => {
            ensure(b.lower_base == 1.0 && b.upper_base == 1.0, || format!("slice {:?}: {b:?}", v.entries()))?;
            Ok(false)
        }
        _ => {
            ensure(b.lower_base >= floor - 1e-3 && b.lower_base <= b.upper_base + 1e-6, || {
                format!("{:?}: {b:?}", v.entries())
            })?;
            Ok(true)
        }
    }
}

fn dichotomy() -> Check {
    let cfg = EngineConfig::default();
    let floor = 3.0 / 2f64.powf(2.0 / 3.0);
    let mut non_slice = 0;
    for code in 1..256 {
        non_slice += check_dichotomy(&binary_cube(code), &cfg, floor)? as usize;
    }
    let f3 = PrimeField::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut shapes = std::collections::BTreeMap::new();
    let mut done = 0;
    while done < 200 {
        let shape: Vec<usize> = (0..3).map(|_| rng.gen_range(2..=3)).collect();
        let n: usize = shape.iter().product();
        let density = rng.gen_range(0.2..0.8);
        let data = (0..n).map(|_| if rng.gen_bool(density) { rng.gen_range(1..3) } else { 0 }).collect();
        let v = DenseTensor::from_dense(f3, &shape, data).unwrap();
        if v.slice_class() != SliceClass::NonSlice {
            continue;
        }
        check_dichotomy(&v, &cfg, floor)?;
        *shapes.entry(shape).or_insert(0) += 1;
        done += 1;
    }
    Ok(format!(
        "F_2 2x2x2: {non_slice} non-slice / {} slice; F_3: 200 non-slice over shapes {shapes:?}",
        255 - non_slice
    ))
}

fn oracle_equivalence() -> Check {
    for code in 0..256 {
        let v = binary_cube(code);
        let r3 = slice_rank_bruteforce(&v, 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let r1 = slice_rank_bruteforce(&v, 1, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let expected = match v.slice_class() {
            SliceClass::Zero => SliceRank::Exact(0),
            SliceClass::Slice => SliceRank::Exact(1),
            SliceClass::NonSlice => SliceRank::Exact(2),
        };
        ensure(r3 == expected, || format!("code {code}: {r3:?} vs {expected:?}"))?;
        // capping the search at 1 only hides ranks above 1
        let capped = if expected == SliceRank::Exact(2) { SliceRank::AboveThreshold } else { expected };
        ensure(r1 == capped, || format!("code {code}: r_max=1 gave {r1:?}"))?;
    }
    let diag = binary_cube(1 | 1 << 7);
    let r = slice_rank_bruteforce(&diag, 3, DEFAULT_BUDGET).unwrap();
    let b = asymptotic_bounds(&diag, &EngineConfig::default()).map_err(|e| e.to_string())?;
    ensure(r == SliceRank::Exact(2), || format!("diagonal rank {r:?}"))?;
    ensure((b.lower_base - 2.0).abs() < 1e-6 && (b.upper_base - 2.0).abs() < 1e-6, || format!("{b:?}"))?;
    Ok(format!("256 tensors agree; diagonal rank 2, bounds ({:.6}, {:.6})", b.lower_base, b.upper_base))
}

fn combinatorial_suite() -> Check {
    let cfg = ScanConfig::default();
    let cube: Vec<Vec<i64>> = (0..8).map(|i| (0..3).map(|j| 1 + ((i >> j) & 1)).collect()).collect();
    let (mut products, mut witnesses) = (0, 0);
    for mask in 1..256u32 {
        let g = SupportSet::new(3, (0..8).filter(|i| mask >> i & 1 == 1).map(|i| cube[i].clone())).unwrap();
        match cartesian_check(&g).map_err(|e| e.to_string())? {
            None => {
                products += 1;
                ensure(section_entropy_scan(&g, &cfg) == Err(OrderError::NoPositiveSection), || {
                    format!("product {:?} has a positive section", g.points())
                })?;
            }
            Some(w) => {
                let (spec, o) = witness_section(&g, &w).map_err(|e| e.to_string())?;
                let anti = maximal_elements(&section(&g, &spec).unwrap(), &o).unwrap();
                ensure(!is_entropy_zero(&anti).unwrap() && section_entropy_scan(&g, &cfg).is_ok(), || {
                    format!("non-product {:?} without positive section", g.points())
                })?;
            }
        }
        if !is_entropy_zero(&g).unwrap() {
            witnesses += 1;
            let w = small_witness(&g).map_err(|e| e.to_string())?;
            ensure(w.len() <= 3 && w.is_subset(&g) && w.projections().iter().all(|p| p.len() > 1), || {
                format!("small witness {:?} of {:?}", w.points(), g.points())
            })?;
        }
    }

    let f3 = PrimeField::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut done = 0;
    while done < 1000 {
        let k = rng.gen_range(2..=4);
        let shape: Vec<usize> = (0..k).map(|_| rng.gen_range(2..=3)).collect();
        let n: usize = shape.iter().product();
        let v = DenseTensor::from_dense(f3, &shape, (0..n).map(|_| rng.gen_range(0..3)).collect()).unwrap();
        let axis = rng.gen_range(0..k);
        let x = rng.gen_range(1..=shape[axis]);
        let z = rng.gen_range(1..=shape[axis]);
        let at = |y: &[usize], t: usize| {
            let mut idx = y.to_vec();
            idx.insert(axis, t);
            idx
        };
        let rest: Vec<usize> = (0..k).filter(|&a| a != axis).map(|a| shape[a]).collect();
        let candidates: Vec<Vec<usize>> = rest
            .iter()
            .map(|&d| 1..=d)
            .collect::<Vec<_>>()
            .into_iter()
            .fold(vec![vec![]], |acc, r| {
                acc.into_iter()
                    .flat_map(|p| r.clone().map(move |i| [p.clone(), vec![i]].concat()))
                    .collect()
            });
        let common: Vec<&Vec<usize>> = candidates
            .iter()
            .filter(|y| v.get(&at(y, x)).unwrap() != 0 && v.get(&at(y, z)).unwrap() != 0)
            .collect();
        if x == z || common.is_empty() {
            continue;
        }
        let y = common[rng.gen_range(0..common.len())];
        let (w, _) = eliminate_section_point(&v, axis, x, z, y).map_err(|e| e.to_string())?;
        for s in &candidates {
            ensure((v.get(&at(s, x)).unwrap() != 0) == (w.get(&at(s, x)).unwrap() != 0), || {
                format!("section {x} changed at {s:?}")
            })?;
            let c = |t: &DenseTensor, i: usize, s: &[usize]| t.get(&at(s, i)).unwrap();
            let cx = f3.div(c(&v, x, s), c(&v, x, y)).unwrap();
            let cz = f3.sub(c(&v, z, s), f3.mul(c(&v, x, s), f3.div(c(&v, z, y), c(&v, x, y)).unwrap()));
            ensure(c(&w, x, s) == cx && c(&w, z, s) == cz, || format!("coefficients at {s:?}"))?;
            for other in (1..=shape[axis]).filter(|&t| t != x && t != z) {
                ensure(c(&w, other, s) == c(&v, other, s), || format!("section {other} changed"))?;
            }
        }
        ensure(w.get(&at(y, z)).unwrap() == 0, || format!("{y:?} still in section {z}"))?;
        done += 1;
    }
    Ok(format!(
        "255 subsets of {{1,2}}^3 ({products} products, {witnesses} small witnesses); 1000 eliminations over F_3"
    ))
}

fn plain_max_trifferent(n: usize) -> usize {
    let words = all_words(n);
    (1u32..1 << words.len())
        .filter(|m| {
            let set: Vec<_> = (0..words.len()).filter(|i| m >> i & 1 == 1).map(|i| words[i].clone()).collect();
            is_trifferent(&set).unwrap()
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap()
}

fn trifference() -> Check {
    let mut parts = Vec::new();
    for n in 1..=3 {
        let start = Instant::now();
        let (size, a) = max_trifferent(n, DEFAULT_SEARCH_BUDGET).map_err(|e| e.to_string())?;
        ensure(is_trifferent(&a).unwrap() && a.len() == size, || format!("n={n}: bad witness"))?;
        ensure(size as f64 <= inductive_bound(n), || format!("n={n}: {size} above bound"))?;
        let expected = match n {
            1 => 3,
            2 => plain_max_trifferent(2),
            _ => 6,
        };
        ensure(size == expected, || format!("T({n}) = {size}, expected {expected}"))?;
        let c = haemers_certify(&a).map_err(|e| e.to_string())?;
        ensure(c.passed && c.pairs as u128 <= c.dimension && (size as f64) <= c.implied_cap, || format!("{c:?}"))?;
        let limit = if n <= 2 { 60 } else { 1800 };
        ensure(start.elapsed() < Duration::from_secs(limit), || format!("n={n} took {:?}", start.elapsed()))?;
        parts.push(format!("T({n})={size} pairs {}<=3^{n}", c.pairs));
    }
    Ok(parts.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Check, u64); 7] = [
        ("gap constant", gap_constant, 1),
        ("entropy attainment", entropy_attainment, 5),
        ("gap property suite", gap_suite, 120),
        ("dichotomy at desk scale", dichotomy, 300),
        ("oracle equivalence", oracle_equivalence, 120),
        ("combinatorial suite", combinatorial_suite, 120),
        ("trifference", trifference, 1860),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let result = result.and_then(|msg| {
            if took > Duration::from_secs(*budget) {
                Err(format!("{msg}; over the {budget}s budget"))
            } else {
                Ok(msg)
            }
        });
        match result {
            Ok(msg) => println!("PASS {} {name}: {msg} ({took:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg} ({took:.2?})", i + 1)
            }
        }
    }
    if failed == 0 {
        println!("PASS 8 asymptotic statements: not reproducible directly; covered by criteria 1-7 and the property tests");
    } else {
        println!("FAIL 8 asymptotic statements: rests on criteria 1-7, {failed} of which failed");
        std::process::exit(1);
    }
}
