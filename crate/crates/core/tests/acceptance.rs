//! Acceptance criteria. Runs as a plain binary and prints one PASS/FAIL
//! line per criterion; exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{family, fixture, random_fst, random_vpt, VptShape};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vpt_core::fst_check::fst_functional;
use vpt_core::nested::height;
use vpt_core::oracle::{brute_equiv, brute_fst_functional, brute_functional, OracleVerdict};
use vpt_core::pumping::{decompose, shrink_witness, PumpScheme};
use vpt_core::semantics::{accepting_runs, fst_transduce, transduce};
use vpt_core::vpt_check::{
    check_equiv_functional, check_functional, height_bound, CheckOptions, CheckOutcome, EquivOutcome, EquivWitness, Scope,
};
use vpt_core::wordcomb::{commute, conjugacy_witness, hk_equation, is_primitive, omega_eq, overlap_roots, primitive_root, OmegaWord};
use vpt_core::{format, out_string, Sym, Vpt};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure!(took < limit, "{what} took {took:?}, limit {limit:?}");
    Ok(())
}

fn out(s: &str) -> Vec<char> {
    s.chars().collect()
}

fn running_example_reproduction() -> Outcome {
    let start = Instant::now();
    let text = std::fs::read_to_string(format!("{}/../../fixtures/fig1.vpt", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let t = format::parse_vpt(&text).map_err(|e| e.to_string())?;
    ensure!(t.validate().is_clean(), "validation: {:?}", t.validate());
    ensure!(t.state_count() == 8, "expected 8 states");
    ensure!(t.call_transitions().len() + t.return_transitions().len() == 12, "expected 12 transitions");
    for n in 0..=5 {
        let upper = format!("dfcab{}gh", "cabcab".repeat(n));
        let lower = format!("dfc{}ab{}gh", "abc".repeat(n), "cab".repeat(n));
        ensure!(upper == lower, "formulas differ at n={n}");
        let outs = transduce(&t, &family(&t, n));
        ensure!(outs == [out(&upper)].into(), "n={n}: outputs {:?}", outs.iter().map(|o| out_string(o)).collect::<Vec<_>>());
    }
    within(start, Duration::from_secs(1), "fig1 runs")?;
    Ok("n = 0..5, one output each, both formulas agree".into())
}

fn functionality_verdicts() -> Outcome {
    let t = fixture("fig1.vpt");
    let bound = height_bound(t.state_count()).unwrap();
    let cap = 64;
    let start = Instant::now();
    let capped = check_functional(&t, &CheckOptions::with_height_cap(cap)).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(10), "capped check")?;
    ensure!(
        capped == CheckOutcome::Functional { exact: cap >= bound, scope: Scope::HeightCap(cap) },
        "capped verdict {capped:?}"
    );

    let start = Instant::now();
    let full = check_functional(&t, &CheckOptions::default()).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(10), "full-bound check")?;
    let full_label = match full {
        CheckOutcome::Functional { exact: true, .. } => "exact functional".to_string(),
        CheckOutcome::Inconclusive { functional_up_to: Some(h), .. } if h >= cap => {
            format!("inconclusive under the default budget, functional up to height {h}")
        }
        other => return Err(format!("full-bound verdict {other:?}")),
    };

    let mutated = fixture("fig1_mutated.vpt");
    let start = Instant::now();
    let verdict = check_functional(&mutated, &CheckOptions::default()).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(10), "mutated check")?;
    let CheckOutcome::NonFunctional(w) = verdict else {
        return Err(format!("mutated verdict {verdict:?}"));
    };
    let outs = transduce(&mutated, &w.input);
    ensure!(w.out1 != w.out2 && outs.contains(&w.out1) && outs.contains(&w.out2), "witness does not re-verify");
    Ok(format!(
        "fig1 functional up to cap {cap} (exact = false, bound {bound}); {full_label}; mutation witness {} -> {} / {}",
        mutated.alphabet().display_word(&w.input),
        out_string(&w.out1),
        out_string(&w.out2)
    ))
}

fn oracle_agreement() -> Outcome {
    let start = Instant::now();
    let opts = CheckOptions { height_cap: Some(6), ..CheckOptions::default() };
    let (mut both, mut checker_only) = (0, 0);
    for seed in 0..200 {
        let t = random_vpt(seed, VptShape::default());
        let oracle = brute_functional(&t, 12).map_err(|e| e.to_string())?;
        let verdict = check_functional(&t, &opts).map_err(|e| format!("seed {seed}: {e}"))?;
        match (&oracle.verdict, &verdict) {
            (OracleVerdict::NonFunctional(_), CheckOutcome::NonFunctional(_)) => both += 1,
            (OracleVerdict::NonFunctional(w), other) => {
                return Err(format!("seed {seed}: oracle witness {:?} but checker says {other:?}", w.input))
            }
            (_, CheckOutcome::NonFunctional(_)) => checker_only += 1,
            (_, CheckOutcome::Inconclusive { .. }) => return Err(format!("seed {seed}: checker inconclusive")),
            _ => {}
        }
        if let CheckOutcome::NonFunctional(w) = verdict {
            let outs = transduce(&t, &w.input);
            ensure!(w.out1 != w.out2 && outs.contains(&w.out1) && outs.contains(&w.out2), "seed {seed}: witness does not re-verify");
        }
    }
    within(start, Duration::from_secs(300), "oracle agreement suite")?;
    Ok(format!("200 machines, {both} non-functional by both, {checker_only} only beyond length 12, 0 disagreements"))
}

fn fst_layer() -> Outcome {
    let mut nonfunctional = 0;
    for seed in 0..500 {
        let f = random_fst(seed, 4);
        let m = f.state_count();
        let verdict = fst_functional(&f);
        let oracle = brute_fst_functional(&f, 10).map_err(|e| e.to_string())?;
        match (&oracle.verdict, &verdict.witness) {
            (OracleVerdict::NonFunctional(o), Some(w)) => {
                ensure!(o.input.len() == w.input.len(), "seed {seed}: witness length {} vs oracle {}", w.input.len(), o.input.len());
            }
            (OracleVerdict::NonFunctional(o), None) => return Err(format!("seed {seed}: oracle witness {:?} missed", o.input)),
            (_, Some(w)) => ensure!(w.input.len() > 10, "seed {seed}: short witness unseen by the oracle"),
            _ => {}
        }
        if let Some(w) = &verdict.witness {
            nonfunctional += 1;
            let outs = fst_transduce(&f, &w.input);
            ensure!(w.out1 != w.out2 && outs.contains(&w.out1) && outs.contains(&w.out2), "seed {seed}: witness does not re-verify");
            ensure!(w.input.len() <= 3 * m * m, "seed {seed}: witness length {} > 3m² = {}", w.input.len(), 3 * m * m);
        }
    }
    Ok(format!("500 FSTs, {nonfunctional} non-functional, all minimal witnesses within 3m²"))
}

fn tower(h: usize) -> Vec<Sym> {
    std::iter::repeat_n(Sym::Call(0), h).chain(std::iter::repeat_n(Sym::Return(0), h)).collect()
}

fn pumping_suite() -> Outcome {
    let rng = &mut ChaCha8Rng::seed_from_u64(5);
    let mut pumped = 0;
    for (name, h) in [("pump_loop.vpt", 18), ("pump_branch.vpt", 17)] {
        let t = fixture(name);
        ensure!(t.state_count() == 2, "{name}: expected N = 2");
        let u = tower(h);
        let runs: Vec<_> = accepting_runs(&t, &u).collect();
        let (r1, r2) = (&runs[0], &runs[runs.len() - 1]);
        let d = decompose(&t, &u, r1, r2, 1).map_err(|e| format!("{name}: {e}"))?;
        let (u_id, v_id, w_id) = d.pump(&PumpScheme::identity(1)).unwrap();
        ensure!(u_id == u && v_id == r1.output() && w_id == r2.output(), "{name}: identity scheme does not rebuild the runs");
        ensure!(d.input.loops.iter().chain(&d.input.co_loops).all(|l| !l.is_empty()), "{name}: empty loop");
        for _ in 0..50 {
            let scheme = PumpScheme(vec![1; rng.gen_range(0..=6)]);
            let (up, vp, wp) = d.pump(&scheme).unwrap();
            let outs = transduce(&t, &up);
            ensure!(outs.contains(&vp) && outs.contains(&wp), "{name}: scheme {:?} leaves the relation", scheme.0);
            pumped += 1;
        }
    }
    let t = fixture("shrink_two_letters.vpt");
    let u = tower(9);
    ensure!(height(&u).unwrap() == 9 && t.state_count() == 1, "shrink fixture shape");
    let shorter = shrink_witness(&t, &u).map_err(|e| e.to_string())?;
    ensure!(shorter.len() < u.len() && transduce(&t, &shorter).len() >= 2, "shrunk word is not a shorter witness");
    Ok(format!("{pumped} pumped words verified; shrink 18 -> {} symbols", shorter.len()))
}

fn binary_words(max_len: usize) -> Vec<Vec<char>> {
    let mut all = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<char>| ['a', 'b'].map(|c| [w.as_slice(), &[c]].concat()))
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

fn power(w: &[char], k: usize) -> Vec<char> {
    w.repeat(k)
}

fn in_star(x: &[char], p: &[char]) -> bool {
    (0..=x.len()).any(|k| power(p, k) == x)
}

fn word_combinatorics() -> Outcome {
    let start = Instant::now();
    let words = binary_words(8);
    for x in words.iter().filter(|x| !x.is_empty()) {
        let n = x.len();
        let d = (1..=n).find(|&d| n % d == 0 && power(&x[..d], n / d) == *x).unwrap();
        ensure!(primitive_root(x).unwrap() == (x[..d].to_vec(), n / d), "primitive root of {x:?}");
        ensure!(is_primitive(x) == (d == n), "primitivity of {x:?}");
    }
    for x in &words {
        let rotations: Vec<Vec<char>> = (0..x.len().max(1)).map(|k| [&x[k.min(x.len())..], &x[..k.min(x.len())]].concat()).collect();
        for y in &words {
            let xy = [x.as_slice(), y].concat();
            let yx = [y.as_slice(), x].concat();
            ensure!(commute(x, y).is_some() == (xy == yx), "commute {x:?} {y:?}");
            let conj = x.len() == y.len() && rotations.contains(y);
            ensure!(conjugacy_witness(x, y).is_some() == conj, "conjugacy {x:?} {y:?}");
        }
    }

    let rng = &mut ChaCha8Rng::seed_from_u64(6);
    let random_word = |rng: &mut ChaCha8Rng, lo: usize, hi: usize| -> Vec<char> {
        (0..rng.gen_range(lo..=hi)).map(|_| if rng.gen_bool(0.5) { 'a' } else { 'b' }).collect()
    };
    let mut overlaps = 0;
    while overlaps < 1000 {
        let p = random_word(rng, 1, 5);
        if !is_primitive(&p) {
            continue;
        }
        let r = rng.gen_range(0..p.len());
        let q = [&p[r..], &p[..r]].concat();
        let x = power(&p, rng.gen_range(1..=3));
        let y = power(&q, rng.gen_range(1..=3));
        let g = gcd(x.len(), y.len());
        let len = x.len() + y.len() - g + rng.gen_range(0..3);
        let stream = power(&p, len / p.len() + 2);
        let shared = stream[r..r + len].to_vec();
        let Some((t1, t2)) = overlap_roots(&x, &y, &shared) else {
            return Err(format!("overlap {x:?} {y:?} {shared:?}: no witness"));
        };
        let t12 = [t1.as_slice(), &t2].concat();
        let t21 = [t2.as_slice(), &t1].concat();
        ensure!(is_primitive(&t12), "overlap root not primitive");
        ensure!(x.len().is_multiple_of(t12.len()) && power(&t12, x.len() / t12.len()) == x, "x not in (t1t2)+");
        ensure!(y.len().is_multiple_of(t21.len()) && power(&t21, y.len() / t21.len()) == y, "y not in (t2t1)+");
        overlaps += 1;
    }

    let mut instances = 0;
    let mut attempts = 0u64;
    while instances < 1000 {
        attempts += 1;
        ensure!(attempts < 50_000_000, "only {instances} filtered instances found");
        let unary = rng.gen_bool(0.5);
        let part = |rng: &mut ChaCha8Rng| -> Vec<char> {
            let w = random_word(rng, 0, 2);
            if unary { w.iter().map(|_| 'a').collect() } else { w }
        };
        let v: Vec<Vec<char>> = (0..5).map(|_| part(rng)).collect();
        let w: Vec<Vec<char>> = (0..5).map(|_| part(rng)).collect();
        let vr: [&[char]; 5] = std::array::from_fn(|i| v[i].as_slice());
        let wr: [&[char]; 5] = std::array::from_fn(|i| w[i].as_slice());
        if !(0..=3).all(|i| hk_equation(vr, wr, i)) {
            continue;
        }
        if v == w {
            continue;
        }
        instances += 1;
        for i in 4..=20 {
            ensure!(hk_equation(vr, wr, i), "counterexample {v:?} {w:?} at i = {i}");
        }
    }

    let words10 = binary_words(10);
    let roots: Vec<(Vec<char>, Vec<char>)> = binary_words(4)
        .iter()
        .filter(|p| !p.is_empty() && is_primitive(p))
        .flat_map(|p| (0..=p.len()).map(move |i| (p[..i].to_vec(), p[i..].to_vec())))
        .collect();
    let mut checked = 0;
    for (t1, t2) in &roots {
        let t12 = [t1.as_slice(), t2].concat();
        let t21 = [t2.as_slice(), t1].concat();
        let target = OmegaWord::new(vec![], t21.clone()).unwrap();
        for x in &words10 {
            let lhs = OmegaWord::new(x.clone(), t12.clone()).unwrap();
            if !t1.is_empty() && omega_eq(&lhs, &target).unwrap() {
                let shape = (0..=x.len()).any(|a| [power(&t21, a), t2.clone()].concat() == *x);
                ensure!(shape, "item 4: {x:?} with t1 = {t1:?}, t2 = {t2:?}");
                checked += 1;
            }
            let p = &t12;
            if t1.is_empty() && omega_eq(&OmegaWord::new(x.clone(), p.clone()).unwrap(), &OmegaWord::new(vec![], p.clone()).unwrap()).unwrap() {
                ensure!(in_star(x, p), "item 6: {x:?} with p = {p:?}");
                checked += 1;
            }
        }
        if t12.len() > 3 {
            continue;
        }
        // every factorisation x (t1t2)^α y (t1t2)^β z of (t2t1)^γ
        for gamma in 1..=10 / t21.len() {
            let big = power(&t21, gamma);
            let l = t12.len();
            for i in 0..=big.len() {
                for alpha in 1..=(big.len().saturating_sub(i)) / l {
                    if big[i..i + alpha * l] != power(&t12, alpha)[..] {
                        continue;
                    }
                    let a = i + alpha * l;
                    for b in a..=big.len() {
                        for beta in 1..=(big.len().saturating_sub(b)) / l {
                            if big[b..b + beta * l] == power(&t12, beta)[..] {
                                ensure!(in_star(&big[a..b], &t12), "item 9: y = {:?}", &big[a..b]);
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    within(start, Duration::from_secs(120), "word combinatorics")?;
    Ok(format!("exhaustive to length 8; 1000 overlaps; {instances} filtered HK instances; {checked} ω-equation cases"))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn equivalence() -> Outcome {
    let upper = fixture("fig1_upper.vpt");
    let lower = fixture("fig1_lower.vpt");
    let fig1 = fixture("fig1.vpt");
    let n0 = fixture("fig1_n0.vpt");
    let opts = CheckOptions::with_height_cap(64);
    let verdict = check_equiv_functional(&upper, &lower, &opts).map_err(|e| e.to_string())?;
    ensure!(verdict == EquivOutcome::Equivalent { exact: false }, "upper vs lower: {verdict:?}");
    let verdict = check_equiv_functional(&n0, &fig1, &opts).map_err(|e| e.to_string())?;
    ensure!(verdict == EquivOutcome::NotEquivalent(EquivWitness::Domain(family(&fig1, 1))), "loop-deleted: {verdict:?}");
    let brute = brute_equiv(&upper, &lower, 14).map_err(|e| e.to_string())?;
    ensure!(brute.verdict == OracleVerdict::EquivUpTo(14), "oracle upper vs lower: {:?}", brute.verdict);
    let brute = brute_equiv(&n0, &fig1, 14).map_err(|e| e.to_string())?;
    let OracleVerdict::Differ { input, .. } = brute.verdict else {
        return Err(format!("oracle loop-deleted: {:?}", brute.verdict));
    };
    ensure!(input == family(&fig1, 1), "oracle witness {input:?}");
    Ok("upper ≡ lower up to height 64 and by oracle to length 14; loop deletion differs on c1 c2 c3 r3 r2 r1".into())
}

fn single_state() -> Vpt {
    format::parse_vpt(
        "vpt\nalphabet calls c\nalphabet returns r\nalphabet outputs x y\nstack g\nstates q\ninitial q\nfinal q\n\
         call q c / x push g -> q\nreturn q r / y pop g -> q\n",
    )
    .unwrap()
}

fn exactness_labels() -> Outcome {
    for (n, expected) in [(1, 8), (2, 128), (3, 648)] {
        ensure!(height_bound(n) == Ok(expected), "height_bound({n})");
    }
    let one = single_state();
    for cap in [1, 7, 8, 9, 20] {
        let v = check_functional(&one, &CheckOptions::with_height_cap(cap)).map_err(|e| e.to_string())?;
        ensure!(v == CheckOutcome::Functional { exact: cap >= 8, scope: Scope::HeightCap(cap) }, "N = 1, cap {cap}: {v:?}");
    }
    let full = check_functional(&one, &CheckOptions::default()).map_err(|e| e.to_string())?;
    ensure!(full == CheckOutcome::Functional { exact: true, scope: Scope::HeightCap(8) }, "N = 1 full bound: {full:?}");
    let two = fixture("pump_loop.vpt");
    for cap in [127, 128] {
        match check_functional(&two, &CheckOptions::with_height_cap(cap)).map_err(|e| e.to_string())? {
            CheckOutcome::Functional { exact, .. } => ensure!(exact == (cap >= 128), "N = 2, cap {cap}: exact = {exact}"),
            CheckOutcome::Inconclusive { .. } => {}
            other => return Err(format!("N = 2, cap {cap}: {other:?}")),
        }
    }
    let label = match check_functional(&fixture("fig1.vpt"), &CheckOptions::default()).map_err(|e| e.to_string())? {
        CheckOutcome::Functional { exact: true, .. } => "exact".to_string(),
        CheckOutcome::Inconclusive { explored, functional_up_to } => {
            format!("inconclusive after {explored} nodes, functional up to {functional_up_to:?}")
        }
        other => return Err(format!("fig1 at full bound: {other:?}")),
    };
    Ok(format!("bounds 8/128/648; N = 1 exact at cap ≥ 8; fig1 at 8·8⁴: {label}"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("running example reproduction", running_example_reproduction),
        ("functionality verdicts", functionality_verdicts),
        ("oracle agreement on random VPTs", oracle_agreement),
        ("FST layer", fst_layer),
        ("pumping suite", pumping_suite),
        ("word combinatorics", word_combinatorics),
        ("equivalence", equivalence),
        ("full-bound exactness labels", exactness_labels),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({why}) [{took:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
