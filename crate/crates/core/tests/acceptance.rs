//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints exactly one PASS or FAIL line; the process exits
//! non-zero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qlag::basisconv::qtilde_transition;
use qlag::exprio::{parse, parse_sympoly, parse_tpoly};
use qlag::partitions::strict_subsets;
use qlag::thomtables::find_record;
use qlag::{
    betti, builtin_records, enumerate_partitions, expand_in_qtilde, module_expand, pair, pfaffian,
    qtilde, qtilde_pair, reduce, schur_q, verify_record, Exec, LGRing, Partition, QExpansion,
    SchubertClass, SkewMatrix, StrictPartition, SymPoly, TExpansion, XPoly,
};

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn sp(parts: &[usize]) -> StrictPartition {
    StrictPartition::new(parts.to_vec()).unwrap()
}

/// A random polynomial in `c_1..c_n` with up to four homogeneous components
/// of degree at most `max_degree`.
fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_degree: usize) -> SymPoly {
    let mut out = SymPoly::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let d = rng.gen_range(0..=max_degree);
        let monomials = enumerate_partitions(d, Some(n), false);
        for _ in 0..rng.gen_range(1..=5) {
            let m = monomials[rng.gen_range(0..monomials.len())].clone();
            out.add_term(m, BigInt::from(rng.gen_range(-50i64..=50)));
        }
    }
    out
}

fn square_identity() -> Result<(), String> {
    for n in 1..=6 {
        for i in 1..=n {
            let lhs = qtilde_pair(i, i).map_err(|e| e.to_string())?.evaluate(n);
            let rhs = XPoly::elementary(i, n).square_variables();
            ensure(lhs == rhs, || format!("Q~_{{{i},{i}}} differs from e_{i}(x^2) at n = {n}"))?;
        }
    }
    Ok(())
}

fn additive_basis() -> Result<(), String> {
    for n in 1..=5 {
        for d in 0..=10 {
            let t = qtilde_transition(d, Some(n), Exec::default()).map_err(|e| e.to_string())?;
            ensure(t.matrix.len() == t.basis.len() && t.basis.len() == t.coords.len(), || {
                format!("transition at n = {n}, d = {d} is not square")
            })?;
            let det = t.determinant().map_err(|e| e.to_string())?;
            ensure(det.magnitude().is_one(), || format!("det = {det} at n = {n}, d = {d}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for k in 0..100 {
        let n = 1 + k % 5;
        let poly = random_poly(&mut rng, n, 10);
        let bounded = expand_in_qtilde(&poly, Some(n)).map_err(|e| e.to_string())?;
        ensure(bounded.to_sympoly().truncate(n) == poly, || {
            format!("bounded round trip failed for {poly} at n = {n}")
        })?;
        ensure(bounded.terms().all(|(i, _)| i.first() <= n), || {
            format!("bounded expansion of {poly} uses parts above {n}")
        })?;
        let free = expand_in_qtilde(&poly, None).map_err(|e| e.to_string())?;
        ensure(free.to_sympoly() == poly, || format!("round trip failed for {poly}"))?;
    }
    Ok(())
}

fn free_module_basis() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..100 {
        let n = 1 + k % 4;
        let poly = random_poly(&mut rng, n, 8);
        let e = module_expand(&poly, n).map_err(|e| e.to_string())?;
        ensure(e.to_sympoly(n) == poly, || format!("module round trip failed for {poly} at n = {n}"))?;
        ensure(e.terms().all(|((i, mu), _)| i.first() <= n && mu.first() <= n), || {
            format!("module expansion of {poly} leaves the basis at n = {n}")
        })?;
    }
    Ok(())
}

fn duality() -> Result<(), String> {
    for n in 1..=4 {
        let ring = LGRing::new(n).unwrap();
        let subsets = strict_subsets(n);
        for i in &subsets {
            for j in &subsets {
                if i.weight() + j.weight() != ring.dim() {
                    continue;
                }
                let value = pair(i, j, ring).map_err(|e| e.to_string())?;
                let expected = if *j == i.complement(n).unwrap() { 1 } else { 0 };
                ensure(value == BigInt::from(expected), || {
                    format!("pair({i}, {j}) = {value} at n = {n}")
                })?;
            }
        }
    }
    Ok(())
}

fn ring_sanity() -> Result<(), String> {
    for n in 1..=8 {
        let b = betti(LGRing::new(n).unwrap());
        ensure(b.iter().sum::<usize>() == 1 << n, || format!("betti sum at n = {n}"))?;
        ensure(b.iter().eq(b.iter().rev()), || format!("betti not palindromic at n = {n}"))?;
    }
    for n in 1..=5 {
        let ring = LGRing::new(n).unwrap();
        for i in 1..=n {
            let rel = reduce(&qtilde_pair(i, i).unwrap(), ring).map_err(|e| e.to_string())?;
            ensure(rel.is_zero(), || format!("Q~_{{{i},{i}}} reduces to {rel} at n = {n}"))?;
        }
    }
    for (n, expected) in [(1, 1), (2, 2), (3, 16)] {
        let ring = LGRing::new(n).unwrap();
        let dim = ring.dim() as u32;
        let omega = SchubertClass::schubert(ring, sp(&[1])).unwrap();
        let by_products = omega.pow(dim).map_err(|e| e.to_string())?.integrate();

        // split c1^dim into two halves and pair them through the dual basis
        let k = dim / 2;
        let left = reduce(&SymPoly::gen(1).pow(k), ring).map_err(|e| e.to_string())?;
        let right = reduce(&SymPoly::gen(1).pow(dim - k), ring).map_err(|e| e.to_string())?;
        let mut by_duality = BigInt::zero();
        for (i, a) in left.terms() {
            for (j, b) in right.terms() {
                by_duality += a * b * pair(i, j, ring).map_err(|e| e.to_string())?;
            }
        }
        ensure(by_products == BigInt::from(expected) && by_duality == BigInt::from(expected), || {
            format!("n = {n}: products give {by_products}, duality gives {by_duality}, expected {expected}")
        })?;
    }
    Ok(())
}

fn tables() -> Result<(), String> {
    let records = builtin_records();
    ensure(records.len() == 13, || format!("{} records", records.len()))?;
    for r in &records {
        let report = verify_record(r);
        ensure(report.passed(), || report.to_string())?;
        for (i, j, c) in r.legendre.terms() {
            ensure(i.weight() + j == r.codim && *c > BigInt::zero(), || {
                format!("{}: bad term {c} t^{j} Q[{i}]", r.name)
            })?;
        }
        ensure(r.legendre.t_part(0) == r.lagrange, || format!("{}: t = 0 part", r.name))?;
    }
    let a7 = find_record("A_7").ok_or("A_7 missing")?;
    let expected = QExpansion::from_terms([
        (p(&[3, 2, 1]), BigInt::from(135)),
        (p(&[4, 2]), BigInt::from(1275)),
        (p(&[5, 1]), BigInt::from(2004)),
        (p(&[6]), BigInt::from(2520)),
    ]);
    ensure(a7.lagrange == expected, || format!("A_7 Lagrange part is {}", a7.lagrange))
}

fn schur_q_consistency() -> Result<(), String> {
    for i in 1..=5 {
        let q = schur_q(&p(&[i, i]));
        ensure(q.is_zero(), || format!("Q_{{{i},{i}}} = {q}"))?;
    }
    ensure(schur_q(&p(&[1])) == SymPoly::gen(1).scale(&BigInt::from(2)), || "Q_1 != 2c1".into())?;
    let x1 = XPoly::var(2, 1);
    let x2 = XPoly::var(2, 2);
    let expected = (&(&(&x1 * &x1) * &x2) + &(&(&x1 * &x2) * &x2)).scale(&BigInt::from(4));
    ensure(schur_q(&p(&[2, 1])).evaluate(2) == expected, || "Q_{2,1} at n = 2".into())
}

/// Pfaffian as a signed sum over perfect matchings; the sign is the parity
/// of the permutation listing each matched pair in order.
fn matching_pfaffian(a: &[Vec<BigInt>]) -> BigInt {
    fn go(a: &[Vec<BigInt>], free: &mut Vec<usize>, word: &mut Vec<usize>, acc: &mut BigInt) {
        if free.is_empty() {
            let inversions = (0..word.len())
                .flat_map(|x| (x + 1..word.len()).map(move |y| (x, y)))
                .filter(|&(x, y)| word[x] > word[y])
                .count();
            let mut term = BigInt::one();
            for pair in word.chunks(2) {
                term *= &a[pair[0]][pair[1]];
            }
            if inversions % 2 == 1 {
                term = -term;
            }
            *acc += term;
            return;
        }
        let first = free.remove(0);
        for k in 0..free.len() {
            let partner = free.remove(k);
            word.extend([first, partner]);
            go(a, free, word, acc);
            word.truncate(word.len() - 2);
            free.insert(k, partner);
        }
        free.insert(0, first);
    }
    let mut acc = BigInt::zero();
    go(a, &mut (0..a.len()).collect(), &mut Vec::new(), &mut acc);
    acc
}

fn leibniz_det(a: &[Vec<i128>]) -> i128 {
    fn go(a: &[Vec<i128>], row: usize, used: &mut [bool], sign: i128, acc: &mut i128, prod: i128) {
        if row == a.len() {
            *acc += sign * prod;
            return;
        }
        let mut s = sign;
        for col in 0..a.len() {
            if used[col] {
                continue;
            }
            // sign flips once per unused column skipped to the left
            if a[row][col] != 0 {
                used[col] = true;
                go(a, row + 1, used, s, acc, prod * a[row][col]);
                used[col] = false;
            }
            s = -s;
        }
    }
    let mut acc = 0;
    go(a, 0, &mut vec![false; a.len()], 1, &mut acc, 1);
    acc
}

fn oracle_elementary(x: &[BigInt]) -> Vec<BigInt> {
    let mut e = vec![BigInt::one()];
    for v in x {
        e.push(BigInt::zero());
        for k in (1..e.len()).rev() {
            let prev = e[k - 1].clone();
            e[k] += prev * v;
        }
    }
    e
}

fn oracle_qtilde(parts: &[usize], e: &[BigInt]) -> BigInt {
    let get = |k: usize| e.get(k).cloned().unwrap_or_default();
    let pair = |i: usize, j: usize| {
        let mut v = get(i) * get(j);
        for q in 1..=j {
            let term = get(i + q) * get(j - q) * 2;
            if q % 2 == 1 {
                v -= term;
            } else {
                v += term;
            }
        }
        v
    };
    let mut parts = parts.to_vec();
    if parts.len() % 2 == 1 {
        parts.push(0);
    }
    let m = parts.len();
    let mut a = vec![vec![BigInt::zero(); m]; m];
    for r in 0..m {
        for s in r + 1..m {
            a[r][s] = pair(parts[r], parts[s]);
            a[s][r] = -a[r][s].clone();
        }
    }
    matching_pfaffian(&a)
}

fn pfaffian_correctness() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..200 {
        let size = 2 * (1 + k % 4);
        let mut a = vec![vec![0i128; size]; size];
        for r in 0..size {
            for s in r + 1..size {
                a[r][s] = rng.gen_range(-9..=9);
                a[s][r] = -a[r][s];
            }
        }
        let m = SkewMatrix::from_fn(size, |r, s| BigInt::from(a[r][s]));
        let pf = pfaffian(&m).map_err(|e| e.to_string())?;
        let det = leibniz_det(&a);
        ensure(&pf * &pf == BigInt::from(det), || format!("Pf^2 = {} but det = {det}", &pf * &pf))?;
        let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        ensure(matching_pfaffian(&big) == pf, || "Pfaffian disagrees with the matching sum".into())?;
    }
    for d in 0..=8 {
        for i in enumerate_partitions(d, None, false) {
            let poly = qtilde(&i);
            for _ in 0..3 {
                let x: Vec<BigInt> = (0..8).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
                let e = oracle_elementary(&x);
                let want = oracle_qtilde(i.parts(), &e);
                let got = poly.evaluate_at(&x);
                ensure(got == want, || format!("Q~_{{{i}}} at {x:?}: {got} vs oracle {want}"))?;
            }
        }
    }
    Ok(())
}

fn stability() -> Result<(), String> {
    for d in 0..=8 {
        for i in enumerate_partitions(d, None, false) {
            let poly = qtilde(&i);
            let mut below = poly.evaluate(1);
            for n in 1..=4 {
                let above = poly.evaluate(n + 1);
                ensure(above.drop_last_variable() == below, || format!("Q~_{{{i}}} unstable at n = {n}"))?;
                below = above;
            }
        }
    }
    Ok(())
}

fn random_input(rng: &mut ChaCha8Rng) -> String {
    const ALPHABET: &[u8] = b"c0123456789tQ[],+-*^() \n\t";
    let len = rng.gen_range(0..40);
    (0..len)
        .map(|_| {
            if rng.gen_ratio(1, 20) {
                char::from_u32(rng.gen_range(1..0x3000)).unwrap_or('?')
            } else {
                ALPHABET[rng.gen_range(0..ALPHABET.len())] as char
            }
        })
        .collect()
}

fn random_texpansion(rng: &mut ChaCha8Rng) -> TExpansion {
    let mut e = TExpansion::new();
    for _ in 0..rng.gen_range(0..=5) {
        let d = rng.gen_range(0..=6);
        let parts = enumerate_partitions(d, None, false);
        let i = parts[rng.gen_range(0..parts.len())].clone();
        let c = if rng.gen_ratio(1, 10) {
            BigInt::from(rng.gen::<i64>()) * BigInt::from(rng.gen::<i64>())
        } else {
            BigInt::from(rng.gen_range(-1000i64..=1000))
        };
        e.add_term(i, rng.gen_range(0..=3), c);
    }
    e
}

fn parser_robustness() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut accepted = 0;
    for _ in 0..100_000 {
        let input = random_input(&mut rng);
        match panic::catch_unwind(|| parse(&input)) {
            Ok(Ok(_)) => accepted += 1,
            Ok(Err(_)) => {}
            Err(_) => return Err(format!("parser panicked on {input:?}")),
        }
    }
    for _ in 0..1000 {
        let e = random_texpansion(&mut rng);
        let text = e.to_string();
        let back = parse_tpoly(&text)
            .and_then(|t| t.to_texpansion(None))
            .map_err(|err| format!("{text:?}: {err}"))?;
        ensure(back == e, || format!("{text:?} came back as {back}"))?;
        let chern = e.t_part(0).to_sympoly();
        let again = parse_sympoly(&chern.to_string()).map_err(|err| err.to_string())?;
        ensure(again == chern, || format!("{chern} came back as {again}"))?;
    }
    println!("    ({accepted} of 100000 fuzz inputs parsed)");
    Ok(())
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("Q~_{i,i} = e_i(x^2) for 1 <= i <= n <= 6", square_identity),
        ("additive basis: det +-1 for n <= 5, d <= 10; 100 round trips", additive_basis),
        ("free-module basis: 100 round trips for n <= 4, d <= 8", free_module_basis),
        ("duality pairing for n <= 4", duality),
        ("Betti numbers, relations, integral of Omega_1^dim", ring_sanity),
        ("13 Thom tables verify; A_7 Lagrange part exact", tables),
        ("Schur Q consistency", schur_q_consistency),
        ("Pf^2 = det on 200 matrices; Q~_I against oracle for |I| <= 8", pfaffian_correctness),
        ("stability under x_{n+1} = 0 for |I| <= 8, n <= 4", stability),
        ("parser fuzzing and render/parse round trips", parser_robustness),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = match panic::catch_unwind(AssertUnwindSafe(check)) {
            Ok(r) => r,
            Err(payload) => Err(payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into())),
        };
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS ({secs:.2}s): {name}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL ({secs:.2}s): {name}\n    {why}", k + 1);
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
