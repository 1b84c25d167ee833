//! The ten acceptance criteria, one pass/fail line each. Runs without the libtest harness so
//! the lines always print; exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use irrcert_cli::commands::cmd_examples;
use irrcert_cli::{ResultEntry, RunConfig};
use irrcert_core::arith::{nu_p_rat, ExtInt, Extended};
use irrcert_core::certifier::{
    corollary_witnesses, partial_sum, power_split, valuation_of_partial_sum, z_statistic, CertOptions, Certifier,
};
use irrcert_core::curve::{genus, CurveFlag, Genus};
use irrcert_core::poly::{IntPolynomial, Monomial};
use irrcert_core::series::{builtin_family, BuiltinParams, SeriesFamily, Status, BUILTIN_NAMES};
use irrcert_core::BigRat;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

/// Name, runtime limit in seconds, body.
type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

fn family(name: &str, params: &str) -> SeriesFamily {
    let p: BuiltinParams = serde_json::from_str(params).unwrap();
    builtin_family(name, &p).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- 1. valuation algebra ------------------------------------------------------------

/// `ν_p` by repeated division; `None` is infinity.
fn nu_oracle(q: &BigRat, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut v = 0i64;
        let p = BigInt::from(p);
        while (&n % &p).is_zero() {
            n /= &p;
            v += 1;
        }
        v
    };
    Some(count(q.numer()) - count(q.denom()))
}

fn as_oracle(v: &ExtInt) -> Option<i64> {
    match v {
        Extended::Finite(x) => Some(x.to_i64().expect("small valuation")),
        Extended::Infinity => None,
    }
}

fn random_rational(rng: &mut ChaCha8Rng, p: u64) -> BigRat {
    if rng.gen_ratio(1, 20) {
        return BigRat::zero();
    }
    let e: i32 = rng.gen_range(-12..=12);
    let u = BigInt::from(rng.gen_range(1u64..1_000_000)) * if rng.gen() { 1 } else { -1 };
    let v = BigInt::from(rng.gen_range(1u64..1_000_000));
    let pe = BigRat::from_integer(BigInt::from(p)).pow(e);
    BigRat::new(u, v) * pe
}

fn valuation_algebra() -> Outcome {
    const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 97, 1_000_003];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut failures = Vec::new();
    for i in 0..10_000 {
        let p = PRIMES[rng.gen_range(0..PRIMES.len())];
        let (a, b) = (random_rational(&mut rng, p), random_rational(&mut rng, p));
        let nu = |q: &BigRat| nu_p_rat(q, p).map_err(|e| e.to_string());
        let (va, vb, vab, vsum) = (nu(&a)?, nu(&b)?, nu(&(&a * &b))?, nu(&(&a + &b))?);
        if [(&a, &va), (&b, &vb)].iter().any(|(q, v)| nu_oracle(q, p) != as_oracle(v)) {
            failures.push(format!("#{i}: valuation disagrees with division for p = {p}"));
        }
        if vab != va.clone() + vb.clone() {
            failures.push(format!("#{i}: product rule, p = {p}, a = {a}, b = {b}"));
        }
        let min = va.clone().min(vb.clone());
        let sum_ok = if va != vb { vsum == min } else { vsum >= min };
        if !sum_ok {
            failures.push(format!("#{i}: sum rule, p = {p}, a = {a}, b = {b}"));
        }
    }
    ensure(failures.is_empty(), || format!("{} failures, first: {}", failures.len(), failures[0]))?;
    Ok("10000 triples, 0 failures".into())
}

// ---- 2. power identity ----------------------------------------------------------------

fn identity_suite() -> Outcome {
    let mut cases = 0;
    for m in 0..=5u64 {
        for delta in 0..=1u64 {
            let b = m + 2 + delta;
            for n in 1..=20u32 {
                for k in 0..n {
                    let (lhs, rhs) = power_split(b, k, n);
                    let direct = BigUint::from(b).pow(n);
                    let split: BigUint = BigUint::from(b).pow(k)
                        + BigUint::from(b - 1) * (k..n).map(|i| BigUint::from(b).pow(i)).sum::<BigUint>();
                    ensure(lhs == rhs && lhs == direct && rhs == split, || format!("b = {b}, k = {k}, N = {n}"))?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} exact identities"))
}

// ---- 3. Lipschitz bound -----------------------------------------------------------------

fn random_poly(rng: &mut ChaCha8Rng, k: usize, deg: u32) -> IntPolynomial {
    let terms = (0..rng.gen_range(1..=6)).map(|_| {
        let mut e = vec![0u32; k];
        let mut left = rng.gen_range(0..=deg);
        for slot in e.iter_mut() {
            let take = rng.gen_range(0..=left);
            *slot = take;
            left -= take;
        }
        (Monomial(e), BigInt::from(rng.gen_range(-20i64..=20)))
    });
    IntPolynomial::from_terms(k, terms)
}

fn random_point(rng: &mut ChaCha8Rng, r: &BigRat) -> BigRat {
    let t = BigRat::new(BigInt::from(rng.gen_range(-1000i64..=1000)), BigInt::from(1000));
    t * r
}

fn lipschitz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut done = 0;
    while done < 1000 {
        let k = rng.gen_range(1..=3usize);
        let deg = rng.gen_range(1..=4);
        let p = random_poly(&mut rng, k, deg);
        if p.is_zero() {
            continue;
        }
        let r = BigRat::new(BigInt::from(rng.gen_range(4i64..=40)), BigInt::from(4));
        let a: Vec<BigRat> = (0..k).map(|_| random_point(&mut rng, &r)).collect();
        let b: Vec<BigRat> = (0..k).map(|_| random_point(&mut rng, &r)).collect();
        let d = p.degree().max(1);
        let abs_sum: BigInt = p.terms().values().map(|c| c.abs()).sum();
        let c = BigRat::from_integer(BigInt::from(d) * BigInt::from(k) * abs_sum) * r.clone().pow(d as i32 - 1);
        ensure(p.lipschitz_constant(&r).ok() == Some(c.clone()), || format!("constant for {p} at R = {r}"))?;
        let diff = (p.evaluate(&a).unwrap() - p.evaluate(&b).unwrap()).abs();
        let dist = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).max().unwrap();
        ensure(diff <= c * dist, || format!("bound fails for {p}"))?;
        done += 1;
    }
    Ok("1000 random instances, 0 failures".into())
}

// ---- 4. genus golden table ------------------------------------------------------------

fn genus_table() -> Outcome {
    let smooth = [
        ("x1 + 2*x2 - 1", 0),
        ("x1^2 + x2^2 - 1", 0),
        ("x2^2 - x1^3 - x1 - 1", 1),
        ("x1^4 + x2^4 - 1", 3),
        ("x1^5 + x2^5 - 1", 6),
    ];
    let p2 = |t: &str| IntPolynomial::parse(t, Some(2)).unwrap();
    for (text, g) in smooth {
        let a = genus(&p2(text)).map_err(|e| format!("{text}: {e}"))?;
        ensure(a.smooth && a.genus == Some(Genus::Exact { value: g }), || format!("{text}: {:?}", a.genus))?;
    }
    let nodal = genus(&p2("x2^2 - x1^2 - x1^3")).map_err(|e| e.to_string())?;
    ensure(nodal.genus == Some(Genus::Exact { value: 0 }), || format!("nodal cubic: {:?}", nodal.genus))?;
    let cusp = genus(&p2("x2^2 - x1^3")).map_err(|e| e.to_string())?;
    ensure(cusp.flags.contains(&CurveFlag::NonOrdinaryPresent), || "cusp not flagged".into())?;
    let contains_zero = match cusp.genus {
        Some(Genus::Bounds { lo, .. }) => lo == 0,
        _ => false,
    };
    ensure(contains_zero, || format!("cuspidal cubic: {:?}", cusp.genus))?;
    Ok("degrees 1..5 give 0, 0, 1, 3, 6; nodal 0; cusp flagged with 0 in range".into())
}

// ---- 5. soundness sweep ---------------------------------------------------------------

/// Every polynomial of degree ≤ 2 in `k` variables with coefficients in [−3, 3].
fn all_quadratics(k: usize) -> Vec<IntPolynomial> {
    let mut monos = vec![vec![0u32; k]];
    for i in 0..k {
        let mut e = vec![0; k];
        e[i] = 1;
        monos.push(e);
    }
    for i in 0..k {
        for j in i..k {
            let mut e = vec![0; k];
            e[i] += 1;
            e[j] += 1;
            monos.push(e);
        }
    }
    let count = 7usize.pow(monos.len() as u32);
    (0..count)
        .map(|mut idx| {
            let terms = monos.iter().map(|e| {
                let c = (idx % 7) as i64 - 3;
                idx /= 7;
                (Monomial(e.clone()), BigInt::from(c))
            });
            IntPolynomial::from_terms(k, terms.collect::<Vec<_>>())
        })
        .filter(|p| !p.is_zero())
        .collect()
}

/// `P(α_{1,N}, …)` from term-by-term rational sums, without the certifier.
fn direct_value(fam: &SeriesFamily, p: &IntPolynomial, n: u64) -> BigRat {
    let alphas: Vec<BigRat> =
        (1..=fam.k()).map(|k| (1..=n).map(|i| fam.term(k, i).unwrap().as_rational(1 << 20).unwrap()).sum()).collect();
    p.terms()
        .iter()
        .map(|(m, c)| {
            m.exps()
                .iter()
                .zip(&alphas)
                .fold(BigRat::from_integer(c.clone()), |acc, (&e, a)| acc * a.clone().pow(e as i32))
        })
        .sum()
}

#[derive(Default)]
struct Sweep {
    certificates: usize,
    certified: usize,
    crosschecked: usize,
    resampled: usize,
    skipped: usize,
    disagreements: Vec<String>,
}

fn soundness_sweep() -> Outcome {
    let families = [
        ("ex-thm2-nk", family("ex-thm2-nk", r#"{"a":"3^n","K":2}"#)),
        ("ex-thm2-nk K=1", family("ex-thm2-nk", r#"{"a":"3^n","K":1}"#)),
        ("ex-p-irr", family("ex-p-irr", r#"{"a":"3^n"}"#)),
        ("zeta5 g=3^(2^n)", family("zeta5", r#"{"a":"3^(2^n)"}"#)),
    ];
    let mut total = Sweep::default();
    for (label, fam) in &families {
        let polys = all_quadratics(fam.k());
        let per_n: Vec<Sweep> = (5..=12u64)
            .into_par_iter()
            .map(|n| {
                let mut s = Sweep::default();
                let mut cert = Certifier::new(fam, n, CertOptions::default()).unwrap().with_order(2);
                for (i, p) in polys.iter().enumerate() {
                    let c = match cert.certify(p) {
                        Ok(c) => c,
                        Err(_) => {
                            s.skipped += 1;
                            continue;
                        }
                    };
                    s.certificates += 1;
                    if !c.verdict.certified() {
                        continue;
                    }
                    s.certified += 1;
                    if !c.crosscheck.evaluated {
                        continue;
                    }
                    s.crosschecked += 1;
                    if c.crosscheck.nonzero != Some(true) {
                        s.disagreements.push(format!("{label}: {p} at N = {n} certified but evaluates to 0"));
                    }
                    if i % 101 == 0 {
                        s.resampled += 1;
                        if direct_value(fam, p, n).is_zero() {
                            s.disagreements.push(format!("{label}: {p} at N = {n} is zero by direct summation"));
                        }
                    }
                }
                s
            })
            .collect();
        for s in per_n {
            total.certificates += s.certificates;
            total.certified += s.certified;
            total.crosschecked += s.crosschecked;
            total.resampled += s.resampled;
            total.skipped += s.skipped;
            total.disagreements.extend(s.disagreements);
        }
    }
    ensure(total.disagreements.is_empty(), || {
        format!("{} disagreements, first: {}", total.disagreements.len(), total.disagreements[0])
    })?;
    ensure(total.crosschecked > 0, || "nothing was crosschecked".into())?;
    Ok(format!(
        "{} certificates, {} certified, {} crosschecked nonzero ({} re-summed directly), {} skipped on preconditions",
        total.certificates, total.certified, total.crosschecked, total.resampled, total.skipped
    ))
}

// ---- 6. dominance formula ---------------------------------------------------------------

fn dominance_formula() -> Outcome {
    let mut compared = 0;
    let mut families = 0;
    for name in BUILTIN_NAMES.iter().filter(|n| **n != "table") {
        let fam = builtin_family(name, &BuiltinParams::default()).map_err(|e| format!("{name}: {e}"))?;
        let params = fam.params();
        let mut primes = params.primes.sample(params.prime_sample);
        primes.extend([2, 3, 5, 7]);
        primes.sort_unstable();
        primes.dedup();
        let mut any = false;
        for k in 1..=fam.k() {
            for n in 1..=12 {
                let Ok(sum) = partial_sum(&fam, k, n, 1 << 20) else { break };
                for &p in &primes {
                    let Ok(formula) = valuation_of_partial_sum(&fam, k, n, p) else { continue };
                    let direct = nu_p_rat(&sum.value, p).map_err(|e| e.to_string())?;
                    ensure(formula == direct, || format!("{name}, k = {k}, N = {n}, p = {p}: {formula} vs {direct}"))?;
                    compared += 1;
                    any = true;
                }
            }
        }
        families += any as usize;
    }
    ensure(compared > 0, || "no feasible case".into())?;
    Ok(format!("{compared} (family, k, N, p) cases over {families} families agree"))
}

// ---- 7. Z_N ---------------------------------------------------------------------------

/// `log2 Z_N` for `a_n = 2^{n!}` in floating point; the tail beyond `N` is `2^{−N!}(1 + tiny)`.
fn z_oracle(n: u64) -> f64 {
    let fact = |k: u64| (1..=k).map(|i| i as f64).product::<f64>();
    let prev = if n > 1 { fact(n - 1) } else { 0.0 };
    (n * n) as f64 * prev.sqrt() + 2.0 * (1..n).map(fact).sum::<f64>() - fact(n)
}

fn z_witness() -> Outcome {
    let fam = family("erdos", r#"{"a":"2^(n!)"}"#);
    let c = BigRat::new(1.into(), 2.into());
    let mut upper = Vec::new();
    for n in 1..=12u64 {
        let z = z_statistic(&fam, 1, &c, n, None).map_err(|e| e.to_string())?;
        let (lo, hi) = (z.log2_lower.to_f64().unwrap(), z.log2_upper.to_f64().unwrap());
        let o = z_oracle(n);
        ensure(lo <= o + 1e-6 && o <= hi + 1e-6, || format!("N = {n}: {o} outside [{lo}, {hi}]"))?;
        upper.push(z);
    }
    let min_upto = |h: usize| upper[..h].iter().min_by(|a, b| a.log2_upper.cmp(&b.log2_upper)).expect("nonempty");
    let mins: Vec<_> = [8, 10, 12].iter().map(|&h| min_upto(h)).collect();
    ensure(mins.windows(2).all(|w| w[1].log2_upper <= w[0].log2_upper), || "minimum grows with H".into())?;
    let best = mins[2];
    ensure(best.below(&BigRat::new(1.into(), 1_000_000.into())), || format!("min log2 Z = {}", best.log2_approx))?;
    Ok(format!(
        "min over N ≤ 12 at N = {}: log2 Z ≤ {:.1}; minima for H = 8, 10, 12 non-increasing",
        best.n, best.log2_approx
    ))
}

// ---- 8. growth witnesses -------------------------------------------------------------

/// Sufficient integer form of both inequalities for `log2 a_n = n!`, `M = 1`: since
/// `(1 + 1/N²)^{3^N} < 4^{3^N/N²}`, it is enough that `N!` beats `⌈2·3^N/N²⌉` plus the right side.
fn corollary_oracle(n: u64, k0: u64) -> (bool, bool) {
    let fact = |k: u64| (1..=k).fold(BigInt::one(), |acc, i| acc * i);
    let three = |e: u64| BigInt::from(3).pow(e as u32);
    let n2 = BigInt::from(n * n);
    let slack = (BigInt::from(2) * three(n) + &n2 - 1) / &n2;
    let first = (k0..n).map(|i| three(n - i) * fact(i)).max().unwrap_or_default();
    let second: BigInt = BigInt::from(2) * (k0..n).map(fact).sum::<BigInt>();
    (fact(n) > &slack + first, fact(n) > slack + second)
}

fn corollary() -> Outcome {
    let fam = family("erdos", r#"{"a":"2^(n!)"}"#);
    let r = corollary_witnesses(&fam, 1, 1, 12).map_err(|e| e.to_string())?;
    let ws: Vec<u64> = r.witnesses.iter().copied().filter(|n| (2..=12).contains(n)).collect();
    ensure(ws.len() >= 2, || format!("witnesses {:?}", r.witnesses))?;
    for &n in &ws {
        let (a, b) = corollary_oracle(n, r.k0);
        ensure(a && b, || format!("N = {n} not confirmed ({a}, {b})"))?;
    }
    Ok(format!("witnesses {ws:?}, each confirmed in exact integers"))
}

// ---- 9. examples --------------------------------------------------------------------

fn examples() -> Outcome {
    let mut lines = Vec::new();
    for name in ["ex-thm2-nk", "ex-p-irr", "ex-inf-alg"] {
        let cfg = RunConfig::builtin(name, 10);
        let report = cmd_examples(&cfg).map_err(|e| format!("{name}: {e}"))?;
        let mut checks = 0;
        for r in &report.results {
            if let ResultEntry::Check(c) = r {
                for ch in &c.checks {
                    ensure(ch.status == Status::Witnessed, || {
                        format!("{name}: {} is {} ({})", ch.condition.id(), ch.status, ch.detail)
                    })?;
                    checks += 1;
                }
            }
        }
        ensure(checks > 0, || format!("{name}: no hypothesis checked"))?;
        lines.push(format!("{name} {checks}/{checks}"));
    }
    Ok(format!("all hypotheses WITNESSED at H = 10: {}", lines.join(", ")))
}

// ---- 10. determinism ------------------------------------------------------------------

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("irrcert-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let cfg = dir.join("certify.json");
    std::fs::write(
        &cfg,
        r#"{"family": {"name": "ex-thm2-nk", "params": {"a": "3^n"}}, "horizon": 10,
            "polynomials": ["x1 + x2 - 1", "x1*x2 - 3", "2*x1^2 - x2"], "hypothesis": {"d": 2},
            "certify_range": [5, 10]}"#,
    )
    .map_err(|e| e.to_string())?;
    let cfg = cfg.to_str().unwrap();
    let commands: [&[&str]; 5] = [
        &["examples", "ex-p-irr", "--horizon", "10"],
        &["examples", "ex-thm2-nk", "--horizon", "10"],
        &["certify", "--config", cfg, "--gap"],
        &["genus", "--poly", "x1^4 + x2^4 - 1", "--poly", "x2^2 - x1^2 - x1^3"],
        &["zstat", "--config", cfg, "--window", "1:10"],
    ];
    let run = |args: &[&str], jobs: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_irrcert"))
            .args(args)
            .args(["--jobs", jobs, "--json", "-"])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(!out.stdout.is_empty(), || {
            format!("{args:?}: no output, stderr {}", String::from_utf8_lossy(&out.stderr))
        })?;
        Ok::<_, String>(out.stdout)
    };
    for args in commands {
        let first = run(args, "1")?;
        ensure(first == run(args, "1")?, || format!("{args:?}: reruns differ"))?;
        ensure(first == run(args, "4")?, || format!("{args:?}: --jobs 4 differs"))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} commands byte-identical across reruns and --jobs 1/4", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("valuation algebra", Some(5), valuation_algebra),
        ("identity suite", Some(1), identity_suite),
        ("Lipschitz bound", None, lipschitz),
        ("genus golden table", Some(10), genus_table),
        ("certificate soundness sweep", Some(120), soundness_sweep),
        ("dominance formula", None, dominance_formula),
        ("Z_N liminf witness", Some(30), z_witness),
        ("growth witnesses", None, corollary),
        ("example reproduction", None, examples),
        ("determinism", None, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if took > Duration::from_secs(*l) => Err(format!("took {took:.2?}, limit {l} s")),
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += outcome.is_err() as usize;
        println!("criterion {:>2} {name}: {tag} ({detail}) [{:.2?}]", i + 1, took);
    }
    println!("acceptance: {}/10 passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
