use irrcert_core::series::{
    builtin_family, checks, run_preset, BuiltinParams, CheckConfig, Condition, Preset, Status, BUILTIN_NAMES,
};

fn report_line(r: &irrcert_core::series::CheckReport) -> String {
    format!("{:?} k={:?} p={:?} {} {}", r.condition, r.series, r.prime, r.status, r.detail)
}

#[test]
fn builtins_satisfy_their_own_presets_at_twelve() {
    for name in BUILTIN_NAMES.iter().filter(|n| **n != "table") {
        let fam = builtin_family(name, &BuiltinParams::default()).unwrap();
        let cfg = CheckConfig::new(12, fam.params().clone());
        let rep = run_preset(&fam, fam.preset(), &cfg).unwrap();
        let bad: Vec<String> = rep.checks.iter().filter(|c| c.status != Status::Witnessed).map(report_line).collect();
        assert!(bad.is_empty(), "{name} under {}: {bad:#?}", fam.preset());
    }
}

#[test]
fn examples_witnessed_at_ten() {
    for name in ["ex-thm2-nk", "ex-p-irr", "ex-inf-alg"] {
        let fam = builtin_family(name, &BuiltinParams::default()).unwrap();
        let cfg = CheckConfig::new(10, fam.params().clone());
        let rep = run_preset(&fam, fam.preset(), &cfg).unwrap();
        assert_eq!(
            rep.verdict,
            Status::Witnessed,
            "{name}: {:#?}",
            rep.checks.iter().map(report_line).collect::<Vec<_>>()
        );
    }
}

#[test]
fn unique_max_agrees_with_brute_force() {
    for name in ["ex-thm2-nk", "ex-thm2-nu2n", "ex-thm1", "zeta5", "ex-inf-alg", "ex-hk12"] {
        let fam = builtin_family(name, &BuiltinParams::default()).unwrap();
        for p in [2u64, 3, 5] {
            for k in 1..=fam.k() {
                for big_n in 1..=20u64 {
                    let v: Vec<_> = (1..=big_n).map(|n| fam.denominator(k, n).unwrap().valuation(p)).collect();
                    let max = v.iter().max().unwrap();
                    let count = v.iter().filter(|x| *x == max).count();
                    let rep = checks::check_unique_max_valuation(&fam, k, p, [big_n, big_n]).unwrap();
                    let expect = if count == 1 { Status::Witnessed } else { Status::Falsified };
                    assert_eq!(rep.status, expect, "{name} k={k} p={p} N={big_n}");
                }
            }
        }
    }
}

#[test]
fn erdos_case_sandwich_holds_everywhere() {
    for name in ["erdos", "zeta5", "ex-p-irr"] {
        let fam = builtin_family(name, &BuiltinParams::default()).unwrap();
        let p = fam.params();
        let rep = checks::check_envelope(&fam, p, checks::SandwichMode::Standard { k: 1, d: 1 }, [1, 12]).unwrap();
        for r in rep.iter().filter(|r| r.condition == Condition::EnvelopeSandwich) {
            assert_eq!(r.status, Status::Witnessed, "{name}: {}", r.detail);
        }
    }
}

#[test]
fn alg_indep_envelope_examples() {
    let params: BuiltinParams = serde_json::from_str(r#"{"a":"3^(n!)"}"#).unwrap();
    let fam = builtin_family("ex-thm2-nk", &params).unwrap();
    let rep = checks::check_envelope(&fam, fam.params(), checks::SandwichMode::Power { a: 4 }, [1, 8]).unwrap();
    for r in &rep {
        if matches!(r.condition, Condition::EnvelopeGrowth | Condition::NumeratorBound) {
            assert_eq!(r.status, Status::Witnessed, "{:?}", r);
        }
    }
    // The second infinite-prime family meets the A-sandwich at every index up to 10.
    let fam = builtin_family("ex-inf-alg", &BuiltinParams::default()).unwrap();
    for k in 1..=2 {
        let r = checks::check_envelope_sandwich(
            &fam,
            k,
            &fam.params().kappa,
            checks::SandwichMode::Power { a: 4 },
            [1, 10],
        )
        .unwrap();
        assert_eq!(r.status, Status::Witnessed, "k={k}: {}", r.detail);
    }
}

#[test]
fn boundary_growth_is_not_witnessed() {
    // g(n) = 3^{2^n} sits exactly on the boundary of limsup g(n)^{1/2^n} = ∞.
    let params: BuiltinParams = serde_json::from_str(r#"{"a":"3^(2^n)"}"#).unwrap();
    let fam = builtin_family("zeta5", &params).unwrap();
    let cfg = CheckConfig::new(12, fam.params().clone());
    let rep = run_preset(&fam, Preset::General, &cfg).unwrap();
    let limsup = rep.checks.iter().find(|c| c.condition == Condition::EnvelopeLimsup).unwrap();
    assert_eq!(limsup.status, Status::Unknown);
    assert_ne!(rep.verdict, Status::Falsified);
}

#[test]
fn config_errors() {
    let fam = builtin_family("ex-thm2-nk", &BuiltinParams::default()).unwrap();
    let mut cfg = CheckConfig::new(12, fam.params().clone());
    cfg.window = Some([0, 5]);
    assert!(run_preset(&fam, Preset::General, &cfg).is_err());
    let cfg = CheckConfig::new(12, fam.params().clone());
    assert!(run_preset(&fam, Preset::GeneralInfinite, &cfg).is_err());
    let three: BuiltinParams = serde_json::from_str(r#"{"K":3}"#).unwrap();
    let fam3 = builtin_family("ex-thm2-nk", &three).unwrap();
    assert!(run_preset(&fam3, Preset::K2, &cfg).is_err());
}
