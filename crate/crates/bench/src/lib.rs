//! Fixtures shared by the benchmarks.

use irrcert_core::poly::IntPolynomial;
use irrcert_core::series::{builtin_family, BuiltinParams, SeriesFamily};

pub fn family(name: &str, params: &str) -> SeriesFamily {
    let p: BuiltinParams = serde_json::from_str(params).expect("valid parameters");
    builtin_family(name, &p).expect("valid family")
}

pub fn poly(text: &str, nvars: usize) -> IntPolynomial {
    IntPolynomial::parse(text, Some(nvars)).expect("valid polynomial")
}
