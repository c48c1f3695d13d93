//! Browser bindings: Hilbert symbols over Q, the epsilon factor of the
//! quadratic character mod p and the search for lambda with prescribed
//! local symbols.  Every entry point returns a JSON string.

use serde_json::json;
use wasm_bindgen::prelude::*;

use toric_periods::characters::{presentation, tate_epsilon, AdditiveCharacter, EpsilonValue, MultiplicativeCharacter, Rot};
use toric_periods::cli::{run, Command, Options};
use toric_periods::global::{parse_rational, rational_symbol, Place};
use toric_periods::padic::arith::is_prime;
use toric_periods::padic::qp;
use toric_periods::Error;

fn error_json(e: &Error) -> String {
    json!({"error_kind": e.kind(), "message": e.to_string()}).to_string()
}

fn symbol(place: &str, a: &str, b: &str) -> Result<i32, Error> {
    let place: Place = place.parse()?;
    rational_symbol(place, parse_rational(a)?, parse_rational(b)?)
}

/// (a, b)_v for rationals a, b and a place v ("inf" or a prime).
#[wasm_bindgen]
pub fn hilbert_symbol(place: &str, a: &str, b: &str) -> String {
    match symbol(place, a, b) {
        Ok(s) => json!({"place": place, "a": a, "b": b, "symbol": s}).to_string(),
        Err(e) => error_json(&e),
    }
}

fn quadratic(p: u32) -> Result<EpsilonValue, Error> {
    if p == 2 || !is_prime(p as u64) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    let field = qp(p as i128, 6)?;
    let chi = MultiplicativeCharacter::new(presentation(&field, 1)?, vec![Rot::from_integer(0), Rot::new(1, 2)])?;
    Ok(EpsilonValue::new(tate_epsilon(&chi, &AdditiveCharacter::standard(&field))?))
}

/// epsilon(1/2, chi, psi_p) for the quadratic character chi of Z_p^x
/// (trivial on p), which is the normalized Gauss sum.
#[wasm_bindgen]
pub fn quadratic_epsilon(p: u32) -> String {
    match quadratic(p) {
        Ok(v) => json!({"p": p, "epsilon": v}).to_string(),
        Err(e) => error_json(&e),
    }
}

/// lambda for K = Q(sqrt d) from targets such as {"3": -1, "inf": -1}.
#[wasm_bindgen]
pub fn find_lambda(d: i32, targets: &str, search_bound: u32) -> String {
    let targets: serde_json::Value = match serde_json::from_str(targets) {
        Ok(t) => t,
        Err(e) => return json!({"error_kind": "SchemaError", "message": e.to_string()}).to_string(),
    };
    let payload = json!({"d": d, "targets": [targets]}).to_string();
    let options = Options { search_bound: search_bound as u64, ..Options::default() };
    run(Command::FindLambda, &payload, &options).body.to_string()
}
