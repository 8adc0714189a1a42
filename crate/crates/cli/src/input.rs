//! Parsing of field and polynomial arguments.

use primpow::{FieldElement, FieldSpec, QuadraticPoly};

fn parse_ints(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<i64>()
                .map_err(|_| format!("not an integer: {part:?}"))
        })
        .collect()
}

/// `F_(p^n)` with the default modulus, or with `modulus` given as the full
/// monic coefficient list, constant term first.
pub fn field(p: u64, n: u32, modulus: Option<&str>) -> Result<FieldSpec, String> {
    match modulus {
        None => FieldSpec::new(p, n).map_err(|e| e.to_string()),
        Some(m) => {
            let coeffs = parse_ints(m)?
                .into_iter()
                .map(|c| u64::try_from(c).map_err(|_| format!("negative modulus coefficient {c}")))
                .collect::<Result<Vec<u64>, String>>()?;
            let field = FieldSpec::with_modulus(p, &coeffs).map_err(|e| e.to_string())?;
            if field.degree() != n {
                return Err(format!(
                    "modulus has degree {} but -n is {n}",
                    field.degree()
                ));
            }
            Ok(field)
        }
    }
}

fn element(field: &FieldSpec, s: &str) -> Result<FieldElement, String> {
    let coeffs = parse_ints(s)?;
    field.from_coeffs(&coeffs).map_err(|e| e.to_string())
}

/// `a,b,c` (integers reduced mod p) or `a0,a1;b0,b1;c0,c1` (coefficient lists,
/// constant term first).
pub fn quadratic(field: &FieldSpec, s: &str) -> Result<QuadraticPoly, String> {
    let parts: Vec<FieldElement> = if s.contains(';') {
        s.split(';')
            .map(|part| element(field, part))
            .collect::<Result<_, _>>()?
    } else {
        if !field.is_prime_field() {
            return Err(format!(
                "over F_{} give each coefficient as a list, e.g. \"1,0;0,0;1,0\"",
                field.order()
            ));
        }
        parse_ints(s)?.into_iter().map(|v| field.from_int(v)).collect()
    };
    let [a, b, c] = parts[..] else {
        return Err(format!("expected three coefficients a, b, c; got {}", parts.len()));
    };
    QuadraticPoly::new(field, a, b, c).map_err(|e| e.to_string())
}
