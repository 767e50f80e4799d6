use serde::Serialize;

use crate::error::Result;
use crate::scalar::{exponent_parts, pow, pow_bounds, rat, serde_rational, serde_rational_opt, to_f64, Rational};

/// `C_{d,q}`: `(5/2)^d` for `q >= 1`, `(5/2)^{d/q} 3^{d/q - d}` for `0 < q < 1`.
///
/// When `d/q` is not an integer the constant is irrational; `value` is then
/// `None` and `lower`/`upper` enclose it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevConstant {
    #[serde(with = "serde_rational_opt")]
    pub value: Option<Rational>,
    #[serde(with = "serde_rational")]
    pub lower: Rational,
    #[serde(with = "serde_rational")]
    pub upper: Rational,
    pub expression: String,
    pub float: f64,
}

pub fn lev_constant(d: u32, q: &Rational) -> Result<LevConstant> {
    exponent_parts(q)?;
    let five_halves = rat(5, 2);
    if *q >= Rational::from_integer(1.into()) {
        let v = pow(&five_halves, d);
        return Ok(LevConstant {
            float: to_f64(&v),
            lower: v.clone(),
            upper: v.clone(),
            value: Some(v),
            expression: format!("(5/2)^{d}"),
        });
    }
    // (5/2)^e 3^{e - d} = (15/2)^e / 3^d with e = d/q.
    let e = Rational::from_integer(d.into()) / q;
    let three_d = pow(&rat(3, 1), d);
    let expression = format!("(5/2)^({e}) * 3^({e} - {d})", e = crate::scalar::format_rational(&e));
    if e.is_integer() {
        let k = u32::try_from(e.to_integer()).map_err(|_| {
            crate::error::Error::InvalidParameter("exponent d/q too large".into())
        })?;
        let v = pow(&rat(15, 2), k) / three_d;
        return Ok(LevConstant { float: to_f64(&v), lower: v.clone(), upper: v.clone(), value: Some(v), expression });
    }
    let (lo, hi) = pow_bounds(&rat(15, 2), &e)?;
    let lower = lo / &three_d;
    let upper = hi / &three_d;
    Ok(LevConstant {
        float: (7.5f64).powf(to_f64(&e)) / to_f64(&three_d),
        value: None,
        lower,
        upper,
        expression,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn constants_for_q_at_least_one() {
        assert_eq!(lev_constant(2, &int(1)).unwrap().value, Some(rat(25, 4)));
        assert_eq!(lev_constant(3, &int(7)).unwrap().value, Some(rat(125, 8)));
        assert_eq!(lev_constant(1, &rat(3, 2)).unwrap().value, Some(rat(5, 2)));
    }

    #[test]
    fn constants_below_one() {
        assert_eq!(lev_constant(1, &rat(1, 2)).unwrap().value, Some(rat(75, 4)));
        // d = 2, q = 1/4: (5/2)^8 3^6.
        assert_eq!(
            lev_constant(2, &rat(1, 4)).unwrap().value,
            Some(pow(&rat(5, 2), 8) * int(729))
        );
    }

    #[test]
    fn irrational_constant_is_enclosed() {
        let c = lev_constant(1, &rat(2, 3)).unwrap();
        assert!(c.value.is_none());
        // (5/2)^{3/2} 3^{1/2} ~ 6.8465
        assert!(c.lower < c.upper);
        assert!((to_f64(&c.lower) - c.float).abs() < 1e-12);
        assert!((c.float - 2.5f64.powf(1.5) * 3f64.sqrt()).abs() < 1e-12);
    }
}
