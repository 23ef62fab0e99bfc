//! Closed forms of the implemented means on positive scalars. Commuting
//! matrices reduce to these entrywise in a common eigenbasis.

use crate::error::{MeanError, Result};
use crate::means::{hoelder_scalar, MeanKind, WeightVector};
use crate::param::ExtendedParam;

/// `G(ω; a)` for positive scalars.
pub fn scalar_mean(kind: MeanKind, w: &WeightVector, a: &[f64]) -> Result<f64> {
    match kind {
        MeanKind::Arithmetic => hoelder_scalar(w, a, 1.0),
        MeanKind::Harmonic => hoelder_scalar(w, a, -1.0),
        MeanKind::Power(p) => hoelder_scalar(w, a, p),
        MeanKind::Karcher => hoelder_scalar(w, a, 0.0),
        MeanKind::Agh => Ok((hoelder_scalar(w, a, 1.0)? * hoelder_scalar(w, a, -1.0)?).sqrt()),
    }
}

/// `G^μ(ω; a)` for positive scalars.
pub fn scalar_param_mean(
    kind: MeanKind,
    mu: ExtendedParam,
    w: &WeightVector,
    a: &[f64],
) -> Result<f64> {
    let x = match mu {
        ExtendedParam::PlusInf => hoelder_scalar(w, a, 1.0)?,
        ExtendedParam::MinusInf => hoelder_scalar(w, a, -1.0)?,
        ExtendedParam::Finite(m) if m >= 0.0 => {
            let shifted: Vec<f64> = a.iter().map(|x| x + m).collect();
            scalar_mean(kind, w, &shifted)? - m
        }
        ExtendedParam::Finite(m) => {
            let inv: Vec<f64> = a.iter().map(|x| 1.0 / x).collect();
            1.0 / scalar_param_mean(kind, ExtendedParam::Finite(-m), w, &inv)?
        }
    };
    if x > 0.0 {
        Ok(x)
    } else {
        Err(MeanError::NonPositiveResult { min_eig: x })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_examples() {
        let w = WeightVector::uniform(2).unwrap();
        let a = [1.0, 4.0];
        assert_eq!(scalar_mean(MeanKind::Arithmetic, &w, &a).unwrap(), 2.5);
        assert!((scalar_mean(MeanKind::Harmonic, &w, &a).unwrap() - 1.6).abs() < 1e-15);
        assert!((scalar_mean(MeanKind::Karcher, &w, &a).unwrap() - 2.0).abs() < 1e-15);
        assert!((scalar_mean(MeanKind::Agh, &w, &a).unwrap() - 2.0).abs() < 1e-15);
        assert!((scalar_mean(MeanKind::Power(0.5), &w, &a).unwrap() - 2.25).abs() < 1e-15);
        let k1 = scalar_param_mean(MeanKind::Karcher, ExtendedParam::Finite(1.0), &w, &a).unwrap();
        assert!((k1 - (10f64.sqrt() - 1.0)).abs() < 1e-15);
        let km1 =
            scalar_param_mean(MeanKind::Karcher, ExtendedParam::Finite(-1.0), &w, &a).unwrap();
        assert!((km1 - 1.0 / (2.5f64.sqrt() - 1.0)).abs() < 1e-14);
    }
}
