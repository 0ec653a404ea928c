//! `affine | spline | perturbed:<c> | poly:<c0,c1,...>`

use fvpg::weighting::{affine, perturbed_family, spline, WeightingFunction};

use crate::error::CliError;

fn number(s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| CliError::Usage(format!("not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!("not a finite number: {s:?}")));
    }
    Ok(v)
}

pub fn parse_psi(spec: &str) -> Result<WeightingFunction, CliError> {
    let spec = spec.trim();
    match spec.split_once(':') {
        None => match spec {
            "affine" => Ok(affine()),
            "spline" => Ok(spline()),
            _ => Err(CliError::Usage(format!(
                "unknown weighting function {spec:?} (expected affine, spline, perturbed:<c> or poly:<c0,c1,...>)"
            ))),
        },
        Some(("perturbed", c)) => Ok(perturbed_family(number(c)?)),
        Some(("poly", list)) => {
            let coeffs = list.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
            Ok(WeightingFunction::polynomial(format!("poly:{list}"), coeffs))
        }
        Some((head, _)) => Err(CliError::Usage(format!("unknown weighting family {head:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        assert_eq!(parse_psi("spline").unwrap().name(), "spline");
        assert_eq!(parse_psi(" affine ").unwrap().name(), "affine");
        assert_eq!(parse_psi("perturbed:1.0").unwrap().name(), "perturbed:1");
    }

    #[test]
    fn poly_matches_spline() {
        let p = parse_psi("poly:0,-9,30,-20").unwrap();
        let s = spline();
        for t in [0.0, 0.3, 0.7, 1.0] {
            assert_eq!(p.eval(t), s.eval(t));
        }
    }

    #[test]
    fn rejects_garbage() {
        for bad in [
            "",
            "cubic",
            "perturbed:",
            "perturbed:x",
            "poly:",
            "poly:1,,2",
            "poly:nan",
            "perturbed:inf",
            "foo:1",
        ] {
            assert!(matches!(parse_psi(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }
}
