//! Flag-string parsers: matrix, potential, and evaluation grid.

use anosov_core::{Potential, PotentialTerm};
use anyhow::{bail, Context, Result};

/// "a,b,c,d" row-major.
pub fn parse_matrix(s: &str) -> Result<[[i64; 2]; 2]> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>().with_context(|| format!("matrix entry {p:?}")))
        .collect::<Result<_>>()?;
    if parts.len() != 4 {
        bail!("matrix needs four entries a,b,c,d, got {}", parts.len());
    }
    Ok([[parts[0], parts[1]], [parts[2], parts[3]]])
}

/// Sum of '+'-joined terms: `zero`, `const:<c>`, `cos:<m1>,<m2>:<amp>`,
/// `sin:<m1>,<m2>:<amp>`.
pub fn parse_potential(s: &str) -> Result<Potential> {
    let mut out = Potential::zero();
    for token in s.split('+') {
        let token = token.trim();
        if token == "zero" {
            continue;
        }
        if let Some(c) = token.strip_prefix("const:") {
            out.constant += c.trim().parse::<f64>().with_context(|| format!("constant {c:?}"))?;
            continue;
        }
        let (kind, rest) = match (token.strip_prefix("cos:"), token.strip_prefix("sin:")) {
            (Some(r), _) => ("cos", r),
            (_, Some(r)) => ("sin", r),
            _ => bail!("unknown potential term {token:?} (expected zero, const:, cos:, or sin:)"),
        };
        let mut fields = rest.split(':');
        let freq = fields.next().unwrap_or_default();
        let amp = fields
            .next()
            .ok_or_else(|| anyhow::anyhow!("{kind} term {token:?} is missing an amplitude"))?;
        if fields.next().is_some() {
            bail!("{kind} term {token:?} has trailing fields");
        }
        let ms: Vec<i64> = freq
            .split(',')
            .map(|p| p.trim().parse::<i64>().with_context(|| format!("frequency {p:?}")))
            .collect::<Result<_>>()?;
        if ms.len() != 2 {
            bail!("{kind} term {token:?} needs a frequency m1,m2");
        }
        let amp: f64 = amp.trim().parse().with_context(|| format!("amplitude {amp:?}"))?;
        let (cos, sin) = if kind == "cos" { (amp, 0.0) } else { (0.0, amp) };
        out.terms.push(PotentialTerm {
            m: [ms[0], ms[1]],
            cos,
            sin,
        });
    }
    Ok(out)
}

/// "min:max:step" with step > 0 and min ≤ max.
pub fn parse_grid(s: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("grid field {p:?}")))
        .collect::<Result<_>>()?;
    if parts.len() != 3 {
        bail!("grid needs min:max:step, got {} fields", parts.len());
    }
    let (min, max, step) = (parts[0], parts[1], parts[2]);
    if !(step > 0.0) || min > max {
        bail!("grid needs step > 0 and min <= max");
    }
    Ok((min, max, step))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        assert_eq!(parse_matrix("1,1,1,0").unwrap(), [[1, 1], [1, 0]]);
        assert_eq!(parse_matrix(" 2, 1 ,1, 1 ").unwrap(), [[2, 1], [1, 1]]);
        assert!(parse_matrix("1,1,1").is_err());
        assert!(parse_matrix("1,1,1,x").is_err());
    }

    #[test]
    fn potential_terms() {
        assert_eq!(parse_potential("zero").unwrap(), Potential::zero());
        assert_eq!(parse_potential("const:0.5").unwrap(), Potential::constant(0.5));
        assert_eq!(
            parse_potential("cos:1,0:0.3").unwrap(),
            Potential::cosine([1, 0], 0.3)
        );
        let combo = parse_potential("cos:1,0:0.3+const:-0.1").unwrap();
        assert_eq!(combo.constant, -0.1);
        assert_eq!(combo.terms.len(), 1);
        let s = parse_potential("sin:2,-1:0.25").unwrap();
        assert_eq!(s.terms[0].sin, 0.25);
        assert_eq!(s.terms[0].m, [2, -1]);
        assert!(parse_potential("tan:1,0:1").is_err());
        assert!(parse_potential("cos:1:0.3").is_err());
        assert!(parse_potential("cos:1,0").is_err());
    }

    #[test]
    fn grid_fields() {
        assert_eq!(parse_grid("-2:2:0.05").unwrap(), (-2.0, 2.0, 0.05));
        assert!(parse_grid("2:-2:0.05").is_err());
        assert!(parse_grid("-2:2:0").is_err());
        assert!(parse_grid("-2:2").is_err());
    }
}
