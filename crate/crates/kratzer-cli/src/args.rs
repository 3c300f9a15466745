//! Flag values: angles with `pi` fractions and sampling grids.

use std::f64::consts::PI;

/// Parses `0.3`, `pi`, `-pi/2`, `3pi/4`, `0.5*pi`, `pi/3`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    if let Ok(v) = t.parse::<f64>() {
        return finite(v, s);
    }
    let Some(i) = t.find("pi") else {
        return Err(format!("cannot parse angle '{s}'"));
    };
    let (head, tail) = (&t[..i], &t[i + 2..]);
    let head = head.trim_end_matches('*');
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| format!("cannot parse angle '{s}'"))?,
    };
    let div = match tail {
        "" => 1.0,
        d => d
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .filter(|d| *d != 0.0)
            .ok_or_else(|| format!("cannot parse angle '{s}'"))?,
    };
    finite(coef * PI / div, s)
}

fn finite(v: f64, s: &str) -> Result<f64, String> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("angle '{s}' is not finite"))
    }
}

/// Sample points of a `--grid` flag.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

/// Parses `a:b:n` (linear), `log:a:b:n` (geometric) or `x1,x2,...`.
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    grid_points(s).map(Grid)
}

fn grid_points(s: &str) -> Result<Vec<f64>, String> {
    let bad = || format!("cannot parse grid '{s}' (use a:b:n, log:a:b:n or a comma list)");
    let num = |t: &str| t.trim().parse::<f64>().ok().filter(|v| v.is_finite());
    let parts: Vec<&str> = s.split(':').collect();
    let (log, rest) = match parts.as_slice() {
        ["log", rest @ ..] => (true, rest),
        rest => (false, rest),
    };
    match rest {
        [a, b, n] => {
            let (a, b) = (num(a).ok_or_else(bad)?, num(b).ok_or_else(bad)?);
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            if log && !(a > 0.0 && b > 0.0) {
                return Err(format!("log grid '{s}' needs positive ends"));
            }
            let at = |k: usize| {
                let t = if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
                if log {
                    (a.ln() + t * (b.ln() - a.ln())).exp()
                } else {
                    a + t * (b - a)
                }
            };
            Ok((0..n).map(at).collect())
        }
        [list] if !log => list.split(',').map(|t| num(t).ok_or_else(bad)).collect(),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("0.5*pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_angle("PI").unwrap(), PI);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("x").is_err());
        assert!(parse_angle("inf").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(grid_points("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        let g = grid_points("log:1:100:3").unwrap();
        assert!((g[1] - 10.0).abs() < 1e-12 && (g[2] - 100.0).abs() < 1e-12);
        assert_eq!(grid_points("1,2.5,4").unwrap(), vec![1.0, 2.5, 4.0]);
        assert!(grid_points("log:0:1:3").is_err());
        assert!(grid_points("1:2").is_err());
        assert!(grid_points("0:1:0").is_err());
    }
}
