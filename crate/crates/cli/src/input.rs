//! File loading, grid parsing and validation of CLI inputs.

use std::path::Path;

use anyhow::Context;
use qstatfn::io::parse_matrix;
use qstatfn::statfuncs::linspace;
use qstatfn::{CMatrix, DensityOperator, Error, HermitianOperator, Tolerances};

/// `a:b:n`, `n` evenly spaced points per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        linspace(self.lo, self.hi, self.n)
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(format!("grid `{s}` is not of the form a:b:n"));
    };
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad grid start `{lo}`"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad grid end `{hi}`"))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| format!("bad grid size `{n}`"))?;
    if n == 0 || !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(format!("grid `{s}` is empty or reversed"));
    }
    Ok(Grid { lo, hi, n })
}

/// Comma-separated coordinates of one parameter point.
pub fn parse_point(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            let v: f64 = x
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad parameter value `{x}`")))?;
            Ok(v)
        })
        .collect()
}

pub fn read_file(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())).into())
}

pub fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())).into())
}

pub fn load_matrix(path: &Path) -> anyhow::Result<CMatrix> {
    let text = read_file(path)?;
    parse_matrix(&text).with_context(|| format!("{}", path.display()))
}

pub fn tolerances(tol: f64) -> Tolerances {
    Tolerances {
        hermitian: tol,
        trace: tol,
        ..Tolerances::default()
    }
}

pub fn load_state(path: &Path, tol: f64) -> anyhow::Result<DensityOperator> {
    let m = load_matrix(path)?;
    DensityOperator::with_tolerance(m, &tolerances(tol))
        .with_context(|| format!("{}", path.display()))
}

pub fn load_hermitian(path: &Path, tol: f64) -> anyhow::Result<HermitianOperator> {
    let m = load_matrix(path)?;
    HermitianOperator::with_tolerance(m, &tolerances(tol))
        .with_context(|| format!("{}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(
            parse_grid("-2:2:7").unwrap(),
            Grid {
                lo: -2.0,
                hi: 2.0,
                n: 7
            }
        );
        assert_eq!(parse_grid("0:0:1").unwrap().points(), vec![0.0]);
        assert!(parse_grid("1:0:3").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("0.5,-1").unwrap(), vec![0.5, -1.0]);
        assert!(parse_point("x").is_err());
    }
}
