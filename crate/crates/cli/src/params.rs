use std::collections::HashMap;

use dirdist::dist::{AcgParams, MvtParams, ScParams, WcParams};
use dirdist::{Angle, SpdMatrix, UnitVector};
use nalgebra::DVector;

use crate::CliError;

/// `key=value` pairs from `--params`.
#[derive(Debug, Default)]
pub struct Params(HashMap<String, String>);

impl Params {
    pub fn parse(pairs: &[String]) -> Result<Self, CliError> {
        let mut map = HashMap::new();
        for pair in pairs {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("expected key=value, got `{pair}`")))?;
            if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(CliError::usage(format!("parameter `{k}` given twice")));
            }
        }
        Ok(Params(map))
    }

    pub fn scalar(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.0
            .get(key)
            .map(|v| v.parse::<f64>().map_err(|_| CliError::usage(format!("`{key}` must be a number, got `{v}`"))))
            .transpose()
    }

    pub fn require(&self, key: &str) -> Result<f64, CliError> {
        self.scalar(key)?
            .ok_or_else(|| CliError::usage(format!("missing parameter `{key}`")))
    }

    pub fn list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.0.get(key).map(|v| parse_list(v)).transpose()
    }

    pub fn dim(&self) -> Result<Option<usize>, CliError> {
        match self.scalar("q")? {
            None => Ok(None),
            Some(q) if q.fract() == 0.0 && q >= 2.0 => Ok(Some(q as usize)),
            Some(q) => Err(CliError::usage(format!("`q` must be an integer >= 2, got {q}"))),
        }
    }

    pub fn wc(&self) -> Result<WcParams, CliError> {
        let mu = self.scalar("mu")?.unwrap_or(0.0);
        Ok(WcParams::new(self.require("lambda")?, Angle::new(mu))?)
    }

    /// `omega` (row-major, with `q`), or `b` for the circle, or `q` alone
    /// for the uniform law.
    pub fn acg(&self) -> Result<AcgParams, CliError> {
        if let Some(b) = self.scalar("b")? {
            return Ok(AcgParams::circle(b)?);
        }
        match self.list("omega")? {
            Some(entries) => {
                let q = match self.dim()? {
                    Some(q) => q,
                    None => square_side(entries.len())?,
                };
                Ok(AcgParams::new(SpdMatrix::from_row_slice(q, &entries)?)?)
            }
            None => Ok(AcgParams::uniform(self.dim()?.unwrap_or(2))?),
        }
    }

    /// `lambda` and `mu0` (a direction, normalized here), or `q` for `mu0 = e1`.
    pub fn sc(&self) -> Result<ScParams, CliError> {
        let mu0 = match self.list("mu0")? {
            Some(v) => UnitVector::normalize(v)?,
            None => UnitVector::north(self.dim()?.unwrap_or(2))?,
        };
        Ok(ScParams::new(self.require("lambda")?, mu0)?)
    }

    /// `location`, `scatter` (row-major) and `dof`.
    pub fn mvt(&self) -> Result<MvtParams, CliError> {
        let location = self
            .list("location")?
            .ok_or_else(|| CliError::usage("missing parameter `location`"))?;
        let p = location.len();
        let scatter = match self.list("scatter")? {
            Some(s) => SpdMatrix::from_row_slice(p, &s)?,
            None => SpdMatrix::identity(p),
        };
        Ok(MvtParams::new(DVector::from_vec(location), scatter, self.require("dof")?)?)
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("bad number `{t}` in list `{s}`")))
        })
        .collect()
}

fn square_side(n: usize) -> Result<usize, CliError> {
    let q = (n as f64).sqrt().round() as usize;
    if q * q == n {
        Ok(q)
    } else {
        Err(CliError::usage(format!("omega has {n} entries, not a square matrix; pass q=")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(args: &[&str]) -> Params {
        Params::parse(&args.iter().map(|s| s.to_string()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn parses_pairs_and_lists() {
        let params = p(&["lambda=0.5", "mu0=1,0,0"]);
        assert_eq!(params.require("lambda").unwrap(), 0.5);
        assert_eq!(params.list("mu0").unwrap().unwrap(), vec![1.0, 0.0, 0.0]);
        assert_eq!(params.sc().unwrap().dim(), 3);
        assert!(Params::parse(&["lambda".to_string()]).is_err());
        assert!(p(&["lambda=x"]).require("lambda").is_err());
    }

    #[test]
    fn acg_from_omega() {
        let acg = p(&["q=2", "omega=4,0,0,1"]).acg().unwrap();
        assert!((acg.omega().matrix()[(0, 0)] - 2.0).abs() < 1e-15);
        assert!(p(&["omega=1,2,2,1"]).acg().is_err());
        assert!(p(&["omega=1,0,0"]).acg().is_err());
    }
}
