use rayon::prelude::*;
use serde::Serialize;

use crate::control::SeriesControl;
use crate::error::Result;

use super::closed_form::tail_mass;
use super::params::FractionalParams;

/// State probabilities on a time grid, with the mass beyond `n_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PmfTable {
    pub params: FractionalParams,
    pub times: Vec<f64>,
    pub n_max: u32,
    /// `probs[i][n] = p(n, times[i])`.
    pub probs: Vec<Vec<f64>>,
    /// `tail_mass[i] = Pr{N(times[i]) > n_max}`.
    pub tail_mass: Vec<f64>,
    pub truncation: SeriesControl,
}

impl PmfTable {
    /// Fills the table; rows are computed in parallel but each cell is
    /// summed in a fixed order, so the result does not depend on scheduling.
    pub fn compute(params: &FractionalParams, times: &[f64], n_max: u32, control: &SeriesControl) -> Result<Self> {
        params.validate()?;
        control.validate()?;
        let rows = times
            .par_iter()
            .map(|&t| {
                let probs = (0..=n_max)
                    .map(|n| params.pmf_with(t, n, control))
                    .collect::<Result<Vec<_>>>()?;
                let tail = tail_mass(params, t, n_max, control)?;
                Ok((probs, tail))
            })
            .collect::<Result<Vec<_>>>()?;
        let (probs, tail_mass) = rows.into_iter().unzip();
        Ok(PmfTable {
            params: *params,
            times: times.to_vec(),
            n_max,
            probs,
            tail_mass,
            truncation: *control,
        })
    }

    /// `Σ_n p(n, t_i) + tail_i`, which should be one.
    pub fn total_mass(&self, i: usize) -> f64 {
        self.probs[i].iter().sum::<f64>() + self.tail_mass[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shape_and_mass() {
        let p = FractionalParams::stfpp(1.0, 0.7, 0.6).unwrap();
        let times = [0.0, 0.5, 1.0, 2.0];
        let table = PmfTable::compute(&p, &times, 20, &SeriesControl::default()).unwrap();
        assert_eq!(table.probs.len(), 4);
        assert!(table.probs.iter().all(|row| row.len() == 21));
        assert_eq!(table.probs[0][0], 1.0);
        for i in 0..times.len() {
            assert!((table.total_mass(i) - 1.0).abs() < 1e-9);
            assert!(table.probs[i].iter().all(|&x| (-1e-9..=1.0 + 1e-9).contains(&x)));
        }
    }

    #[test]
    fn table_errors_are_all_or_nothing() {
        let p = FractionalParams::stfpp(1.0, 0.7, 0.6).unwrap();
        assert!(PmfTable::compute(&p, &[1.0, -1.0], 5, &SeriesControl::default()).is_err());
    }
}
