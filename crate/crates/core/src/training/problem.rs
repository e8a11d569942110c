use crate::dataset::{Dataset, Partition};
use crate::error::{Error, Result};
use crate::mahler::combine;
use crate::model::{design_row, LossValue};
use crate::padic::{PAdic, Prime};

/// Training records with their basis rows evaluated once.
pub(crate) struct Problem {
    pub prime: Prime,
    pub precision: i64,
    basis: Vec<Vec<PAdic>>,
    labels: Vec<PAdic>,
}

impl Problem {
    pub fn new(data: &Dataset, degree: usize) -> Result<Problem> {
        let train: Vec<_> = data.records_in(Partition::Train).collect();
        if train.is_empty() {
            return Err(Error::EmptyPartition(Partition::Train.to_string()));
        }
        Ok(Problem {
            prime: data.prime(),
            precision: data.precision(),
            basis: train
                .iter()
                .map(|r| design_row(&r.x, degree, data.precision()))
                .collect::<Result<_>>()?,
            labels: train.iter().map(|r| r.y.clone()).collect(),
        })
    }

    pub fn loss(&self, weights: &[PAdic]) -> LossValue {
        let norms: Vec<_> = self
            .basis
            .iter()
            .zip(&self.labels)
            .map(|(row, y)| (y - &combine(weights, row, self.prime)).norm())
            .collect();
        LossValue::from_norms(self.prime, &norms)
    }
}
