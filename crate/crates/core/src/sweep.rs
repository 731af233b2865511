//! The Σ(2,3,6k−1) family under the Frøyshov axiom.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cs_q::FourManifoldModel;
use crate::error::ObstructionError;
use crate::level::Level;
use crate::obstruction::{AssumptionSet, ObstructionReport, Verdict};
use crate::seifert::{enumerate_flat_connections, validate_seifert};

pub const K_MAX: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SweepError {
    #[error("k range must satisfy 1 <= k_min <= k_max <= {K_MAX}, got {0}..{1}")]
    BadRange(u32, u32),
    #[error("k = {0}: {1}")]
    Row(u32, ObstructionError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: u32,
    pub multiplicities: [i64; 3],
    pub connections: usize,
    pub odd: usize,
    pub even: usize,
    pub parity_ok: bool,
    pub verdict: Verdict,
    pub r_max: Level,
    pub l_y: u32,
    /// Level of the certificate, when obstructed.
    pub certified_at: Option<Level>,
    pub report: ObstructionReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepTable {
    pub k_min: u32,
    pub k_max: u32,
    pub rows: Vec<SweepRow>,
    /// First k whose connections are not all of odd grading.
    pub first_parity_failure: Option<u32>,
}

pub fn sweep_row(k: u32) -> Result<SweepRow, ObstructionError> {
    let m = [2, 3, 6 * k as i64 - 1];
    let y = validate_seifert(&m)?;
    let connections = enumerate_flat_connections(&y)?;
    let odd = connections.iter().filter(|c| c.grading % 2 == 1).count();
    let even = connections.len() - odd;
    let report = crate::obstruction::embedding_verdict(&y, &FourManifoldModel::HomotopyS3xS1, &AssumptionSet::froyshov())?;
    Ok(SweepRow {
        k,
        multiplicities: m,
        connections: connections.len(),
        odd,
        even,
        parity_ok: even == 0,
        verdict: report.verdict,
        r_max: report.r_max(),
        l_y: report.l_y(),
        certified_at: report.certificate().map(|c| c.r),
        report,
    })
}

/// Rows are computed in parallel and returned in increasing k.
pub fn sweep_example(k_min: u32, k_max: u32) -> Result<SweepTable, SweepError> {
    if k_min < 1 || k_min > k_max || k_max > K_MAX {
        return Err(SweepError::BadRange(k_min, k_max));
    }
    let rows = (k_min..=k_max)
        .into_par_iter()
        .map(|k| sweep_row(k).map_err(|e| SweepError::Row(k, e)))
        .collect::<Result<Vec<_>, _>>()?;
    let first_parity_failure = rows.iter().find(|r| !r.parity_ok).map(|r| r.k);
    Ok(SweepTable { k_min, k_max, rows, first_parity_failure })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_checks() {
        assert_eq!(sweep_example(0, 3), Err(SweepError::BadRange(0, 3)));
        assert_eq!(sweep_example(4, 3), Err(SweepError::BadRange(4, 3)));
        assert_eq!(sweep_example(1, 65), Err(SweepError::BadRange(1, 65)));
    }

    #[test]
    fn first_row() {
        let t = sweep_example(1, 1).unwrap();
        assert_eq!(t.rows.len(), 1);
        let row = &t.rows[0];
        assert_eq!(row.multiplicities, [2, 3, 5]);
        assert_eq!(row.connections, 2);
        assert_eq!(row.verdict, Verdict::Obstructed);
        assert_eq!(t.first_parity_failure, None);
    }

    #[test]
    fn ordered_by_k() {
        let t = sweep_example(2, 5).unwrap();
        assert_eq!(t.rows.iter().map(|r| r.k).collect::<Vec<_>>(), vec![2, 3, 4, 5]);
    }
}
