// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! CSV rendering of sweep results: one row per (op, N) cell with the fixed
//! column set op,N,preproc_steps,query_steps_max,query_steps_mean,samples,
//! verdicts.

use std::io::Write;

use crate::sweep::SweepResult;
use crate::{HarnessError, HarnessResult};

/// Writes the per-op CSV for a batch of sweeps.
pub fn write_csv(results: &[SweepResult], out: impl Write) -> HarnessResult<()> {
    let mut w = csv::Writer::from_writer(out);
    let io_err = |e: csv::Error| HarnessError::Input(format!("csv write failed: {e}"));
    w.write_record([
        "op",
        "N",
        "preproc_steps",
        "query_steps_max",
        "query_steps_mean",
        "samples",
        "verdicts",
    ])
    .map_err(io_err)?;
    for r in results {
        let verdicts = format!(
            "constant_query={};linear_preproc={}",
            r.verdict_constant_query, r.verdict_linear_preproc
        );
        for (i, &n) in r.n_values.iter().enumerate() {
            w.write_record([
                r.op_name.as_str(),
                &n.to_string(),
                &r.preproc_steps[i].to_string(),
                &r.query_steps_max[i].to_string(),
                &format!("{:.3}", r.query_steps_mean[i]),
                &r.sample_count.to_string(),
                &verdicts,
            ])
            .map_err(io_err)?;
        }
    }
    w.flush()
        .map_err(|e| HarnessError::Input(format!("csv flush failed: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::OpName;
    use crate::sweep::{sweep, SweepConfig};

    #[test]
    fn csv_has_header_and_one_row_per_cell() {
        let cfg = SweepConfig {
            samples: 16,
            ..SweepConfig::default()
        };
        let r = sweep(OpName::Xor, &[64, 128], &cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(std::slice::from_ref(&r), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(
            lines[0],
            "op,N,preproc_steps,query_steps_max,query_steps_mean,samples,verdicts"
        );
        assert!(lines[1].starts_with("xor,64,"));
        assert!(lines[2].contains("constant_query="));
    }
}
