use super::{SweepRow, TrialRecord};
use crate::format::{content_lines, FormatError};

pub const CSV_HEADER: &str = "# delaychan-csv v1";
pub const CSV_COLUMNS: &str = "trial,success,corrupted_fraction,spent,form_id";
pub const SWEEP_HEADER: &str = "# delaychan-sweep v1";
const SWEEP_COLUMNS: &str =
    "value,trials,success_rate,mean_corrupted,max_corrupted,mean_spent,max_spent,cost_per_corruption,distinct_forms";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Trial table; `success` is `1`/`0` and an absent fraction is left empty.
pub fn write_trial_csv(records: &[TrialRecord]) -> String {
    let mut out = format!("{CSV_HEADER}\n{CSV_COLUMNS}\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.trial,
            u8::from(r.success),
            opt(r.corrupted_fraction),
            r.spent,
            r.form_id
        ));
    }
    out
}

/// A parsed row of the trial table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub trial: usize,
    pub success: bool,
    pub corrupted_fraction: Option<f64>,
    pub spent: u64,
    pub form_id: usize,
}

fn uint<T: std::str::FromStr>(line: usize, field: usize, t: &str) -> Result<T, FormatError> {
    let bad = || FormatError::BadNumber {
        line,
        field,
        text: t.to_string(),
    };
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    t.parse().map_err(|_| bad())
}

/// Reads a table written by [`write_trial_csv`]. The version line must
/// come first; the column line must follow it.
pub fn parse_trial_csv(input: &str) -> Result<Vec<CsvRow>, FormatError> {
    if input.lines().next().map(str::trim) != Some(CSV_HEADER) {
        return Err(FormatError::Invalid {
            line: 1,
            reason: format!("expected {CSV_HEADER:?}"),
        });
    }
    let mut saw_columns = false;
    let mut rows = Vec::new();
    for (line, text) in content_lines(input).filter(|&(l, _)| l > 1) {
        if !saw_columns {
            if text.trim() != CSV_COLUMNS {
                return Err(FormatError::Invalid {
                    line,
                    reason: format!("expected columns {CSV_COLUMNS:?}"),
                });
            }
            saw_columns = true;
            continue;
        }
        let f: Vec<&str> = text.split(',').map(str::trim).collect();
        if f.len() != 5 {
            return Err(FormatError::WrongFieldCount {
                line,
                expected: 5,
                found: f.len(),
            });
        }
        let success = match f[1] {
            "1" => true,
            "0" => false,
            other => {
                return Err(FormatError::Invalid {
                    line,
                    reason: format!("success must be 0 or 1, got {other:?}"),
                })
            }
        };
        let corrupted_fraction = if f[2].is_empty() {
            None
        } else {
            match f[2].parse::<f64>() {
                Ok(x) if (0.0..=1.0).contains(&x) => Some(x),
                _ => {
                    return Err(FormatError::BadNumber {
                        line,
                        field: 3,
                        text: f[2].to_string(),
                    })
                }
            }
        };
        rows.push(CsvRow {
            trial: uint(line, 1, f[0])?,
            success,
            corrupted_fraction,
            spent: uint(line, 4, f[3])?,
            form_id: uint(line, 5, f[4])?,
        });
    }
    Ok(rows)
}

pub fn write_sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n{SWEEP_COLUMNS}\n");
    for r in rows {
        let a = &r.aggregate;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.value,
            a.trials,
            a.success_rate,
            opt(a.mean_corrupted),
            opt(a.max_corrupted),
            a.mean_spent,
            a.max_spent,
            opt(a.cost_per_corruption),
            a.distinct_forms
        ));
    }
    out
}
