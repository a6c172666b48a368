//! Line-oriented text formats.
//!
//! * Codewords: one per line, ASCII `0`/`1`.
//! * Delay schedules: one per line, comma-separated decimal delays.
//! * Bit strings: a single ASCII `0`/`1` run (messages).
//! * Bank traces: `block,case,bank,spent` rows.
//!
//! Lines starting with `#` are comments and blank lines are skipped. Every
//! position is 0-based; the writers state this in their header line.

use thiserror::Error;

use crate::adversaries::{BankCase, TraceEntry};
use crate::channel::{Codeword, DelaySchedule};

pub const CODEWORD_HEADER: &str = "# delaychan-codewords v1 (positions 0-based)";
pub const TRACE_HEADER: &str = "# delaychan-trace v1";
pub const TRACE_COLUMNS: &str = "block,case,bank,spent";
pub const SCHEDULE_HEADER: &str =
    "# delaychan-schedules v1 (delay of position i is field i, 0-based)";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: unexpected character {found:?} at column {column}")]
    BadChar {
        line: usize,
        column: usize,
        found: char,
    },
    #[error("line {line}: field {field} is not a nonnegative integer: {text:?}")]
    BadNumber {
        line: usize,
        field: usize,
        text: String,
    },
    #[error("line {line}: length {found}, expected {expected}")]
    WrongLength {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: expected {expected} fields, found {found}")]
    WrongFieldCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {reason}")]
    Invalid { line: usize, reason: String },
}

/// Content lines with their 1-based line numbers.
pub(crate) fn content_lines(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
}

fn bits_of_line(line: usize, text: &str) -> Result<Vec<u8>, FormatError> {
    text.chars()
        .enumerate()
        .map(|(column, ch)| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            found => Err(FormatError::BadChar {
                line,
                column: column + 1,
                found,
            }),
        })
        .collect()
}

/// Parses a single bit string, ignoring surrounding whitespace.
pub fn parse_bits(input: &str) -> Result<Vec<u8>, FormatError> {
    bits_of_line(1, input.trim())
}

pub fn format_bits(bits: &[u8]) -> String {
    bits.iter()
        .map(|&b| if b == 0 { '0' } else { '1' })
        .collect()
}

/// Parses the codeword format. With `expected_len`, every line must have
/// exactly that many symbols.
pub fn parse_codewords(
    input: &str,
    expected_len: Option<usize>,
) -> Result<Vec<Codeword>, FormatError> {
    let mut out = Vec::new();
    for (line, text) in content_lines(input) {
        let bits = bits_of_line(line, text.trim())?;
        if let Some(expected) = expected_len {
            if bits.len() != expected {
                return Err(FormatError::WrongLength {
                    line,
                    expected,
                    found: bits.len(),
                });
            }
        }
        // Every symbol is already 0 or 1.
        out.push(Codeword::from_bits(bits).expect("validated bits"));
    }
    Ok(out)
}

pub fn write_codewords(codewords: &[Codeword]) -> String {
    let mut out = String::from(CODEWORD_HEADER);
    out.push('\n');
    for c in codewords {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_schedules(
    input: &str,
    expected_len: Option<usize>,
) -> Result<Vec<DelaySchedule>, FormatError> {
    let mut out = Vec::new();
    for (line, text) in content_lines(input) {
        let delays = text
            .split(',')
            .enumerate()
            .map(|(field, f)| number(line, field + 1, f))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(expected) = expected_len {
            if delays.len() != expected {
                return Err(FormatError::WrongLength {
                    line,
                    expected,
                    found: delays.len(),
                });
            }
        }
        out.push(DelaySchedule::new(delays));
    }
    Ok(out)
}

pub fn write_schedules(schedules: &[DelaySchedule]) -> String {
    let mut out = String::from(SCHEDULE_HEADER);
    out.push('\n');
    for d in schedules {
        out.push_str(&d.to_string());
        out.push('\n');
    }
    out
}

fn number<T: std::str::FromStr>(line: usize, field: usize, text: &str) -> Result<T, FormatError> {
    let t = text.trim();
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

/// Parses a bank trace. The column line is optional.
pub fn parse_trace(input: &str) -> Result<Vec<TraceEntry>, FormatError> {
    let mut out = Vec::new();
    for (line, text) in content_lines(input) {
        if text.trim() == TRACE_COLUMNS {
            continue;
        }
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != 4 {
            return Err(FormatError::WrongFieldCount {
                line,
                expected: 4,
                found: fields.len(),
            });
        }
        let case = fields[1]
            .trim()
            .parse::<BankCase>()
            .map_err(|reason| FormatError::Invalid { line, reason })?;
        out.push(TraceEntry {
            block: number(line, 1, fields[0])?,
            case,
            bank: number(line, 3, fields[2])?,
            spent: number(line, 4, fields[3])?,
        });
    }
    Ok(out)
}

pub fn write_trace(entries: &[TraceEntry]) -> String {
    let mut out = format!("{TRACE_HEADER}\n{TRACE_COLUMNS}\n");
    for e in entries {
        out.push_str(&format!("{},{},{},{}\n", e.block, e.case, e.bank, e.spent));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn codewords_skip_comments_and_blanks() {
        let input = "# header\n0101\n\n1100\r\n";
        let cws = parse_codewords(input, Some(4)).unwrap();
        assert_eq!(cws.len(), 2);
        assert_eq!(cws[1].bits(), &[1, 1, 0, 0]);
    }

    #[test]
    fn codeword_errors_carry_line_numbers() {
        assert_eq!(
            parse_codewords("0101\n01x1\n", None),
            Err(FormatError::BadChar {
                line: 2,
                column: 3,
                found: 'x'
            })
        );
        assert_eq!(
            parse_codewords("0101\n011\n", Some(4)),
            Err(FormatError::WrongLength {
                line: 2,
                expected: 4,
                found: 3
            })
        );
    }

    #[test]
    fn schedules_reject_signs_and_overflow() {
        assert!(parse_schedules("1,-2,3\n", None).is_err());
        assert!(parse_schedules("1,+2\n", None).is_err());
        assert!(parse_schedules("1,,2\n", None).is_err());
        assert!(parse_schedules("99999999999999999999999\n", None).is_err());
        assert_eq!(
            parse_schedules(" 3 , 0,1,0\n", Some(4)).unwrap()[0].delays(),
            &[3, 0, 1, 0]
        );
    }

    #[test]
    fn bits_trim_outer_whitespace() {
        assert_eq!(parse_bits(" 0110\n").unwrap(), vec![0, 1, 1, 0]);
        assert!(parse_bits("01 10").is_err());
    }

    #[test]
    fn trace_rows() {
        let t =
            parse_trace("# delaychan-trace v1\nblock,case,bank,spent\n0,2a,8,40\n1, 2b ,8,96\n")
                .unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[1].case, BankCase::HeavySteady);
        assert_eq!(t[1].spent, 96);
        assert!(matches!(
            parse_trace("0,1a,3\n"),
            Err(FormatError::WrongFieldCount { .. })
        ));
        assert!(matches!(
            parse_trace("0,9z,3,4\n"),
            Err(FormatError::Invalid { .. })
        ));
        assert!(matches!(
            parse_trace("0,1a,-3,4\n"),
            Err(FormatError::BadNumber { field: 3, .. })
        ));
    }

    proptest! {
        #[test]
        fn trace_format_round_trips(rows in prop::collection::vec((any::<usize>(), 0usize..4, any::<usize>(), any::<u64>()), 0..10)) {
            let cases = [BankCase::LightFlush, BankCase::LightBank, BankCase::HeavyFill, BankCase::HeavySteady];
            let entries: Vec<TraceEntry> = rows
                .into_iter()
                .map(|(block, c, bank, spent)| TraceEntry { block, case: cases[c], bank, spent })
                .collect();
            prop_assert_eq!(parse_trace(&write_trace(&entries)).unwrap(), entries);
        }

        #[test]
        fn codeword_format_round_trips(rows in prop::collection::vec(prop::collection::vec(0u8..2, 1..40), 0..8)) {
            let cws: Vec<Codeword> = rows.into_iter().map(|b| Codeword::from_bits(b).unwrap()).collect();
            let text = write_codewords(&cws);
            prop_assert_eq!(parse_codewords(&text, None).unwrap(), cws);
        }

        #[test]
        fn schedule_format_round_trips(rows in prop::collection::vec(prop::collection::vec(any::<u64>(), 1..20), 0..6)) {
            let ds: Vec<DelaySchedule> = rows.into_iter().map(DelaySchedule::new).collect();
            let text = write_schedules(&ds);
            prop_assert_eq!(parse_schedules(&text, None).unwrap(), ds);
        }
    }
}
