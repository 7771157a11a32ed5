//! CSV export of session and eavesdropper transcripts.
//!
//! Both files start with a header row; the first column, `schema`, carries
//! [`TRANSCRIPT_SCHEMA`] on every row so a reader can reject a file written
//! with a different column layout.
//!
//! Session columns:
//! `schema,slot_index,role,alice_basis,bob_basis,v_est,v_std_error,kept`
//!
//! Eve columns: the session columns followed by
//! `eve_basis,tapped_samples,delta,guess,basis_guess` (empty `delta` and
//! `basis_guess` when undefined).

use std::io::{self, Write};

use super::session::{SessionResult, SlotRole};
use crate::eavesdropper::Guess;

pub const TRANSCRIPT_SCHEMA: &str = "v1";

const SESSION_HEADER: &str = "schema,slot_index,role,alice_basis,bob_basis,v_est,v_std_error,kept";
const EVE_HEADER_EXTRA: &str = "eve_basis,tapped_samples,delta,guess,basis_guess";

fn session_row(result: &SessionResult, k: usize) -> String {
    let s = &result.slots[k];
    let role = match s.role {
        SlotRole::Calibration => "calibration",
        SlotRole::Key => "key",
    };
    format!(
        "{TRANSCRIPT_SCHEMA},{},{role},{},{},{},{},{}",
        s.slot_index, s.alice_basis, s.bob_basis, s.v_est.value, s.v_est.std_error, s.kept
    )
}

pub fn write_session_transcript<W: Write>(mut w: W, result: &SessionResult) -> io::Result<()> {
    writeln!(w, "{SESSION_HEADER}")?;
    for k in 0..result.slots.len() {
        writeln!(w, "{}", session_row(result, k))?;
    }
    Ok(())
}

pub fn write_eve_transcript<W: Write>(mut w: W, result: &SessionResult) -> io::Result<()> {
    writeln!(w, "{SESSION_HEADER},{EVE_HEADER_EXTRA}")?;
    for r in &result.eve_records {
        let delta = r.delta.map(|d| d.to_string()).unwrap_or_default();
        let guess = match r.guess {
            Guess::Match => "match",
            Guess::Mismatch => "mismatch",
        };
        let basis_guess = r.basis_guess.map(|b| b.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{delta},{guess},{basis_guess}",
            session_row(result, r.slot_index),
            r.eve_basis,
            r.tapped.len()
        )?;
    }
    Ok(())
}
