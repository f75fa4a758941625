//! Checks a transcript with the standalone verifier. Without an argument it
//! builds a small proof in memory, verifies it, then flips one multiplier
//! and shows the rejection.
//!
//!     cargo run --example verify_transcript [path]

use seqprove::driver::{prove_to_bytes, ProveOptions};
use seqprove::search::{Mode, ModeConfig};
use seqprove::transcript::{verify_bytes, verify_path, Verification};

fn show(label: &str, v: &Verification) {
    match v {
        Verification::Accepted(t) => println!("{label}: accepted, {} section(s), {}", t.sections.len(), t.verdict.as_str()),
        Verification::Rejected(d) => println!("{label}: rejected, {d}"),
    }
}

fn main() -> seqprove::Result<()> {
    if let Some(path) = std::env::args().nth(1) {
        show(&path, &verify_path(path.as_ref())?);
        return Ok(());
    }

    let (_, bytes) = prove_to_bytes(&ProveOptions::new(ModeConfig::new(5, Mode::General)))?;
    show("original", &verify_bytes(&bytes)?);

    let text = String::from_utf8(bytes).expect("utf-8");
    let tampered = text.replacen("\"multipliers\":[\"1\"", "\"multipliers\":[\"2\"", 1);
    assert_ne!(text, tampered);
    show("tampered", &verify_bytes(tampered.as_bytes())?);
    Ok(())
}
