//! Proof transcripts and their independent verifier.

pub mod format;
pub mod io;
pub mod verify;

pub use format::{
    CertificateHistogram, Line, NodeStatus, ResultRecord, TranscriptHeader, TranscriptRecord, Verdict,
};
pub use io::{create_sink, open_source, write_stream, TranscriptWriter, WithProgress};
pub use verify::{
    combine_verdicts, verify_bytes, verify_path, verify_transcript, Defect, SectionSummary, VerifiedTranscript,
    Verification,
};
