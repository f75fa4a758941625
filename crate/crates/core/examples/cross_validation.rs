//! Samples concrete instances of every merge scenario in Z_n and confirms
//! each forbidden block of the compressed set really is nonzero.
//!
//!     cargo run --release --example cross_validation [k] [modulus] [samples]

use seqprove::compression::scenarios;
use seqprove::oracle::{cross_validate_scenario, FiniteAbelianGroup};
use seqprove::search::Mode;

fn main() -> seqprove::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().expect("integer argument"));
    let k = args.next().unwrap_or(6) as usize;
    let n = args.next().unwrap_or(101);
    let samples = args.next().unwrap_or(200) as usize;
    let g = FiniteAbelianGroup::cyclic(n)?;

    for mode in [Mode::ZeroSum, Mode::ZeroSumNoInverse, Mode::General] {
        for (i, sc) in scenarios(k, mode)?.iter().enumerate() {
            let r = cross_validate_scenario(sc, &g, samples, 7 + i as u64)?;
            println!(
                "{:<20} merge into x_{}: {}/{} validated, {} skipped, {} failures",
                mode.as_str(),
                sc.merge_index,
                r.validated,
                r.samples,
                r.skipped,
                r.failures.len()
            );
        }
    }
    Ok(())
}
