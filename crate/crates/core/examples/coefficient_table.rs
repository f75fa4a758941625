//! Recomputes the reference coefficient table and cross-checks the fast
//! extraction against explicit expansion for small k.
//!
//!     cargo run --release --example coefficient_table [k_max]

use seqprove::nullstellensatz::{
    fk_coefficient, fk_coefficient_bruteforce, fk_target_coefficient, verify_table, ExponentVector, Orientation,
    BRUTE_FORCE_MAX_K,
};

fn main() -> seqprove::Result<()> {
    let k_max: usize = std::env::args().nth(1).map_or(23, |s| s.parse().expect("k_max"));

    for k in 3..=BRUTE_FORCE_MAX_K {
        let target = ExponentVector::target(k);
        for o in [Orientation::Ascending, Orientation::Descending] {
            let fast = fk_coefficient(k, &target, o)?;
            let slow = fk_coefficient_bruteforce(k, &target, o)?;
            println!("k = {k} {:>10}: fast {fast:>5}  expanded {slow:>5}", o.as_str());
            assert_eq!(fast, slow);
        }
    }

    let report = verify_table(10, k_max.clamp(10, 23))?;
    print!("{report}");
    println!("all rows match: {}", report.all_match());

    if k_max > 23 {
        for k in 24..=k_max {
            println!("k = {k}: {}", fk_target_coefficient(k)?);
        }
    }
    Ok(())
}
