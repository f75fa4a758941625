//! Brute-force structure checks on one finite abelian group.
//!
//!     cargo run --release --example group_oracle [Z2xZ4]

use seqprove::oracle::{
    check_graham_exhaustive, find_sequencing, verify_characterization, verify_merge_pair_dichotomy,
    FiniteAbelianGroup, DEFAULT_SUBSET_BUDGET,
};

fn main() -> seqprove::Result<()> {
    let g: FiniteAbelianGroup = std::env::args().nth(1).as_deref().unwrap_or("Z2xZ4").parse()?;
    println!("{g}, order {}, elementary divisors {}", g.order(), g.elementary_divisor_string());

    let all = g.nonzero_elements();
    match find_sequencing(&g, &all) {
        Some(seq) => println!("G \\ {{0}} sequenced as {}", g.display_elements(&seq)),
        None => println!("G \\ {{0}} has no sequencing"),
    }

    let cap = (g.order() as usize - 1).min(6);
    let graham = check_graham_exhaustive(&g, cap, DEFAULT_SUBSET_BUDGET)?;
    println!(
        "subsets of size <= {cap}: {} checked, {} without a sequencing",
        graham.subsets_checked, graham.counterexample_count
    );

    let ch = verify_characterization(&g, DEFAULT_SUBSET_BUDGET)?;
    println!("sets closed under distinct sums: {}", ch.closed_sets.len());
    for set in &ch.closed_sets {
        println!("  {}", g.display_elements(set));
    }
    println!("pairs {{x, -x}} closed without being a subgroup: {}", ch.pair_exceptions.len());

    let mp = verify_merge_pair_dichotomy(&g, DEFAULT_SUBSET_BUDGET)?;
    println!(
        "merge pair present in {} sets, absent in {} subgroup sets, other failures {}",
        mp.merge_pair_cases,
        mp.subgroup_cases,
        mp.violations.len()
    );
    Ok(())
}
