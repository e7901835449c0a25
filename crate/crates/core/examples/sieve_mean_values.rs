//! Sieve the catalogue functions, then look at mean values, progression
//! means and the Shiu-type envelope. Also round-trips a table through disk.

use multcorr::multfunc::{
    build_sieve, estimate_alpha, mean_value, mean_value_progression, resolve, shiu_upper_bound, SieveTable,
};

fn main() -> multcorr::Result<()> {
    let x = 1_000_000u64;
    println!("function,S(x),S(x;4,1),S(x;4,3),alpha_estimate,S/envelope");
    for name in [
        "all_one",
        "two_squares",
        "delta_omega:0.5",
        "divisor_d",
        "split_primes_gaussian",
    ] {
        let tbl = build_sieve(&resolve(name, x)?, x)?;
        println!(
            "{name},{:.6},{:.6},{:.6},{:.4},{:.4}",
            mean_value(&tbl, x)?,
            mean_value_progression(&tbl, x, 4, 1)?,
            mean_value_progression(&tbl, x, 4, 3)?,
            estimate_alpha(&tbl, x)?,
            mean_value(&tbl, x)? / shiu_upper_bound(&tbl, x, 1)?
        );
    }

    let tbl = build_sieve(&resolve("two_squares", 1000)?, 1000)?;
    let path = std::env::temp_dir().join("two_squares_1000.mcsv");
    tbl.save(&path)?;
    let back = SieveTable::load(&path)?;
    println!(
        "\nreloaded {} values of {}; identical: {}",
        back.len(),
        back.name(),
        back.values() == tbl.values()
    );
    Ok(())
}
