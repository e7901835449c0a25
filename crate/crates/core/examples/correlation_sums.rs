//! Lattice points of a dilated polytope and correlation sums over them.

use multcorr::linsys::{correlation_sum, form_ranges, format_point, ConvexBody, Halfspace, LinearSystem, Scale};
use multcorr::multfunc::{build_sieve, MultiplicativeFunction};

fn main() -> multcorr::Result<()> {
    // The triangle x >= 1/10, y >= 0, x + 2y <= 1.
    let body = ConvexBody::new(
        2,
        vec![
            Halfspace::parse(&["-1", "0"], "-1/10")?,
            Halfspace::parse(&["0", "-1"], "0")?,
            Halfspace::parse(&["1", "2"], "1")?,
        ],
    )?;
    for v in body.vertices() {
        println!("vertex {:?}", format_point(&v));
    }
    let sys = LinearSystem::from_matrix(&[vec![1, 0], vec![1, 2], vec![1, 1]], &[0, 1, 1])?;
    let t = 20_000u64;
    let ranges = form_ranges(&sys, &body, Scale::integer(t)?).expect("non-empty body");
    let top = ranges
        .iter()
        .map(|(_, (hi, _))| hi.floor().to_integer().try_into().unwrap_or(0u64))
        .max()
        .unwrap();
    let tbl = build_sieve(&MultiplicativeFunction::two_squares(), top)?;
    let one = build_sieve(&MultiplicativeFunction::all_one(), top)?;

    println!("\nT,lattice_points,sum,average,seconds");
    for t in [1_000u64, 5_000, 20_000] {
        let c = correlation_sum(&[&tbl, &tbl, &tbl], &sys, &body, t)?;
        let check = correlation_sum(&[&one, &one, &one], &sys, &body, t)?;
        assert_eq!(check.raw_sum, check.lattice_count as f64);
        println!(
            "{t},{},{},{:.6},{:.2}",
            c.lattice_count,
            c.raw_sum,
            c.average(),
            c.runtime_ms / 1e3
        );
    }
    Ok(())
}
