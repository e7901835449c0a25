//! Character groups, the restricted character-sum identity, and the two
//! progression-stability probes on a grid of `x`.

use multcorr::charsum::{major_arc_probe, restricted_identity_check, CharacterGroup};
use multcorr::multfunc::{build_sieve, MultiplicativeFunction};
use multcorr::wtrick::stability_scan;

fn main() -> multcorr::Result<()> {
    let g = CharacterGroup::new(12)?;
    let (induced, rest) = g.partition_by_induced(4)?;
    println!(
        "mod 12: {} characters, {} induced from mod 4, {} restricted\n",
        g.order(),
        induced.len(),
        rest.len()
    );

    let two = build_sieve(&MultiplicativeFunction::two_squares(), 1_000_000)?;
    let delta = build_sieve(&MultiplicativeFunction::delta_omega(0.5)?, 1_000_000)?;

    println!("function,y,q0,W~,A,lhs,rhs,restricted_only,residual,compatible");
    for (tbl, q0, w, a) in [
        (&two, 2u64, 4u64, 1u64),
        (&two, 5, 4, 1),
        (&delta, 3, 2, 1),
        (&delta, 2, 2, 1),
    ] {
        let c = restricted_identity_check(tbl, 10_000, q0, w, a)?;
        println!(
            "{},{},{},{},{},{:.6e},{:.6e},{:.6e},{:.2e},{}",
            tbl.name(),
            c.y,
            q0,
            w,
            a,
            c.lhs,
            c.rhs,
            c.restricted_term.re,
            c.residual,
            c.compatible
        );
    }

    println!("\nfunction,x,stability_max,major_arc_max");
    for (tbl, q, q0, w) in [(&two, 4u64, 2u64, 4u64), (&delta, 3, 2, 2)] {
        for x in [10_000u64, 100_000, 1_000_000] {
            let s = stability_scan(tbl, x, 1.0, q, 1)?;
            let m = major_arc_probe(tbl, x, q0, w, 1, 1.0)?;
            println!(
                "{},{},{:.6},{:.6}",
                tbl.name(),
                x,
                s.max_normalized,
                m.normalized_deviation
            );
        }
    }
    Ok(())
}
