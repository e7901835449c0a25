//! W-trick scaffolding: the context at a few scales, residue means, the
//! smooth-part partition of a correlation sum and the square-divisor set.

use multcorr::linsys::{ConvexBody, LinearSystem};
use multcorr::multfunc::{build_sieve, MultiplicativeFunction};
use multcorr::wtrick::{
    exact_smooth_partition, exceptional_square_density, make_wcontext, residue_mean_table, stability_scan, WOverrides,
};

fn main() -> multcorr::Result<()> {
    for x in [1_000u64, 1_000_000, 1_000_000_000_000] {
        let c = make_wcontext(x, &WOverrides::default())?;
        println!(
            "x = {x}: w = {:.3}, W = {}, W~ = {}, audit {:?}",
            c.w_of_x, c.w, c.w_tilde, c.audit
        );
    }

    let t = 3_000u64;
    let tbl = build_sieve(&MultiplicativeFunction::two_squares(), 4 * t + 1)?;
    let wctx = make_wcontext(
        t,
        &WOverrides {
            w_of_x: Some(3.0),
            ..Default::default()
        },
    )?;
    let means = residue_mean_table(&tbl, 4 * t, 12, &wctx)?;
    println!("\nS(x; 12, A): {:?}", means.means);

    let sys = LinearSystem::from_matrix(&[vec![1, 0], vec![1, 3]], &[1, 1])?;
    let body = ConvexBody::unit_box(2)?;
    let part = exact_smooth_partition(&[&tbl, &tbl], &sys, &body, t, &wctx)?;
    println!("\n(w1,w2),count,sum  [largest groups of {}]", part.groups.len());
    let mut groups: Vec<_> = part.groups.iter().collect();
    groups.sort_by(|a, b| b.1.sum.total_cmp(&a.1.sum));
    for (k, g) in groups.iter().take(8) {
        println!("{:?},{},{}", k.as_slice(), g.count, g.sum);
    }
    println!("total {} over {} lattice points", part.total, part.lattice_count);

    let big = build_sieve(&MultiplicativeFunction::delta_omega(0.5)?, 1_000_000)?;
    let sq = exceptional_square_density(big.spf_table(), 1_000_000, 2.0)?;
    println!(
        "\nsquare-divisor set at 1e6: {} elements, density {:.5}, zeta tail {:.5}",
        sq.count, sq.density, sq.zeta_tail
    );
    let s = stability_scan(&big, 1_000_000, 1.0, 3, 1)?;
    println!(
        "stability over (x/log x, x), q = 3: max normalised deviation {:.4}",
        s.max_normalized
    );
    Ok(())
}
