//! Joint average of `nu(W n1 + 1) nu(W n2 + 1) nu(W (n1 + n2) + 1)` over the
//! dilated simplex, divided by the product of the one-variable averages.

use std::time::Instant;

use multcorr::linsys::{ConvexBody, LinearSystem};
use multcorr::majorant::{linear_forms_ratio, Majorant, MajorantParams};
use multcorr::multfunc::MultiplicativeFunction;
use multcorr::wtrick::{make_wcontext, WOverrides};

fn main() -> multcorr::Result<()> {
    let sys = LinearSystem::from_matrix(&[vec![1, 0], vec![0, 1], vec![1, 1]], &[0, 0, 0])?;
    let body = ConvexBody::unit_simplex(2)?;
    println!("T,W,joint,marginal,ratio,lattice_points,seconds");
    for t in [1_000u64, 3_000, 10_000, 30_000] {
        let start = Instant::now();
        let w = make_wcontext(t, &WOverrides::default())?.w;
        let m = Majorant::new(
            &MultiplicativeFunction::two_squares(),
            w * t + 1,
            MajorantParams::default(),
        )?;
        let nu = m.table();
        let r = linear_forms_ratio(&[&nu, &nu, &nu], &sys, &body, t, &[w; 3], &[1; 3])?;
        println!(
            "{t},{w},{:.6},{:.6},{:.6},{},{:.1}",
            r.joint,
            r.marginals[0],
            r.ratio,
            r.lattice_count,
            start.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
