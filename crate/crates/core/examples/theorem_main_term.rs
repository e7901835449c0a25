//! The finite main term built from smooth parts and progression means,
//! against the correlation sum of two_squares at `n1` and `n2 + 1`.

use multcorr::linsys::{correlation_sum, ConvexBody, LinearSystem};
use multcorr::localdensity::predict_main_term_theorem;
use multcorr::multfunc::{build_sieve, MultiplicativeFunction};
use multcorr::wtrick::{make_wcontext, WOverrides};

fn main() -> multcorr::Result<()> {
    let sys = LinearSystem::from_matrix(&[vec![1, 0], vec![0, 1]], &[1, 1])?;
    let body = ConvexBody::unit_box(2)?;
    let f = MultiplicativeFunction::two_squares();
    println!("T,W~,tuples,empirical,prediction,ratio");
    for t in [1_000u64, 3_000, 10_000] {
        let tbl = build_sieve(&f, t + 1)?;
        let wctx = make_wcontext(t, &WOverrides::default())?;
        let emp = correlation_sum(&[&tbl, &tbl], &sys, &body, t)?.raw_sum;
        let p = predict_main_term_theorem(&sys, &[f.clone(), f.clone()], &[&tbl, &tbl], &body, &wctx, t)?;
        println!(
            "{t},{},{},{emp},{:.1},{:.4}",
            p.w_tilde,
            p.tuples,
            p.value,
            emp / p.value
        );
    }
    Ok(())
}
