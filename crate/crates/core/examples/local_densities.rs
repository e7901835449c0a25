//! Local densities `alpha`, the Euler factors `beta_p`, and the predicted
//! main term for sums of two squares at `n` and `n + 2`.

use multcorr::linsys::{correlation_sum, ConvexBody, Halfspace, LinearForm, LinearSystem};
use multcorr::localdensity::{alpha_composite, alpha_local, beta_scan, predict_main_term_corollary};
use multcorr::multfunc::{build_sieve, MultiplicativeFunction};

fn main() -> multcorr::Result<()> {
    let sys = LinearSystem::allowing_dependence(1, vec![LinearForm::new(vec![1], 0)?, LinearForm::new(vec![1], 2)?])?;
    println!("alpha(4, 4) = {}", alpha_local(&sys, 2, &[2, 2])?);
    println!("alpha(3, 9) = {}", alpha_local(&sys, 3, &[1, 2])?);
    println!("alpha(12, 18) = {}", alpha_composite(&sys, &[12, 18])?);

    let f = MultiplicativeFunction::two_squares();
    let fs = [f.clone(), f.clone()];
    println!("\np,beta_p,tail_bound,|beta_p - 1| p^2");
    for b in beta_scan(&sys, &fs, 13, 12)? {
        println!("{},{:.8},{:.1e},{:.4}", b.p, b.value, b.tail_bound, b.envelope());
    }

    println!("\nT,P_max,empirical,prediction,ratio");
    for t in [1_000u64, 10_000, 100_000] {
        let tbl = build_sieve(&f, t + 2)?;
        let body = ConvexBody::new(
            1,
            vec![
                Halfspace::from_ints(&[-1], -1, t as i64),
                Halfspace::from_ints(&[1], 1, 1),
            ],
        )?;
        let emp = correlation_sum(&[&tbl, &tbl], &sys, &body, t)?.raw_sum;
        for p_max in [2u64, 10] {
            let r = predict_main_term_corollary(&sys, &fs, &[&tbl, &tbl], &body, t, 12, p_max)?;
            println!("{t},{p_max},{emp},{:.3},{:.4}", r.prediction, emp / r.prediction);
        }
    }
    Ok(())
}
