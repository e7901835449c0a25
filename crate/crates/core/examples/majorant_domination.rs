//! Pointwise domination `|h(n)| <= C nu♯(n) nu♭(n)` off the exceptional set,
//! for both forms of the second `nu♭` sum.

use multcorr::majorant::{domination_scan, FlatForm, Majorant, MajorantParams};
use multcorr::multfunc::MultiplicativeFunction;

fn main() -> multcorr::Result<()> {
    let funcs = [
        MultiplicativeFunction::two_squares(),
        MultiplicativeFunction::delta_omega(0.5)?,
        MultiplicativeFunction::abs_lambda_delta(100_000)?,
    ];
    println!("function,form,T,max_ratio,argmax,in_S,uncovered");
    for h in &funcs {
        for form in [FlatForm::Final, FlatForm::PrimePowers] {
            for t in [10_000u64, 100_000] {
                let m = Majorant::new(h, t, MajorantParams::default().with_flat_form(form))?;
                let rep = domination_scan(&m)?;
                println!(
                    "{},{:?},{},{:.6},{},{},{}",
                    h.name(),
                    form,
                    t,
                    rep.max_ratio,
                    rep.argmax,
                    rep.exceptional,
                    rep.uncovered
                );
            }
        }
    }
    Ok(())
}
