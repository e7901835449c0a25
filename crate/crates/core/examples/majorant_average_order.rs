//! Average order of the majorant along `n = A mod W~` against `|S_h|` and the
//! Euler-product envelope, plus the density of the exceptional set `S`.

use multcorr::majorant::{
    exceptional_set_density, fit_envelope_constant, majorant_average_order, Majorant, MajorantParams,
};
use multcorr::multfunc::MultiplicativeFunction;
use multcorr::wtrick::{make_wcontext, WOverrides};

fn main() -> multcorr::Result<()> {
    let funcs = [
        MultiplicativeFunction::two_squares(),
        MultiplicativeFunction::delta_omega(0.5)?,
    ];
    println!("function,T,S_h,S_nu,envelope,lower_ratio,upper_ratio");
    let mut densities = Vec::new();
    for h in &funcs {
        for t in [10_000u64, 100_000, 1_000_000] {
            let m = Majorant::new(h, t, MajorantParams::default())?;
            let ctx = make_wcontext(t, &WOverrides::default())?;
            let rep = majorant_average_order(&m, ctx.w_of_x, 2, 1)?;
            println!(
                "{},{},{:.6},{:.6},{:.6},{:.6},{:.6}",
                h.name(),
                t,
                rep.s_h,
                rep.s_nu,
                rep.envelope,
                rep.lower_ratio,
                rep.upper_ratio
            );
            if h.name() == "two_squares" {
                densities.push(exceptional_set_density(&m));
            }
        }
    }
    let kappa = fit_envelope_constant(&densities);
    println!("\nT,S_count,S_density,kappa'*(log T)^(-C1/2)");
    for d in &densities {
        println!("{},{},{:.6},{:.6}", d.t, d.count, d.density, kappa * d.unit_envelope);
    }
    Ok(())
}
