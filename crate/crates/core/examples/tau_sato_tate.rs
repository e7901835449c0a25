//! Ramanujan's tau from the eta product, the Deligne bound, and the
//! distribution of `|tau(p)| / p^{11/2}` against the Sato-Tate measure.

use multcorr::arith;
use multcorr::multfunc::{sato_tate_mean, sato_tate_mu, tau};

fn main() -> multcorr::Result<()> {
    let n = 100_000u64;
    let taus = tau::tau_coefficients(n as usize);
    for k in [2u64, 3, 5, 7, 11, 23] {
        println!("tau({k}) = {}", taus[k as usize - 1]);
    }
    let ok = (1..=10_000u64).all(|k| tau::deligne_holds(k, &taus[k as usize - 1]));
    println!("Deligne bound for n <= 10000: {ok}");

    let lambda = tau::normalized_prime_eigenvalues(n);
    let primes = arith::primes_up_to(n);
    let vals: Vec<f64> = primes.iter().map(|&p| lambda[p as usize].abs()).collect();
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    println!(
        "\nmean |lambda(p)| over {} primes: {mean:.6}, Sato-Tate mean {:.6}",
        vals.len(),
        sato_tate_mean()
    );
    println!("alpha,empirical_cdf,mu(alpha)");
    for a in [0.25, 0.5, 1.0, 1.5, 1.9] {
        let emp = vals.iter().filter(|&&v| v <= a).count() as f64 / vals.len() as f64;
        println!("{a},{emp:.4},{:.4}", sato_tate_mu(a)?);
    }
    Ok(())
}
