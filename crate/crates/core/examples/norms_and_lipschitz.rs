//! Coefficient norms against brute-force divided-difference suprema.

use padic_wavelet::calculus::{
    lipschitz_constant, norm_cn_bruteforce, norm_n, phi_sup_bruteforce, BruteForceConfig,
};
use padic_wavelet::text::parse_function;

const F: &str = "\
field zp p=2 prec=24
level 2 depth 1
term r=0 j=2 c=1
term r=1 j=1 c=1/2
term r=1 j=0 c=4
";

fn main() -> padic_wavelet::Result<()> {
    let f = parse_function(F)?;
    let cfg = BruteForceConfig::default();
    println!("|f|_2 from coefficients = {}", norm_n(&f, 2)?);
    for probe in 0..=4 {
        let r = norm_cn_bruteforce(&f, 2, probe, &cfg)?;
        println!(
            "probe R_{probe}: brute force {} over {} tuples",
            r.value, r.tuples
        );
    }
    let a = lipschitz_constant(&f, 2)?;
    let b = phi_sup_bruteforce(&f, 2, 4, &cfg)?;
    println!("A_f = {a}, max |Φ_2 f| over R_4 = {}", b.value);
    Ok(())
}
