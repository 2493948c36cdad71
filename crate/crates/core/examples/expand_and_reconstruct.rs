//! Wavelet coefficients `b_r^{n,j}` of a combo and reconstruction from them.

use padic_wavelet::calculus::{expand_c0, extract_bnj, extract_bnj_to_depth};
use padic_wavelet::text::{parse_function, write_table};
use padic_wavelet::{RingElem, Scalar};

const G: &str = "\
field zp p=3 prec=12
level 1 depth 1
term r=0 j=1 c=1
term r=1 j=0 c=1
term r=2 j=0 c=-1/2
";

fn main() -> padic_wavelet::Result<()> {
    let g = parse_function(G)?;
    let f = g.params();

    println!("level-0 coefficients on R_2:");
    print!("{}", write_table(&expand_c0(&g, 2)?));

    let t = extract_bnj(&g, 1)?;
    println!("\nlevel-1 coefficients:");
    print!("{}", write_table(&t));
    println!("\nlevel-0 view to depth 2:");
    print!("{}", write_table(&extract_bnj_to_depth(&g, 0, 2)?));

    let h = t.rebuild()?;
    let agree = (0..200u64).all(|n| {
        let x = RingElem::from_u64(&f, n * 7 + 1);
        g.eval(&x).agrees(&h.eval(&x))
    });
    println!("\nrebuilt function agrees on 200 points: {agree}");
    let g4 = g.eval(&RingElem::from_u64(&f, 4));
    println!(
        "g(4) = {g4}, equal to 4 + χ_1(4) = 5: {}",
        g4.agrees(&Scalar::from_i64(f, 5))
    );
    Ok(())
}
