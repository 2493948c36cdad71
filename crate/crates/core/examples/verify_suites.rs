//! Running the randomized identity suites from code.

use padic_wavelet::verify::{self, Mutation, VerifyConfig};
use padic_wavelet::{Backend, FieldParams};

fn main() -> padic_wavelet::Result<()> {
    let mut cfg = VerifyConfig::new(FieldParams::with_default_precision(Backend::FpT, 5)?);
    cfg.trials = 40;
    cfg.seed = 1;
    print!("{}", verify::run(&cfg));

    cfg.mutation = Mutation::LowerBasisSign;
    let report = verify::run_selected(&cfg, &["basis_change"]);
    println!("\nwith a sign error in lower_basis:");
    print!("{report}");
    Ok(())
}
