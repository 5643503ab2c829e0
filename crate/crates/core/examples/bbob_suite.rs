//! Builds the 24-function suite and evaluates each function at its optimum
//! and at the origin.
//!
//!     cargo run --example bbob_suite -- 5 1

use elacomp::bbob::bbob_suite;
use elacomp::problem::Payload;

fn main() -> elacomp::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let dim: usize = args.next().map_or(5, |a| a.parse().expect("dimension"));
    let instance: u64 = args.next().map_or(1, |a| a.parse().expect("instance seed"));

    println!("{:>4} {:>14} {:>14} {:>14}", "fid", "f_opt", "f(x_opt)", "f(0)");
    for p in bbob_suite(dim, instance)? {
        let Payload::Bbob(inst) = &p.payload else { unreachable!() };
        let at_opt = p.evaluate(&inst.shift)?;
        let at_origin = p.evaluate(&vec![0.0; dim])?;
        println!("{:>4} {:>14.6} {:>14.6} {:>14.6}", inst.function_id, inst.f_opt, at_opt, at_origin);
    }
    Ok(())
}
