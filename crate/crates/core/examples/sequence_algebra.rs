//! Zero-tailed coefficient sequences and operators acting on them.

use sno::seq::{kernel_eval, seq_add, seq_inner, seq_matvec, Seq, SeqOperator};
use sno::spectral::Basis;
use sno::C64;

fn main() -> sno::Result<()> {
    let a = Seq::from_real(Basis::Chebyshev, &[1.0, 2.0]);
    let b = Seq::from_real(Basis::Chebyshev, &[0.5, 0.0, 0.0, -1.0, 0.0]);
    let s = seq_add(&a, &b)?;
    println!("a + b = {:?}", s.trimmed().entries());
    println!("<a, b> = {}", seq_inner(&a, &b)?);

    // an operator with 3 columns truncates longer inputs and pads shorter ones
    let op = SeqOperator::from_fn(2, 3, |i, j| C64::new((i + j) as f64, 0.0));
    println!("B a = {:?}", seq_matvec(&op, &a).entries());
    println!("B b = {:?}", seq_matvec(&op, &b).entries());

    let id = SeqOperator::identity(4);
    for (x, y) in [(0.0, 0.0), (0.5, -0.25)] {
        println!("truncated identity kernel K({x}, {y}) = {:.4}", kernel_eval(&id, x, y, Basis::Fourier)?);
    }
    Ok(())
}
