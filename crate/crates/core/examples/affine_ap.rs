//! Arithmetic progressions: the pipeline against the closed affine count.

use num_bigint::BigUint;
use orbital_ssp::{ihm, oracle, Family};

fn main() -> orbital_ssp::Result<()> {
    let (c, d) = (BigUint::from(1001u32), BigUint::from(3u32));
    for n in [10usize, 20, 30] {
        // Half the elements, with the offsets summing to the middle of their range.
        let s = n / 2;
        let t = &c * s + &d * (s * (n - 1) / 2);
        let inst = Family::Ap { n, k1: c.clone(), k2: d.clone() }.generate(Some(t))?;
        let sol = ihm::solve(&inst, &ihm::SolveOptions { count_only: true, ..Default::default() })?;
        let aff = oracle::count_affine(n, &c, &d, inst.target());
        println!("n={n} T={} pipeline {} affine {} ({} ms)", inst.target(), sol.count, aff, sol.millis);
    }
    Ok(())
}
