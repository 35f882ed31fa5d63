//! The two canonical index sequences, their closed forms against the
//! box-filling machine, and the complement identity.

use num_bigint::BigUint;
use orbital_ssp::ndp::{self, CurveKind, FillRule};

fn main() -> orbital_ssp::Result<()> {
    let n = 5;
    let p = ndp::index_sequence(CurveKind::P, n);
    let q = ndp::index_sequence(CurveKind::Q, n);
    let show = |v: &[BigUint]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    println!("phi_{n}    = {}", show(&p.values));
    println!("varphi_{n} = {}", show(&q.values));

    for j in 1..=12 {
        assert_eq!(ndp::lb_hb_simulate(j, FillRule::Lb), ndp::index_sequence(CurveKind::P, j));
        assert_eq!(ndp::lb_hb_simulate(j, FillRule::Hb), ndp::index_sequence(CurveKind::Q, j));
        let nn = ndp::tri(j as u64);
        let b = (BigUint::from(1u32) << j) - 1u32;
        for k in 0..=nn {
            assert_eq!(ndp::phi(j, k)? + ndp::varphi(j, nn - k)?, b);
        }
    }
    println!("closed forms match LB/HB filling and phi + varphi = B_j for j <= 12");

    let common: Vec<_> = p.values.iter().filter(|v| q.values.contains(v)).collect();
    println!("shared indices for n={n}: {common:?}");
    Ok(())
}
